#pragma once

// Front end for the wielandt-lab tool. Each subcommand is also callable as a
// library function so the acceptance suite can drive it without a process.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wielandt/serialize.hpp"

namespace wielandt::cli {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kSchema = 1;

enum ExitCode : int { kPass = 0, kVerificationFailure = 1, kUsage = 2, kDiscovery = 3 };

/// Raised for invalid flags or flag combinations; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Comma list "0.5,1,2" or grid "start:stop:step". Values within 1e-12 of an
/// integer are snapped to it.
std::vector<double> parse_p_list(const std::string& text);

struct VerifyConfig {
  int trials = 1000;
  Dims dims{4, 2, 2, 2};
  double m = 1;
  double big_m = 2;
  std::vector<double> ps{0.5, 1, 2};
  std::uint64_t seed = 0;
  double tol = Tolerances::check;
  bool force_endpoints = true;
  unsigned threads = 1;
  std::optional<std::string> map_path;       // user-supplied map (JSON)
  std::optional<std::string> operator_path;  // user-supplied A (JSON matrix)

  void validate() const;
};

struct VerifyResult {
  json report;
  int exit_code = kPass;
  long long checks = 0;
  long long failures = 0;
};

VerifyResult run_verify(const VerifyConfig& cfg);

struct BoundsConfig {
  double m = 1;
  double big_m = 2;
  std::vector<double> ps{1};
};

/// CSV text: "# p_star=..." comment, header "m,M,p,thm1,thm2,thm3,tightest", rows.
std::string run_bounds(const BoundsConfig& cfg);

struct SearchResult {
  json report;
  int exit_code = kPass;
  bool discovery = false;
  std::optional<json> witness;
};

SearchResult run_search_command(const SearchConfig& cfg);

struct ExtremalSummary {
  double m = 1, big_m = 2, p = 1;
  bool degenerate = false;
  double lhs = 0;  // Phi(X*AY) Phi(Y*AY)^{-1} Phi(Y*AX)
  double rhs = 0;  // c^2 Phi(X*AX)
  double gamma = 0;
  double half_abs = 0;
  double gamma_norm = 0;
  std::array<double, 3> bounds{};
  std::array<double, 3> margins{};
};

ExtremalSummary run_extremal(double m, double big_m, double p);
std::string format_extremal(const ExtremalSummary& s);

/// Strips wall-clock fields so two reports can be compared.
json without_timestamps(json report);

/// Full command line: args[0] is the subcommand. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wielandt::cli
