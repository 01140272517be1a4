#pragma once

// Unital linear maps Phi: M_n -> M_d in several representations, their Choi
// matrices, a complete-positivity certificate and a sampling probe for
// 2-positivity.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "wielandt/matcore.hpp"

namespace wielandt {

class PositiveMap;

struct IdentityRep {
  Eigen::Index dim = 1;
};

/// Phi(T) = V* T V with V an n x d isometry.
struct CompressionRep {
  CMatrix v;
};

/// Phi(T) = sum_i K_i* T K_i with n x d operators, sum_i K_i* K_i = I_d.
struct KrausRep {
  std::vector<CMatrix> ops;
};

/// Phi(T) = W* (T (x) I_k) W with W an (n k) x d isometry.
struct StinespringRep {
  CMatrix w;
  Eigen::Index ancilla = 1;
};

struct ConvexTerm {
  double weight = 0;
  std::shared_ptr<const PositiveMap> map;
};

struct ConvexRep {
  std::vector<ConvexTerm> terms;
};

/// Raw action vec(Phi(T)) = L vec(T), column-stacked vec, L is d^2 x n^2.
struct LinearActionRep {
  Eigen::Index in_dim = 1;
  Eigen::Index out_dim = 1;
  CMatrix action;
};

using MapRep = std::variant<IdentityRep, CompressionRep, KrausRep, StinespringRep, ConvexRep, LinearActionRep>;

/// A unital, adjoint-preserving linear map. Immutable once built; the
/// factories validate the representation's defining constraints.
class PositiveMap {
 public:
  static PositiveMap identity(Eigen::Index n);
  static PositiveMap compression(CMatrix v);
  static PositiveMap kraus(std::vector<CMatrix> ops);
  static PositiveMap stinespring(CMatrix w, Eigen::Index ancilla);
  static PositiveMap convex(std::vector<ConvexTerm> terms);
  static PositiveMap linear_action(Eigen::Index in_dim, Eigen::Index out_dim, CMatrix action);
  /// T -> T^T on M_n: positive but not 2-positive for n >= 2.
  static PositiveMap transpose(Eigen::Index n);

  Eigen::Index in_dim() const { return in_dim_; }
  Eigen::Index out_dim() const { return out_dim_; }
  const MapRep& rep() const { return rep_; }
  std::string kind() const;

  CMatrix apply(const CMatrix& t) const;
  HermMatrix apply(const HermMatrix& t) const { return HermMatrix(apply(t.matrix())); }

  /// Kraus operators when the representation admits them (not LinearAction).
  std::optional<std::vector<CMatrix>> kraus_operators() const;

 private:
  PositiveMap(MapRep rep, Eigen::Index in_dim, Eigen::Index out_dim)
      : rep_(std::move(rep)), in_dim_(in_dim), out_dim_(out_dim) {}

  MapRep rep_;
  Eigen::Index in_dim_;
  Eigen::Index out_dim_;
};

/// C = sum_ij E_ij (x) Phi(E_ij), dimension n d.
HermMatrix choi(const PositiveMap& phi);

bool is_cp(const PositiveMap& phi, double tol = Tolerances::psd);

struct ProbeReport {
  bool violated = false;
  int trials_run = 0;
  int witness_trial = -1;
  double min_eigenvalue = 0;  // smallest eigenvalue seen on the witness (or overall)
  CMatrix witness_input;      // 2n x 2n PSD block matrix
};

/// Samples PSD block matrices [[A, B], [B*, C]], applies Phi blockwise and
/// looks for a non-PSD image. Trial 0 uses the rank-one block matrix
/// [[E11, E12], [E21, E22]] when n >= 2. Finding nothing certifies nothing.
ProbeReport two_positivity_probe(const PositiveMap& phi, int trials, std::uint64_t seed,
                                 double tol = Tolerances::psd);

enum class MapCertificate { CertifiedCP, ProbePassed, Violated };

const char* to_string(MapCertificate c) noexcept;

MapCertificate classify_map(const PositiveMap& phi, int probe_trials, std::uint64_t seed,
                            double tol = Tolerances::psd);

/// Stinespring map with a Haar isometry W: C^d -> C^n (x) C^k.
PositiveMap random_unital_cp(std::uint64_t seed, Eigen::Index n, Eigen::Index d, Eigen::Index k);

}  // namespace wielandt
