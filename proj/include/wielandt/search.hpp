#pragma once

// Empirical probes of the norm form of the operator Wielandt inequality
// conjecture and of how tight the three bound families are.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wielandt/bounds.hpp"

namespace wielandt {

enum class Objective { Conjecture, TightnessThm1, TightnessThm2, TightnessThm3 };

std::string to_string(Objective o);
std::optional<Objective> parse_objective(const std::string& text);

struct SearchConfig {
  Objective objective = Objective::Conjecture;
  Dims dims;
  double m = 1;
  double big_m = 2;
  double p = 1;  // tightness objectives only
  int trials = 1000;
  int refine_steps = 200;
  std::uint64_t seed = 0;
  double tol = Tolerances::check;
  unsigned threads = 1;

  void validate() const;
};

/// |S T^{-1}| / ((M-m)/(M+m))^2 with S, T the p = 1 factors. Values above 1
/// would contradict the conjecture.
double conjecture_ratio(const Instance& inst);

struct CorollaryRatios {
  double abs_form = 0;  // ||G+G*|/2| / c^2
  double sym_form = 0;  // max eig((G+G*)/2) / c^2
};

/// Same normalization for the two consequences of the conjecture, G = S T^{-1}.
CorollaryRatios corollary_ratios(const Instance& inst);

/// Objective value for cfg.objective: the conjecture ratio, or lhs / bound.
double evaluate_objective(const Instance& inst, const SearchConfig& cfg);

struct TracePoint {
  int step = 0;
  double value = 0;
};

struct SearchRecord {
  double best_value = 0;
  Instance best_instance;
  std::int64_t best_trial = 0;  // -1 when the best came from refinement
  int trials_done = 0;
  int failed_trials = 0;  // evaluations that raised (e.g. numerically singular)
  std::vector<TracePoint> trace;
};

/// Evaluates cfg.trials instances: trial 0 is the lifted equality case, trial
/// i >= 1 is gen_instance(sub_seed(seed, i)). Ties resolve to the lowest trial.
SearchRecord random_search(const SearchConfig& cfg);

/// Derivative-free ascent from start: interior eigenvalues of A move through a
/// bounded reparameterization with extreme eigenvalues pinned to m and M, the
/// eigenbasis of A, the isometry pair and a Stinespring isometry move by
/// exp(i s H) with random Hermitian H followed by re-orthonormalization.
/// Improving proposals are accepted; a rejection halves s (from 0.1, stopping
/// below 1e-6).
SearchRecord refine(const Instance& start, const SearchConfig& cfg);

/// random_search followed by refine of the best instance.
SearchRecord run_search(const SearchConfig& cfg);

}  // namespace wielandt
