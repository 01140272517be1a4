#include "wielandt/search.hpp"

#include <cmath>
#include <limits>

#include "wielandt/parallel.hpp"
#include "wielandt/random.hpp"

namespace wielandt {

namespace {

constexpr double kInitialStep = 0.1;
constexpr double kMinStep = 1e-6;
// Interior eigenvalues sitting exactly on m or M map to finite parameters.
constexpr double kEdge = 1.0 - 1e-12;

double squared_factor(double m, double big_m) {
  const double c = wielandt_factor(m, big_m);
  if (!(c > 0)) throw Error(ErrorKind::DegenerateBounds, "m = M: the Wielandt factor vanishes");
  return c * c;
}

int theorem_of(Objective o) {
  switch (o) {
    case Objective::TightnessThm1: return 1;
    case Objective::TightnessThm2: return 2;
    case Objective::TightnessThm3: return 3;
    case Objective::Conjecture: break;
  }
  return 0;
}

// Smooth coordinates of an instance for local search.
struct Params {
  CMatrix basis;      // eigenvectors of A
  RVector interior;   // unconstrained parameters of the interior eigenvalues
  CMatrix frame;      // [X Y]
  std::optional<CMatrix> stinespring;
  Eigen::Index ancilla = 1;
};

Params decompose(const Instance& inst) {
  Params prm;
  const auto e = herm_eig(inst.a);
  prm.basis = e.vectors;
  const Eigen::Index big_n = inst.ambient();
  prm.interior.resize(std::max<Eigen::Index>(big_n - 2, 0));
  const double width = inst.big_m - inst.m;
  for (Eigen::Index i = 1; i + 1 < big_n; ++i) {
    const double u = width > 0 ? 2 * (e.values(i) - inst.m) / width - 1 : 0.0;
    prm.interior(i - 1) = std::atanh(std::clamp(u, -kEdge, kEdge));
  }
  prm.frame.resize(big_n, 2 * inst.n());
  prm.frame << inst.x.matrix(), inst.y.matrix();
  if (const auto* s = std::get_if<StinespringRep>(&inst.phi.rep())) {
    prm.stinespring = s->w;
    prm.ancilla = s->ancilla;
  }
  return prm;
}

Instance compose(const Params& prm, const Instance& like) {
  const Eigen::Index big_n = prm.basis.rows(), n = like.n();
  RVector lambda(big_n);
  lambda(0) = like.m;
  lambda(big_n - 1) = like.big_m;
  for (Eigen::Index i = 1; i + 1 < big_n; ++i)
    lambda(i) = like.m + (like.big_m - like.m) * (1 + std::tanh(prm.interior(i - 1))) / 2;
  HermMatrix a(prm.basis * lambda.cast<Complex>().asDiagonal() * prm.basis.adjoint());
  PositiveMap phi = prm.stinespring ? PositiveMap::stinespring(*prm.stinespring, prm.ancilla) : like.phi;
  return Instance{std::move(a), like.m, like.big_m, Isometry(prm.frame.leftCols(n)),
                  Isometry(prm.frame.rightCols(n)), std::move(phi), like.seed};
}

Params perturb(const Params& prm, double step, Rng& rng) {
  Params out = prm;
  out.basis = unitary_exp(rng.hermitian(prm.basis.rows()), step) * prm.basis;
  out.basis = orthonormalize(out.basis);
  for (Eigen::Index i = 0; i < out.interior.size(); ++i) out.interior(i) += step * rng.normal();
  out.frame = orthonormalize(unitary_exp(rng.hermitian(prm.frame.rows()), step) * prm.frame);
  if (prm.stinespring)
    out.stinespring = orthonormalize(unitary_exp(rng.hermitian(prm.stinespring->rows()), step) * *prm.stinespring);
  return out;
}

std::optional<double> try_evaluate(const Instance& inst, const SearchConfig& cfg) {
  try {
    const double v = evaluate_objective(inst, cfg);
    if (std::isfinite(v)) return v;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Singular && e.kind() != ErrorKind::NotPSD &&
        e.kind() != ErrorKind::NonConvergence && e.kind() != ErrorKind::PreconditionViolated)
      throw;
  }
  return std::nullopt;
}

Instance trial_instance(const SearchConfig& cfg, std::size_t trial) {
  const std::uint64_t s = sub_seed(cfg.seed, static_cast<std::uint64_t>(trial));
  if (trial == 0) return extremal_template(s, cfg.dims, cfg.m, cfg.big_m);
  return gen_instance(s, cfg.dims, cfg.m, cfg.big_m);
}

}  // namespace

std::string to_string(Objective o) {
  switch (o) {
    case Objective::Conjecture: return "conjecture";
    case Objective::TightnessThm1: return "tightness_thm1";
    case Objective::TightnessThm2: return "tightness_thm2";
    case Objective::TightnessThm3: return "tightness_thm3";
  }
  return "unknown";
}

std::optional<Objective> parse_objective(const std::string& text) {
  for (Objective o : {Objective::Conjecture, Objective::TightnessThm1, Objective::TightnessThm2,
                      Objective::TightnessThm3})
    if (to_string(o) == text) return o;
  return std::nullopt;
}

void SearchConfig::validate() const {
  if (trials < 1) throw Error(ErrorKind::PreconditionViolated, "trials must be >= 1");
  if (refine_steps < 0) throw Error(ErrorKind::PreconditionViolated, "refine steps must be >= 0");
  if (!(tol >= 0)) throw Error(ErrorKind::PreconditionViolated, "tolerance must be >= 0");
  dims.validate();
  require_bounds(m, big_m);
  if (!(big_m > m)) throw Error(ErrorKind::DegenerateBounds, "search needs M > m");
  if (objective != Objective::Conjecture) require_exponent(p);
}

double conjecture_ratio(const Instance& inst) {
  const double c2 = squared_factor(inst.m, inst.big_m);
  const GammaParts g = gamma(inst, 1.0);
  return op_norm(g.gamma) / c2;
}

CorollaryRatios corollary_ratios(const Instance& inst) {
  const double c2 = squared_factor(inst.m, inst.big_m);
  const GammaParts g = gamma(inst, 1.0);
  const LhsValues lhs = lhs_values(g);
  const auto e = herm_eig(lhs.half_sym);
  return {lhs.half_abs_norm / c2, e.values(e.values.size() - 1) / c2};
}

double evaluate_objective(const Instance& inst, const SearchConfig& cfg) {
  if (cfg.objective == Objective::Conjecture) return conjecture_ratio(inst);
  const double bound = bound_theorem(theorem_of(cfg.objective), inst.m, inst.big_m, cfg.p);
  if (!(bound > 0)) throw Error(ErrorKind::DegenerateBounds, "bound is zero");
  return lhs_values(gamma(inst, cfg.p)).half_abs_norm / bound;
}

SearchRecord random_search(const SearchConfig& cfg) {
  cfg.validate();
  const auto count = static_cast<std::size_t>(cfg.trials);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> values(count, nan);

  parallel_for(count, cfg.threads, [&](std::size_t i, unsigned) {
    if (auto v = try_evaluate(trial_instance(cfg, i), cfg)) values[i] = *v;
  });

  std::int64_t best = -1;
  int failed = 0;
  for (std::size_t i = 0; i < count; ++i) {
    if (std::isnan(values[i])) {
      ++failed;
      continue;
    }
    if (best < 0 || values[i] > values[static_cast<std::size_t>(best)]) best = static_cast<std::int64_t>(i);
  }
  if (best < 0) throw Error(ErrorKind::Singular, "every trial failed to evaluate");

  return SearchRecord{values[static_cast<std::size_t>(best)], trial_instance(cfg, static_cast<std::size_t>(best)),
                      best, cfg.trials, failed, {}};
}

SearchRecord refine(const Instance& start, const SearchConfig& cfg) {
  const auto initial = try_evaluate(start, cfg);
  if (!initial) throw Error(ErrorKind::Singular, "refinement start does not evaluate");
  SearchRecord rec{*initial, start, -1, 0, 0, {{0, *initial}}};
  if (cfg.refine_steps == 0 || !(start.big_m > start.m)) return rec;

  Rng rng(sub_seed(cfg.seed, "refine"));
  Params current = decompose(start);
  double step = kInitialStep;
  for (int k = 1; k <= cfg.refine_steps && step >= kMinStep; ++k) {
    Params proposal = perturb(current, step, rng);
    std::optional<Instance> candidate;
    try {
      candidate.emplace(compose(proposal, start));
    } catch (const Error&) {
    }
    const auto value = candidate ? try_evaluate(*candidate, cfg) : std::nullopt;
    if (value && *value > rec.best_value) {
      current = std::move(proposal);
      rec.best_value = *value;
      rec.best_instance = std::move(*candidate);
      rec.trace.push_back({k, *value});
    } else {
      step *= 0.5;
    }
  }
  return rec;
}

SearchRecord run_search(const SearchConfig& cfg) {
  SearchRecord found = random_search(cfg);
  SearchRecord refined = refine(found.best_instance, cfg);
  refined.trials_done = found.trials_done;
  refined.failed_trials = found.failed_trials;
  refined.best_trial = refined.trace.size() > 1 ? -1 : found.best_trial;
  return refined;
}

}  // namespace wielandt
