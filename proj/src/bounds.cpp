#include "wielandt/bounds.hpp"

#include <limits>

namespace wielandt {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void attach_context(CheckReport& r, const Instance& inst, std::optional<double> p) {
  r.seed = inst.seed;
  r.dims = std::array<Eigen::Index, 3>{inst.ambient(), inst.n(), inst.d()};
  r.m = inst.m;
  r.big_m = inst.big_m;
  r.p = p;
}

// lhs <= rhs in the Loewner order, with norms of both sides on the report.
CheckReport loewner_report(std::string name, const HermMatrix& lhs, const HermMatrix& rhs, double tol) {
  CheckReport r;
  r.check = std::move(name);
  r.tol = tol;
  const auto cmp = loewner_leq(lhs, rhs, tol);
  r.lhs = op_norm(lhs);
  r.bound = op_norm(rhs);
  r.margin = r.bound - r.lhs;
  r.loewner_pass = cmp.holds;
  r.norm_pass = leq_tol(r.lhs, r.bound, tol);
  r.witness = Witness{cmp.min_eigenvalue, cmp.witness};
  return r;
}

CheckReport scalar_report(std::string name, double lhs, double bound, double tol) {
  CheckReport r;
  r.check = std::move(name);
  r.tol = tol;
  r.lhs = lhs;
  r.bound = bound;
  r.margin = bound - lhs;
  r.norm_pass = leq_tol(lhs, bound, tol);
  r.loewner_pass = r.norm_pass;
  return r;
}

HermMatrix square(const HermMatrix& h) { return HermMatrix(h.matrix() * h.matrix()); }

}  // namespace

double crossover_threshold(double m, double big_m) {
  require_bounds(m, big_m);
  if (!(big_m > m)) throw Error(ErrorKind::InvalidBounds, "crossover threshold needs M > m");
  return 2.0 + 2.0 * std::log(2.0) / std::log(big_m / m);
}

GammaParts gamma(const Instance& inst, double p) {
  require_exponent(p);
  const CMatrix& a = inst.a.matrix();
  const CMatrix& x = inst.x.matrix();
  const CMatrix& y = inst.y.matrix();

  const CMatrix b = inst.phi.apply(CMatrix(x.adjoint() * a * y));
  const CMatrix b_adj = inst.phi.apply(CMatrix(y.adjoint() * a * x));
  const HermMatrix c = inst.phi.apply(HermMatrix(y.adjoint() * a * y));
  const HermMatrix t = inst.phi.apply(HermMatrix(x.adjoint() * a * x));
  const HermMatrix c_inv = mat_inv_pow(c, 1.0);

  // Entries of B carry absolute error ~ N eps |A|; S = B C^{-1} B* inherits
  // |C^{-1}| delta (2|B| + delta). Spectrum below that is unresolvable.
  const double delta = 16.0 * double(inst.ambient()) * kEps * op_norm(inst.a);
  const double floor = op_norm(c_inv) * delta * (2.0 * op_norm(b) + delta);
  const auto se = herm_eig(HermMatrix(b * c_inv.matrix() * b_adj));
  const HermMatrix s = spectral_apply(se, [floor](double v) { return v <= floor ? 0.0 : v; });

  GammaParts g{s, t, p, mat_pow(s, p), mat_inv_pow(t, p), CMatrix()};
  g.gamma = g.s_pow.matrix() * g.t_inv_pow.matrix();
  return g;
}

LhsValues lhs_values(const CMatrix& gamma) {
  const HermMatrix sum(gamma + gamma.adjoint());
  LhsValues v{0.5 * abs_op(sum), 0.5 * sum, 0.0};
  v.half_abs_norm = op_norm(v.half_abs);
  return v;
}

double gamma_norm(const Instance& inst, double p) { return op_norm(gamma(inst, p).gamma); }

CheckReport check_bhatia_davis(const Instance& inst, double tol) {
  const GammaParts g = gamma(inst, 1.0);
  const double c = wielandt_factor(inst.m, inst.big_m);
  CheckReport r = loewner_report("bhatia_davis", g.s, (c * c) * g.t, tol);
  attach_context(r, inst, std::nullopt);
  return r;
}

TheoremReports check_theorem(const GammaParts& g, const LhsValues& lhs, double m, double big_m, int which,
                             double tol) {
  const double bound = bound_theorem(which, m, big_m, g.p);
  const HermMatrix rhs = HermMatrix::scalar(g.t.dim(), bound);
  const std::string name = "thm" + std::to_string(which);

  TheoremReports out{loewner_report(name + "_abs", lhs.half_abs, rhs, tol),
                     loewner_report(name + "_sym", lhs.half_sym, rhs, tol)};
  // Both forms compare the same norm |(G+G*)/2| = ||G+G*|/2| against the bound.
  for (CheckReport* r : {&out.abs_form, &out.sym_form}) {
    r->lhs = lhs.half_abs_norm;
    r->bound = bound;
    r->margin = bound - r->lhs;
    r->norm_pass = leq_tol(r->lhs, bound, tol);
    r->p = g.p;
  }
  return out;
}

TheoremReports check_theorem(const Instance& inst, double p, int which, double tol) {
  const GammaParts g = gamma(inst, p);
  TheoremReports out = check_theorem(g, lhs_values(g), inst.m, inst.big_m, which, tol);
  attach_context(out.abs_form, inst, p);
  attach_context(out.sym_form, inst, p);
  return out;
}

CheckReport check_gamma_norm(const GammaParts& g, double m, double big_m, int which, double tol) {
  if (which != 2 && which != 3) throw Error(ErrorKind::PreconditionViolated, "gamma norm bound is family 2 or 3");
  CheckReport r = scalar_report("gamma_norm_thm" + std::to_string(which), op_norm(g.gamma),
                                bound_theorem(which, m, big_m, g.p), tol);
  r.p = g.p;
  return r;
}

CheckReport check_sym_part_norm(const GammaParts& g, double tol) {
  const double sym = op_norm(HermMatrix(g.gamma));  // HermMatrix(G) = (G + G*)/2
  CheckReport r = scalar_report("sym_part_norm", sym, op_norm(g.gamma), tol);
  r.p = g.p;
  return r;
}

ProofChainReport check_proof_chain(const GammaParts& g, double m, double big_m, double tol) {
  const double p = g.p;
  ProofChainReport r;
  r.links[0] = op_norm(HermMatrix(g.gamma));  // |G + G*|/2
  const HermMatrix s2p = square(g.s_pow);
  const HermMatrix t2p = square(g.t_inv_pow);
  r.links[1] = op_norm(s2p + t2p) / 2;
  const double t_inv_norm = op_norm(mat_inv_pow(g.t, 1.0));
  r.links[2] = (std::pow(op_norm(g.s), 2 * p) + std::pow(t_inv_norm, 2 * p)) / 2;
  r.links[3] = bound_thm1(m, big_m, p);
  for (std::size_t i = 0; i < 3; ++i) r.holds[i] = leq_tol(r.links[i], r.links[i + 1], tol);
  return r;
}

CheckReport check_power_order(const GammaParts& g, double m, double big_m, double tol) {
  if (!(g.p > 0 && g.p <= 1))
    throw Error(ErrorKind::PreconditionViolated, "power order needs 0 < p <= 1");
  const double factor = std::pow(wielandt_factor(m, big_m), 2 * g.p);
  CheckReport r = loewner_report("power_order", g.s_pow, factor * mat_pow(g.t, g.p), tol);
  r.p = g.p;
  return r;
}

BlockEquivalenceReport check_lemma_block_equivalence(const CMatrix& x, double t, double tol) {
  if (x.size() == 0) throw Error(ErrorKind::DimensionMismatch, "block equivalence needs a non-empty X");
  if (!(t >= 0) || !std::isfinite(t)) throw Error(ErrorKind::PreconditionViolated, "t must be >= 0");
  const Eigen::Index rows = x.rows(), cols = x.cols();
  BlockEquivalenceReport r;
  r.t = t;
  r.norm = op_norm(x);
  const double scale = std::max({1.0, t, r.norm});

  r.abs_leq = loewner_leq(abs_op(x), HermMatrix::scalar(cols, t), tol).holds;
  r.norm_leq = r.norm <= t + tol * scale;

  CMatrix block(rows + cols, rows + cols);
  block << t * CMatrix::Identity(rows, rows), x, x.adjoint(), t * CMatrix::Identity(cols, cols);
  r.block_min_eigenvalue = herm_eig(HermMatrix(block)).values(0);
  r.block_psd = r.block_min_eigenvalue >= -tol * scale;
  return r;
}

CheckReport check_lemma_square_order(const HermMatrix& a, const HermMatrix& b, double m, double big_m, double tol) {
  require_bounds(m, big_m);
  if (a.dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, "A and B must share dimension");
  const double scale = std::max({1.0, op_norm(a), op_norm(b)});
  const auto eb = herm_eig(b);
  if (herm_eig(a).values(0) < -tol * scale) throw Error(ErrorKind::PreconditionViolated, "A is not PSD");
  if (!loewner_leq(a, b, tol).holds) throw Error(ErrorKind::PreconditionViolated, "A <= B fails");
  if (eb.values(0) < m - tol * scale || eb.values(eb.values.size() - 1) > big_m + tol * scale)
    throw Error(ErrorKind::PreconditionViolated, "spectrum of B is outside [m, M]");
  const double k = (big_m + m) * (big_m + m) / (4 * big_m * m);
  return loewner_report("lemma_square_order", square(a), k * square(b), tol);
}

CheckReport check_fact_norm_anticommutator(const HermMatrix& a, const HermMatrix& b, double tol) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, "A and B must share dimension");
  for (const HermMatrix* h : {&a, &b}) {
    const auto e = herm_eig(*h);
    if (e.values(0) < -Tolerances::psd * spectral_scale(e.values))
      throw Error(ErrorKind::NotPSD, "anticommutator fact needs PSD operands");
  }
  const CMatrix ab = a.matrix() * b.matrix();
  return scalar_report("fact_anticommutator", op_norm(CMatrix(ab + ab.adjoint())),
                       op_norm(square(a) + square(b)), tol);
}

CheckReport check_scalar_wielandt(const CVector& x, const CVector& y, const HermMatrix& a, double m, double big_m,
                                  double tol) {
  require_bounds(m, big_m);
  if (x.size() != a.dim() || y.size() != a.dim())
    throw Error(ErrorKind::DimensionMismatch, "vectors must match the operator dimension");
  if (std::abs(x.dot(y)) > tol * std::max(1.0, x.norm() * y.norm()))
    throw Error(ErrorKind::PreconditionViolated, "x and y are not orthogonal");
  const auto e = herm_eig(a);
  const double scale = std::max(1.0, big_m);
  if (e.values(0) < m - tol * scale || e.values(e.values.size() - 1) > big_m + tol * scale)
    throw Error(ErrorKind::PreconditionViolated, "spectrum of A is outside [m, M]");
  const CMatrix& am = a.matrix();
  const double c = wielandt_factor(m, big_m);
  const double lhs = std::norm(x.dot(am * y));  // dot conjugates the left operand
  const double rhs = c * c * x.dot(am * x).real() * y.dot(am * y).real();
  return scalar_report("scalar_wielandt", lhs, rhs, tol);
}

BoundComparison compare_bounds(double m, double big_m, double p, double tol) {
  BoundComparison r;
  r.m = m;
  r.big_m = big_m;
  r.p = p;
  for (int i = 0; i < 3; ++i) r.values[i] = bound_theorem(i + 1, m, big_m, p);
  const double t1 = r.values[0], t2 = r.values[1], t3 = r.values[2];

  r.tightest = 1;
  for (int i = 1; i < 3; ++i)
    if (r.values[i] < r.values[r.tightest - 1]) r.tightest = i + 1;

  r.thm1_ge_thm2 = leq_tol(t2, t1, tol);
  if (p <= 0.5) r.thm3_ge_thm2 = leq_tol(t2, t3, tol);
  if (p > 0.5 && p <= 2) r.thm3_le_thm2 = leq_tol(t3, t2, tol);
  if (big_m > m) {
    r.crossover = crossover_threshold(m, big_m);
    if (p > *r.crossover) r.thm2_le_thm3 = leq_tol(t2, t3, tol);
  }

  const double c = wielandt_factor(m, big_m);
  r.chain_rhs_p = std::pow(c, p);
  r.chain_rhs_2p = std::pow(c, 2 * p);
  r.chain_holds_p = leq_tol(r.chain_rhs_p, t2, tol);
  r.chain_holds_2p = leq_tol(r.chain_rhs_2p, t2, tol);
  return r;
}

}  // namespace wielandt
