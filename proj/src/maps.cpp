#include "wielandt/maps.hpp"

#include <cmath>
#include <string>

#include "wielandt/random.hpp"

namespace wielandt {

namespace {

// Representation constraints are validated loosely enough to accept user
// input that went through a decimal text format.
constexpr double kConstraintTol = 1e-10;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_isometry(const CMatrix& v, const char* what) {
  require_finite(v, what);
  const CMatrix gram = v.adjoint() * v;
  const double err = (gram - CMatrix::Identity(v.cols(), v.cols())).norm();
  if (err > kConstraintTol * std::max(1.0, double(v.cols())))
    throw Error(ErrorKind::PreconditionViolated,
                std::string(what) + " is not an isometry (|V*V - I|_F = " + std::to_string(err) + ")");
}

CMatrix unit(Eigen::Index n, Eigen::Index i, Eigen::Index j) {
  CMatrix e = CMatrix::Zero(n, n);
  e(i, j) = 1.0;
  return e;
}

CMatrix apply_blockwise(const PositiveMap& phi, const CMatrix& block) {
  const Eigen::Index n = phi.in_dim(), d = phi.out_dim();
  CMatrix out(2 * d, 2 * d);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) out.block(r * d, c * d, d, d) = phi.apply(CMatrix(block.block(r * n, c * n, n, n)));
  return out;
}

}  // namespace

PositiveMap PositiveMap::identity(Eigen::Index n) {
  if (n < 1) throw Error(ErrorKind::DimensionError, "identity map needs n >= 1");
  return PositiveMap(IdentityRep{n}, n, n);
}

PositiveMap PositiveMap::compression(CMatrix v) {
  if (v.rows() < 1 || v.cols() < 1) throw Error(ErrorKind::DimensionError, "empty compression");
  require_isometry(v, "compression V");
  const auto n = v.rows(), d = v.cols();
  return PositiveMap(CompressionRep{std::move(v)}, n, d);
}

PositiveMap PositiveMap::kraus(std::vector<CMatrix> ops) {
  if (ops.empty()) throw Error(ErrorKind::DimensionError, "Kraus list is empty");
  const auto n = ops.front().rows(), d = ops.front().cols();
  if (n < 1 || d < 1) throw Error(ErrorKind::DimensionError, "empty Kraus operator");
  CMatrix sum = CMatrix::Zero(d, d);
  for (const auto& k : ops) {
    if (k.rows() != n || k.cols() != d)
      throw Error(ErrorKind::DimensionMismatch, "Kraus operators must share shape");
    require_finite(k, "Kraus operator");
    sum += k.adjoint() * k;
  }
  const double err = (sum - CMatrix::Identity(d, d)).norm();
  if (err > kConstraintTol * std::max(1.0, double(d)))
    throw Error(ErrorKind::PreconditionViolated, "Kraus operators are not unital: |sum K*K - I|_F = " +
                                                     std::to_string(err));
  return PositiveMap(KrausRep{std::move(ops)}, n, d);
}

PositiveMap PositiveMap::stinespring(CMatrix w, Eigen::Index ancilla) {
  if (ancilla < 1 || w.rows() < 1 || w.cols() < 1 || w.rows() % ancilla != 0)
    throw Error(ErrorKind::DimensionError, "Stinespring isometry rows must be a multiple of the ancilla dimension");
  require_isometry(w, "Stinespring W");
  const auto n = w.rows() / ancilla, d = w.cols();
  return PositiveMap(StinespringRep{std::move(w), ancilla}, n, d);
}

PositiveMap PositiveMap::convex(std::vector<ConvexTerm> terms) {
  if (terms.empty()) throw Error(ErrorKind::DimensionError, "convex combination is empty");
  double total = 0;
  const auto n = terms.front().map->in_dim(), d = terms.front().map->out_dim();
  for (const auto& t : terms) {
    if (!t.map) throw Error(ErrorKind::PreconditionViolated, "null map in convex combination");
    if (!(t.weight >= 0) || !std::isfinite(t.weight))
      throw Error(ErrorKind::PreconditionViolated, "convex weights must be non-negative");
    if (t.map->in_dim() != n || t.map->out_dim() != d)
      throw Error(ErrorKind::DimensionMismatch, "convex terms must share dimensions");
    total += t.weight;
  }
  if (std::abs(total - 1.0) > kConstraintTol)
    throw Error(ErrorKind::PreconditionViolated, "convex weights sum to " + std::to_string(total));
  return PositiveMap(ConvexRep{std::move(terms)}, n, d);
}

PositiveMap PositiveMap::linear_action(Eigen::Index in_dim, Eigen::Index out_dim, CMatrix action) {
  if (in_dim < 1 || out_dim < 1 || action.rows() != out_dim * out_dim || action.cols() != in_dim * in_dim)
    throw Error(ErrorKind::DimensionMismatch, "linear action must be d^2 x n^2");
  require_finite(action, "linear action");
  PositiveMap phi(LinearActionRep{in_dim, out_dim, std::move(action)}, in_dim, out_dim);

  const CMatrix unit_image = phi.apply(CMatrix::Identity(in_dim, in_dim));
  if ((unit_image - CMatrix::Identity(out_dim, out_dim)).norm() > kConstraintTol * std::max<double>(1, out_dim))
    throw Error(ErrorKind::PreconditionViolated, "linear action is not unital");
  for (Eigen::Index i = 0; i < in_dim; ++i)
    for (Eigen::Index j = 0; j < in_dim; ++j) {
      const CMatrix a = phi.apply(unit(in_dim, i, j));
      const CMatrix b = phi.apply(unit(in_dim, j, i));
      if ((a - b.adjoint()).norm() > kConstraintTol)
        throw Error(ErrorKind::PreconditionViolated, "linear action does not preserve adjoints");
    }
  return phi;
}

PositiveMap PositiveMap::transpose(Eigen::Index n) {
  CMatrix l = CMatrix::Zero(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) l(j + i * n, i + j * n) = 1.0;
  return linear_action(n, n, std::move(l));
}

std::string PositiveMap::kind() const {
  return std::visit(Overloaded{[](const IdentityRep&) { return "identity"; },
                               [](const CompressionRep&) { return "compression"; },
                               [](const KrausRep&) { return "kraus"; },
                               [](const StinespringRep&) { return "stinespring"; },
                               [](const ConvexRep&) { return "convex"; },
                               [](const LinearActionRep&) { return "linear_action"; }},
                    rep_);
}

CMatrix PositiveMap::apply(const CMatrix& t) const {
  if (t.rows() != in_dim_ || t.cols() != in_dim_)
    throw Error(ErrorKind::DimensionMismatch, "map expects " + std::to_string(in_dim_) + "x" +
                                                  std::to_string(in_dim_) + " input, got " +
                                                  std::to_string(t.rows()) + "x" + std::to_string(t.cols()));
  return std::visit(
      Overloaded{
          [&](const IdentityRep&) -> CMatrix { return t; },
          [&](const CompressionRep& r) -> CMatrix { return r.v.adjoint() * t * r.v; },
          [&](const KrausRep& r) -> CMatrix {
            CMatrix out = CMatrix::Zero(out_dim_, out_dim_);
            for (const auto& k : r.ops) out.noalias() += k.adjoint() * t * k;
            return out;
          },
          [&](const StinespringRep& r) -> CMatrix {
            const Eigen::Index k = r.ancilla;
            CMatrix expanded = CMatrix::Zero(in_dim_ * k, in_dim_ * k);
            for (Eigen::Index i = 0; i < in_dim_; ++i)
              for (Eigen::Index j = 0; j < in_dim_; ++j)
                for (Eigen::Index a = 0; a < k; ++a) expanded(i * k + a, j * k + a) = t(i, j);
            return r.w.adjoint() * expanded * r.w;
          },
          [&](const ConvexRep& r) -> CMatrix {
            CMatrix out = CMatrix::Zero(out_dim_, out_dim_);
            for (const auto& term : r.terms) out += term.weight * term.map->apply(t);
            return out;
          },
          [&](const LinearActionRep& r) -> CMatrix {
            const CVector in = Eigen::Map<const CVector>(t.data(), t.size());
            const CVector img = r.action * in;
            return Eigen::Map<const CMatrix>(img.data(), out_dim_, out_dim_);
          }},
      rep_);
}

std::optional<std::vector<CMatrix>> PositiveMap::kraus_operators() const {
  return std::visit(
      Overloaded{
          [&](const IdentityRep& r) -> std::optional<std::vector<CMatrix>> {
            return std::vector<CMatrix>{CMatrix::Identity(r.dim, r.dim)};
          },
          [&](const CompressionRep& r) -> std::optional<std::vector<CMatrix>> { return std::vector<CMatrix>{r.v}; },
          [&](const KrausRep& r) -> std::optional<std::vector<CMatrix>> { return r.ops; },
          [&](const StinespringRep& r) -> std::optional<std::vector<CMatrix>> {
            std::vector<CMatrix> ops;
            for (Eigen::Index a = 0; a < r.ancilla; ++a) {
              CMatrix k(in_dim_, out_dim_);
              for (Eigen::Index i = 0; i < in_dim_; ++i) k.row(i) = r.w.row(i * r.ancilla + a);
              ops.push_back(std::move(k));
            }
            return ops;
          },
          [&](const ConvexRep& r) -> std::optional<std::vector<CMatrix>> {
            std::vector<CMatrix> ops;
            for (const auto& term : r.terms) {
              auto sub = term.map->kraus_operators();
              if (!sub) return std::nullopt;
              for (auto& k : *sub) ops.push_back(std::sqrt(term.weight) * k);
            }
            return ops;
          },
          [&](const LinearActionRep&) -> std::optional<std::vector<CMatrix>> { return std::nullopt; }},
      rep_);
}

HermMatrix choi(const PositiveMap& phi) {
  const Eigen::Index n = phi.in_dim(), d = phi.out_dim();
  CMatrix c(n * d, n * d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) c.block(i * d, j * d, d, d) = phi.apply(unit(n, i, j));
  return HermMatrix(c);
}

bool is_cp(const PositiveMap& phi, double tol) {
  const auto e = herm_eig(choi(phi));
  return e.values(0) >= -tol * spectral_scale(e.values);
}

ProbeReport two_positivity_probe(const PositiveMap& phi, int trials, std::uint64_t seed, double tol) {
  if (trials < 1) throw Error(ErrorKind::PreconditionViolated, "probe needs at least one trial");
  const Eigen::Index n = phi.in_dim();
  Rng rng(sub_seed(seed, "two-positivity-probe"));
  ProbeReport report;
  report.min_eigenvalue = std::numeric_limits<double>::infinity();

  for (int trial = 0; trial < trials; ++trial) {
    CMatrix block;
    if (trial == 0 && n >= 2) {
      CVector v = CVector::Zero(2 * n);
      v(0) = 1.0;
      v(n + 1) = 1.0;
      block = v * v.adjoint();
    } else if (trial % 2 == 1) {
      const CMatrix v = rng.gaussian(2 * n, 1);
      block = v * v.adjoint() / v.squaredNorm();
    } else {
      const CMatrix g = rng.gaussian(2 * n, 2 * n);
      block = g * g.adjoint() / (g.squaredNorm());
    }
    const auto e = herm_eig(HermMatrix(apply_blockwise(phi, block)));
    report.trials_run = trial + 1;
    if (e.values(0) < report.min_eigenvalue) report.min_eigenvalue = e.values(0);
    if (e.values(0) < -tol * spectral_scale(e.values)) {
      report.violated = true;
      report.witness_trial = trial;
      report.min_eigenvalue = e.values(0);
      report.witness_input = block;
      return report;
    }
  }
  return report;
}

const char* to_string(MapCertificate c) noexcept {
  switch (c) {
    case MapCertificate::CertifiedCP: return "certified CP";
    case MapCertificate::ProbePassed: return "probe-passed";
    case MapCertificate::Violated: return "violated";
  }
  return "unknown";
}

MapCertificate classify_map(const PositiveMap& phi, int probe_trials, std::uint64_t seed, double tol) {
  if (is_cp(phi, tol)) return MapCertificate::CertifiedCP;
  return two_positivity_probe(phi, probe_trials, seed, tol).violated ? MapCertificate::Violated
                                                                     : MapCertificate::ProbePassed;
}

PositiveMap random_unital_cp(std::uint64_t seed, Eigen::Index n, Eigen::Index d, Eigen::Index k) {
  if (n < 1 || d < 1 || k < 1) throw Error(ErrorKind::DimensionError, "map dimensions must be >= 1");
  if (n * k < d)
    throw Error(ErrorKind::DimensionError, "a unital map M_n -> M_d needs n k >= d, got n=" + std::to_string(n) +
                                               " k=" + std::to_string(k) + " d=" + std::to_string(d));
  Rng rng(sub_seed(seed, "unital-cp"));
  return PositiveMap::stinespring(haar_isometry(rng, n * k, d), k);
}

}  // namespace wielandt
