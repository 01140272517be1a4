#include "wielandt/instances.hpp"

#include <cmath>
#include <string>

#include "wielandt/random.hpp"

namespace wielandt {

namespace {

constexpr double kIsometryTol = 1e-10;

std::string dims_text(const Dims& d) {
  return "N=" + std::to_string(d.big_n) + " n=" + std::to_string(d.n) + " d=" + std::to_string(d.d) +
         " k=" + std::to_string(d.k);
}

}  // namespace

Isometry::Isometry(CMatrix v) : v_(std::move(v)) {
  if (v_.rows() < 1 || v_.cols() < 1 || v_.rows() < v_.cols())
    throw Error(ErrorKind::DimensionError, "isometry must be N x n with N >= n >= 1");
  require_finite(v_, "isometry");
  const double err = (v_.adjoint() * v_ - CMatrix::Identity(v_.cols(), v_.cols())).norm();
  if (err > kIsometryTol * std::max<double>(1, v_.cols()))
    throw Error(ErrorKind::PreconditionViolated, "columns are not orthonormal: |X*X - I|_F = " + std::to_string(err));
}

void Dims::validate() const {
  if (n < 1 || d < 1 || k < 1) throw Error(ErrorKind::DimensionError, "dimensions must be >= 1 (" + dims_text(*this) + ")");
  if (big_n < 2 * n) throw Error(ErrorKind::DimensionError, "need N >= 2n (" + dims_text(*this) + ")");
  if (n * k < d) throw Error(ErrorKind::DimensionError, "need n k >= d for a unital map (" + dims_text(*this) + ")");
}

void require_bounds(double m, double big_m) {
  if (!std::isfinite(m) || !std::isfinite(big_m) || !(m > 0))
    throw Error(ErrorKind::InvalidBounds, "m must be positive and finite");
  if (big_m < m) throw Error(ErrorKind::InvalidBounds, "M must be >= m");
}

void Instance::validate(double tol) const {
  require_bounds(m, big_m);
  if (x.ambient() != a.dim() || y.ambient() != a.dim() || x.rank() != y.rank())
    throw Error(ErrorKind::DimensionMismatch, "X, Y and A must share the ambient dimension and rank");
  if (a.dim() < 2 * x.rank()) throw Error(ErrorKind::DimensionError, "need N >= 2n");
  if (phi.in_dim() != x.rank()) throw Error(ErrorKind::DimensionMismatch, "map input dimension must equal rank of X");
  const double cross = op_norm(CMatrix(x.matrix().adjoint() * y.matrix()));
  if (cross > tol) throw Error(ErrorKind::PreconditionViolated, "X*Y != 0 (|X*Y| = " + std::to_string(cross) + ")");
  const auto e = herm_eig(a);
  const double scale = std::max(1.0, big_m);
  if (e.values(0) < m - tol * scale || e.values(e.values.size() - 1) > big_m + tol * scale)
    throw Error(ErrorKind::PreconditionViolated, "spectrum of A is outside [m, M]");
}

HermMatrix gen_operator(std::uint64_t seed, Eigen::Index big_n, double m, double big_m, bool force_endpoints) {
  require_bounds(m, big_m);
  if (big_n < 2) throw Error(ErrorKind::DimensionError, "operator dimension must be >= 2");
  if (m == big_m) return HermMatrix::scalar(big_n, m);

  Rng rng(sub_seed(seed, "operator"));
  RVector lambda(big_n);
  for (Eigen::Index i = 0; i < big_n; ++i) lambda(i) = rng.uniform(m, big_m);
  if (force_endpoints) {
    std::sort(lambda.data(), lambda.data() + big_n);
    lambda(0) = m;
    lambda(big_n - 1) = big_m;
  }
  const CMatrix u = haar_unitary(rng, big_n);
  return HermMatrix(u * lambda.cast<Complex>().asDiagonal() * u.adjoint());
}

IsometryPair gen_isometry_pair(std::uint64_t seed, Eigen::Index big_n, Eigen::Index n) {
  if (n < 1 || big_n < 2 * n)
    throw Error(ErrorKind::DimensionError,
                "isometry pair needs N >= 2n, got N=" + std::to_string(big_n) + " n=" + std::to_string(n));
  Rng rng(sub_seed(seed, "isometries"));
  const CMatrix u = haar_isometry(rng, big_n, 2 * n);
  return {Isometry(u.leftCols(n)), Isometry(u.middleCols(n, n))};
}

Instance extremal_instance(double m, double big_m) {
  require_bounds(m, big_m);
  if (!(m < big_m)) throw Error(ErrorKind::InvalidBounds, "extremal instance needs m < M");
  const double a = (big_m + m) / 2, b = (big_m - m) / 2;
  CMatrix op(2, 2);
  op << a, b, b, a;
  return Instance{HermMatrix(op), m, big_m, Isometry(CMatrix::Identity(2, 2).col(0)),
                  Isometry(CMatrix::Identity(2, 2).col(1)), PositiveMap::identity(1), 0};
}

Instance extremal_template(std::uint64_t seed, const Dims& dims, double m, double big_m) {
  dims.validate();
  require_bounds(m, big_m);
  const Eigen::Index big_n = dims.big_n, n = dims.n;
  const double a = (big_m + m) / 2, b = (big_m - m) / 2;

  CMatrix op = CMatrix::Zero(big_n, big_n);
  op.topLeftCorner(n, n).diagonal().setConstant(a);
  op.block(n, n, n, n).diagonal().setConstant(a);
  op.block(0, n, n, n).diagonal().setConstant(b);
  op.block(n, 0, n, n).diagonal().setConstant(b);
  Rng rng(sub_seed(seed, "template-padding"));
  for (Eigen::Index i = 2 * n; i < big_n; ++i) op(i, i) = rng.uniform(m, big_m);

  const CMatrix eye = CMatrix::Identity(big_n, big_n);
  return Instance{HermMatrix(op),          m,
                  big_m,                   Isometry(eye.leftCols(n)),
                  Isometry(eye.middleCols(n, n)), random_unital_cp(sub_seed(seed, "map"), n, dims.d, dims.k),
                  seed};
}

Instance gen_instance(std::uint64_t seed, const Dims& dims, double m, double big_m, bool force_endpoints) {
  dims.validate();
  auto [x, y] = gen_isometry_pair(sub_seed(seed, "pair"), dims.big_n, dims.n);
  return Instance{gen_operator(sub_seed(seed, "a"), dims.big_n, m, big_m, force_endpoints),
                  m,
                  big_m,
                  std::move(x),
                  std::move(y),
                  random_unital_cp(sub_seed(seed, "map"), dims.n, dims.d, dims.k),
                  seed};
}

HermMatrix gen_psd(std::uint64_t seed, Eigen::Index dim) {
  if (dim < 1) throw Error(ErrorKind::DimensionError, "dimension must be >= 1");
  Rng rng(sub_seed(seed, "psd"));
  const auto rank = static_cast<Eigen::Index>(rng.next() % static_cast<std::uint64_t>(dim)) + 1;
  const CMatrix g = rng.gaussian(dim, rank);
  return HermMatrix(g * g.adjoint() / g.squaredNorm());
}

SquareOrderPair gen_square_order_pair(std::uint64_t seed, Eigen::Index dim, double m, double big_m) {
  const HermMatrix b = gen_operator(sub_seed(seed, "b"), dim, m, big_m, true);
  const HermMatrix p = gen_psd(sub_seed(seed, "p"), dim);
  // A = B^{1/2} (I - s B^{-1/2} P B^{-1/2}) B^{1/2} >= 0 iff s <= 1 / max eig(B^{-1/2} P B^{-1/2}).
  const HermMatrix root_inv = mat_inv_pow(b, 0.5);
  const HermMatrix whitened(root_inv.matrix() * p.matrix() * root_inv.matrix());
  const double top = herm_eig(whitened).values(dim - 1);
  Rng rng(sub_seed(seed, "scale"));
  const double s = top > 0 ? rng.uniform(0.0, 1.0) / top : 0.0;
  return {HermMatrix(b.matrix() - s * p.matrix()), b};
}

}  // namespace wielandt
