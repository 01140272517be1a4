#pragma once

// Dense complex matrix core: Hermitian eigendecomposition by cyclic Jacobi
// rotations, spectral functional calculus, operator norm and Loewner order.
//
// Everything here is templated on the real scalar so the same routines can be
// instantiated in extended precision; the rest of the library uses double.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "wielandt/errors.hpp"

namespace wielandt {

template <typename Real>
using CMatrixT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using CVectorT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RVectorT = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using CMatrix = CMatrixT<double>;
using CVector = CVectorT<double>;
using RVector = RVectorT<double>;
using Complex = std::complex<double>;

/// Default tolerances shared by the whole library.
struct Tolerances {
  static constexpr double psd = 1e-10;      // negative-eigenvalue clamp, relative
  static constexpr double pd = 1e-12;       // smallest admissible eigenvalue / norm
  static constexpr double check = 1e-9;     // inequality checks, relative
  static constexpr double jacobi = 1e-13;   // off-diagonal Frobenius mass, relative
  static constexpr int jacobi_sweeps = 100;
};

template <typename Real>
bool all_finite(const CMatrixT<Real>& x) {
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      if (!std::isfinite(x(i, j).real()) || !std::isfinite(x(i, j).imag())) return false;
  return true;
}

template <typename Real>
void require_finite(const CMatrixT<Real>& x, const char* what) {
  if (!all_finite(x)) throw Error(ErrorKind::NonFinite, std::string(what) + " has non-finite entries");
}

template <typename Real>
struct EigDecompT;

/// Square complex matrix that is Hermitian by construction: the input is
/// replaced by (H + H*)/2, which also zeroes the imaginary diagonal.
template <typename Real>
class HermMatrixT {
 public:
  using Matrix = CMatrixT<Real>;

  HermMatrixT() = default;

  explicit HermMatrixT(const Matrix& h) {
    if (h.rows() != h.cols() || h.rows() < 1)
      throw Error(ErrorKind::DimensionMismatch,
                  "Hermitian matrix must be square and non-empty, got " + std::to_string(h.rows()) + "x" +
                      std::to_string(h.cols()));
    require_finite(h, "Hermitian matrix");
    data_ = (h + h.adjoint()) * Real(0.5);
  }

  static HermMatrixT identity(Eigen::Index n) { return HermMatrixT(Matrix::Identity(n, n)); }
  static HermMatrixT zero(Eigen::Index n) { return HermMatrixT(Matrix::Zero(n, n)); }
  static HermMatrixT scalar(Eigen::Index n, Real c) { return HermMatrixT(Matrix::Identity(n, n) * c); }
  static HermMatrixT diagonal(const RVectorT<Real>& d) {
    return HermMatrixT(d.template cast<std::complex<Real>>().asDiagonal().toDenseMatrix());
  }

  /// V diag(values) V* carrying its own eigen-pairs, so herm_eig of a function
  /// of a matrix keeps eigenvalues far below the rounding level of the entries.
  static HermMatrixT from_spectrum(EigDecompT<Real> e) {
    HermMatrixT out(e.reconstruct());
    out.spectrum_ = std::make_shared<const EigDecompT<Real>>(std::move(e));
    return out;
  }

  Eigen::Index dim() const { return data_.rows(); }
  const Matrix& matrix() const { return data_; }
  const EigDecompT<Real>* spectrum() const { return spectrum_.get(); }
  std::complex<Real> operator()(Eigen::Index i, Eigen::Index j) const { return data_(i, j); }

  friend HermMatrixT operator+(const HermMatrixT& a, const HermMatrixT& b) {
    check_same(a, b);
    return HermMatrixT(a.data_ + b.data_);
  }
  friend HermMatrixT operator-(const HermMatrixT& a, const HermMatrixT& b) {
    check_same(a, b);
    return HermMatrixT(a.data_ - b.data_);
  }
  friend HermMatrixT operator*(Real s, const HermMatrixT& a) { return HermMatrixT(a.data_ * s); }
  friend HermMatrixT operator*(const HermMatrixT& a, Real s) { return HermMatrixT(a.data_ * s); }

 private:
  static void check_same(const HermMatrixT& a, const HermMatrixT& b) {
    if (a.dim() != b.dim())
      throw Error(ErrorKind::DimensionMismatch,
                  "dimensions " + std::to_string(a.dim()) + " and " + std::to_string(b.dim()) + " differ");
  }

  Matrix data_;
  std::shared_ptr<const EigDecompT<Real>> spectrum_;
};

using HermMatrix = HermMatrixT<double>;

/// Eigen-pairs of a Hermitian matrix, eigenvalues ascending.
template <typename Real>
struct EigDecompT {
  RVectorT<Real> values;
  CMatrixT<Real> vectors;

  CMatrixT<Real> reconstruct() const {
    return vectors * values.template cast<std::complex<Real>>().asDiagonal() * vectors.adjoint();
  }
};

using EigDecomp = EigDecompT<double>;

namespace detail {

template <typename Real>
Real off_diagonal_mass(const CMatrixT<Real>& a) {
  Real sum = 0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j) sum += std::norm(a(i, j));
  return std::sqrt(sum);
}

// One complex Jacobi rotation annihilating a(p, q). With a(p, q) = |b| e^{i phi}
// the unitary is J = diag(1, e^{-i phi}) * R where R is the real rotation that
// diagonalizes [[a_pp, |b|], [|b|, a_qq]].
template <typename Real>
void rotate(CMatrixT<Real>& a, CMatrixT<Real>& v, Eigen::Index p, Eigen::Index q) {
  using C = std::complex<Real>;
  const C apq = a(p, q);
  const Real mag = std::abs(apq);
  if (mag == Real(0)) return;

  const Real app = a(p, p).real();
  const Real aqq = a(q, q).real();
  const Real tau = (aqq - app) / (Real(2) * mag);
  const Real t = (tau >= 0 ? Real(1) : Real(-1)) / (std::abs(tau) + std::sqrt(Real(1) + tau * tau));
  const Real c = Real(1) / std::sqrt(Real(1) + t * t);
  const Real s = t * c;
  const C phase = std::conj(apq) / mag;  // e^{-i phi}

  const C jpp = c, jpq = s, jqp = -s * phase, jqq = c * phase;

  // a <- a J
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const C aip = a(i, p), aiq = a(i, q);
    a(i, p) = aip * jpp + aiq * jqp;
    a(i, q) = aip * jpq + aiq * jqq;
  }
  // a <- J* a
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    const C apj = a(p, j), aqj = a(q, j);
    a(p, j) = std::conj(jpp) * apj + std::conj(jqp) * aqj;
    a(q, j) = std::conj(jpq) * apj + std::conj(jqq) * aqj;
  }
  a(p, q) = a(q, p) = C(0);
  a(p, p) = C(a(p, p).real(), 0);
  a(q, q) = C(a(q, q).real(), 0);

  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    const C vip = v(i, p), viq = v(i, q);
    v(i, p) = vip * jpp + viq * jqp;
    v(i, q) = vip * jpq + viq * jqq;
  }
}

}  // namespace detail

/// Cyclic Jacobi eigendecomposition, or the carried spectrum of a matrix built
/// by from_spectrum. Throws NonConvergence when the off-diagonal mass is still
/// above the threshold after the sweep budget.
template <typename Real>
EigDecompT<Real> herm_eig(const HermMatrixT<Real>& h, Real rel_tol = Real(Tolerances::jacobi),
                          int max_sweeps = Tolerances::jacobi_sweeps) {
  using Matrix = CMatrixT<Real>;
  if (const auto* cached = h.spectrum()) return *cached;
  const Eigen::Index n = h.dim();
  Matrix a = h.matrix();
  Matrix v = Matrix::Identity(n, n);
  const Real norm = a.norm();
  const Real target = rel_tol * norm;

  int sweep = 0;
  while (detail::off_diagonal_mass(a) > target) {
    if (sweep++ >= max_sweeps)
      throw Error(ErrorKind::NonConvergence,
                  "Jacobi did not converge in " + std::to_string(max_sweeps) + " sweeps");
    for (Eigen::Index p = 0; p + 1 < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) detail::rotate(a, v, p, q);
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index(0));
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i).real() < a(j, j).real(); });

  EigDecompT<Real> out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[k], order[k]).real();
    out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

/// Largest |eigenvalue|, floored at 1: the magnitude used by relative tolerances.
template <typename Real>
Real spectral_scale(const RVectorT<Real>& values) {
  Real s = 1;
  for (Eigen::Index i = 0; i < values.size(); ++i) s = std::max(s, std::abs(values(i)));
  return s;
}

/// Applies f to each eigenvalue: V f(diag) V*.
template <typename Real, typename F>
HermMatrixT<Real> spectral_apply(const EigDecompT<Real>& e, F&& f) {
  const Eigen::Index n = e.values.size();
  RVectorT<Real> fv(n);
  for (Eigen::Index i = 0; i < n; ++i) fv(i) = f(e.values(i));
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index(0));
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) { return fv(i) < fv(j); });
  EigDecompT<Real> out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = fv(order[k]);
    out.vectors.col(k) = e.vectors.col(order[k]);
  }
  return HermMatrixT<Real>::from_spectrum(std::move(out));
}

template <typename Real>
void require_exponent(Real p) {
  if (!std::isfinite(p) || p <= 0)
    throw Error(ErrorKind::InvalidExponent, "exponent must be positive and finite, got " + std::to_string(p));
}

/// S^p for PSD S. Eigenvalues in [-psd_tol * scale, 0) are clamped to zero and
/// 0^p = 0.
template <typename Real>
HermMatrixT<Real> mat_pow(const HermMatrixT<Real>& s, Real p, Real psd_tol = Real(Tolerances::psd)) {
  require_exponent(p);
  const auto e = herm_eig(s);
  const Real scale = spectral_scale(e.values);
  if (e.values(0) < -psd_tol * scale)
    throw Error(ErrorKind::NotPSD, "min eigenvalue " + std::to_string(double(e.values(0))) + " below -" +
                                       std::to_string(double(psd_tol * scale)));
  return spectral_apply(e, [p](Real x) { return x <= 0 ? Real(0) : std::pow(x, p); });
}

/// T^{-p} for positive definite T. Singular when the smallest eigenvalue is not
/// above pd_tol times the largest.
template <typename Real>
HermMatrixT<Real> mat_inv_pow(const HermMatrixT<Real>& t, Real p, Real pd_tol = Real(Tolerances::pd)) {
  require_exponent(p);
  const auto e = herm_eig(t);
  const Real top = e.values.cwiseAbs().maxCoeff();
  if (!(e.values(0) > pd_tol * top) || top == Real(0))
    throw Error(ErrorKind::Singular, "min eigenvalue " + std::to_string(double(e.values(0))) +
                                         " not above " + std::to_string(double(pd_tol * top)));
  return spectral_apply(e, [p](Real x) { return std::pow(x, -p); });
}

/// |H| for Hermitian H.
template <typename Real>
HermMatrixT<Real> abs_op(const HermMatrixT<Real>& h) {
  return spectral_apply(herm_eig(h), [](Real x) { return std::abs(x); });
}

/// |X| = (X* X)^{1/2} for an arbitrary square or rectangular X.
template <typename Real>
HermMatrixT<Real> abs_op(const CMatrixT<Real>& x) {
  require_finite(x, "operand");
  return spectral_apply(herm_eig(HermMatrixT<Real>(x.adjoint() * x)),
                        [](Real v) { return v <= 0 ? Real(0) : std::sqrt(v); });
}

template <typename Real>
Real op_norm(const HermMatrixT<Real>& h) {
  const auto e = herm_eig(h);
  return std::max(std::abs(e.values(0)), std::abs(e.values(e.values.size() - 1)));
}

/// Largest singular value, from the Hermitian solver on the smaller Gram matrix.
template <typename Real>
Real op_norm(const CMatrixT<Real>& x) {
  require_finite(x, "operand");
  if (x.size() == 0) return 0;
  const CMatrixT<Real> gram = x.rows() < x.cols() ? CMatrixT<Real>(x * x.adjoint()) : CMatrixT<Real>(x.adjoint() * x);
  const auto e = herm_eig(HermMatrixT<Real>(gram));
  const Real top = e.values(e.values.size() - 1);
  return top <= 0 ? Real(0) : std::sqrt(top);
}

template <typename Real>
struct LoewnerResultT {
  bool holds = false;
  Real min_eigenvalue = 0;  // of B - A
  CVectorT<Real> witness;   // its eigenvector
  Real scale = 1;           // max(1, |A|, |B|)
};

using LoewnerResult = LoewnerResultT<double>;

/// A <= B in the Loewner order, up to tol * max(1, |A|, |B|).
template <typename Real>
LoewnerResultT<Real> loewner_leq(const HermMatrixT<Real>& a, const HermMatrixT<Real>& b, Real tol) {
  if (a.dim() != b.dim())
    throw Error(ErrorKind::DimensionMismatch,
                "Loewner comparison of " + std::to_string(a.dim()) + " and " + std::to_string(b.dim()));
  if (!(tol >= 0)) throw Error(ErrorKind::PreconditionViolated, "tolerance must be non-negative");
  const auto e = herm_eig(b - a);
  LoewnerResultT<Real> r;
  r.scale = std::max({Real(1), op_norm(a), op_norm(b)});
  r.min_eigenvalue = e.values(0);
  r.witness = e.vectors.col(0);
  r.holds = r.min_eigenvalue >= -tol * r.scale;
  return r;
}

/// exp(i s H): unitary generated by a Hermitian matrix.
template <typename Real>
CMatrixT<Real> unitary_exp(const HermMatrixT<Real>& h, Real s) {
  const auto e = herm_eig(h);
  CVectorT<Real> phases(e.values.size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) phases(i) = std::polar(Real(1), s * e.values(i));
  return e.vectors * phases.asDiagonal() * e.vectors.adjoint();
}

}  // namespace wielandt
