#include "wielandt/random.hpp"

#include <string>

namespace wielandt {

CMatrix orthonormalize(const CMatrix& a) {
  if (a.rows() < a.cols())
    throw Error(ErrorKind::DimensionError, "cannot orthonormalize " + std::to_string(a.cols()) +
                                               " columns in dimension " + std::to_string(a.rows()));
  Eigen::HouseholderQR<CMatrix> qr(a);
  CMatrix q = qr.householderQ() * CMatrix::Identity(a.rows(), a.cols());
  const auto& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    const double mag = std::abs(r(j, j));
    if (mag == 0.0) throw Error(ErrorKind::Singular, "rank-deficient input to orthonormalize");
    q.col(j) *= r(j, j) / mag;
  }
  return q;
}

CMatrix haar_isometry(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  return orthonormalize(rng.gaussian(rows, cols));
}

}  // namespace wielandt
