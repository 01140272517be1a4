#pragma once

// Test instances: an operator A with spectral bounds m <= A <= M, a pair of
// isometries with orthogonal ranges, and a unital map.

#include <cstdint>

#include "wielandt/maps.hpp"

namespace wielandt {

/// N x n matrix with orthonormal columns.
class Isometry {
 public:
  explicit Isometry(CMatrix v);

  Eigen::Index ambient() const { return v_.rows(); }
  Eigen::Index rank() const { return v_.cols(); }
  const CMatrix& matrix() const { return v_; }

 private:
  CMatrix v_;
};

struct Dims {
  Eigen::Index big_n = 4;  // ambient dimension N
  Eigen::Index n = 2;      // rank of X and Y, input dimension of the map
  Eigen::Index d = 2;      // output dimension of the map
  Eigen::Index k = 2;      // Stinespring ancilla

  void validate() const;
};

struct Instance {
  HermMatrix a;
  double m = 1;
  double big_m = 1;
  Isometry x;
  Isometry y;
  PositiveMap phi;
  std::uint64_t seed = 0;

  Eigen::Index ambient() const { return a.dim(); }
  Eigen::Index n() const { return x.rank(); }
  Eigen::Index d() const { return phi.out_dim(); }

  /// Throws PreconditionViolated naming the first broken invariant.
  void validate(double tol = 1e-10) const;
};

void require_bounds(double m, double big_m);

/// A = U diag(lambda) U* with Haar U and lambda uniform in [m, M]. With
/// force_endpoints the extreme eigenvalues are exactly m and M.
HermMatrix gen_operator(std::uint64_t seed, Eigen::Index big_n, double m, double big_m, bool force_endpoints = true);

struct IsometryPair {
  Isometry x;
  Isometry y;
};

/// First and next n columns of one Haar unitary on C^N.
IsometryPair gen_isometry_pair(std::uint64_t seed, Eigen::Index big_n, Eigen::Index n);

/// The 2 x 2 equality case of the operator Wielandt inequality:
/// A = [[(M+m)/2, (M-m)/2], [(M-m)/2, (M+m)/2]], X = e1, Y = e2, identity map.
Instance extremal_instance(double m, double big_m);

/// The equality case lifted to arbitrary dims: A = [[a I_n, b I_n], [b I_n, a I_n]]
/// on the first 2n coordinates (remaining eigenvalues drawn in [m, M]),
/// X, Y the corresponding coordinate isometries, Phi a random unital CP map.
/// Every unital Phi sends these blocks to scalars, so equality persists.
Instance extremal_template(std::uint64_t seed, const Dims& dims, double m, double big_m);

Instance gen_instance(std::uint64_t seed, const Dims& dims, double m, double big_m, bool force_endpoints = true);

// Inputs for the lemma checks.

/// G G* / |G|_F^2 with G complex Gaussian; rank is uniform in [1, dim].
HermMatrix gen_psd(std::uint64_t seed, Eigen::Index dim);

struct SquareOrderPair {
  HermMatrix a;  // 0 <= A <= B
  HermMatrix b;  // m <= B <= M
};

/// B from gen_operator, A = B - s P with P from gen_psd and s drawn so that A >= 0.
SquareOrderPair gen_square_order_pair(std::uint64_t seed, Eigen::Index dim, double m, double big_m);

}  // namespace wielandt
