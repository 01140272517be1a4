#pragma once

// Gamma = (Phi(X*AY) Phi(Y*AY)^{-1} Phi(Y*AX))^p Phi(X*AX)^{-p}, the three
// upper-bound families for |Gamma + Gamma*|/2, the supporting lemma checks and
// the bound-ordering analysis.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "wielandt/instances.hpp"

namespace wielandt {

// ---------------------------------------------------------------------------
// Closed-form bounds (templated so they can be evaluated in any precision).

/// (M - m) / (M + m)
template <typename Real>
Real wielandt_factor(Real m, Real big_m) {
  return (big_m - m) / (big_m + m);
}

template <typename Real>
void require_bound_args(Real m, Real big_m, Real p) {
  using std::isfinite;
  if (!isfinite(m) || !isfinite(big_m) || !(m > 0) || big_m < m)
    throw Error(ErrorKind::InvalidBounds, "need 0 < m <= M");
  if (!isfinite(p) || !(p > 0)) throw Error(ErrorKind::InvalidBounds, "need p > 0");
}

/// ceil(p), with p within 1e-12 of an integer snapped to that integer first.
template <typename Real>
long ceil_exponent(Real p) {
  using std::abs;
  using std::ceil;
  using std::round;
  const Real nearest = round(p);
  if (abs(p - nearest) <= Real(1e-12)) return static_cast<long>(nearest);
  return static_cast<long>(ceil(p));
}

/// (c^{4p} M^{2p} + m^{-2p}) / 2 with c = (M - m)/(M + m).
template <typename Real>
Real bound_thm1(Real m, Real big_m, Real p) {
  using std::pow;
  require_bound_args(m, big_m, p);
  const Real c = wielandt_factor(m, big_m);
  return (pow(c, 4 * p) * pow(big_m, 2 * p) + pow(m, -2 * p)) / 2;
}

/// c^{2p} for 0 < p <= 1/2 and c^{2p} (M/m)^p for p > 1/2.
template <typename Real>
Real bound_thm2(Real m, Real big_m, Real p) {
  using std::pow;
  require_bound_args(m, big_m, p);
  const Real head = pow(wielandt_factor(m, big_m), 2 * p);
  if (p <= Real(0.5)) return head;
  return head * pow(big_m / m, p);
}

/// c^{2p} (((M/m)^{p/2} + (m/M)^{p/2}) / 2)^{ceil(p)}.
template <typename Real>
Real bound_thm3(Real m, Real big_m, Real p) {
  using std::pow;
  require_bound_args(m, big_m, p);
  const Real ratio = big_m / m;
  const Real mean = (pow(ratio, p / 2) + pow(ratio, -p / 2)) / 2;
  return pow(wielandt_factor(m, big_m), 2 * p) * pow(mean, static_cast<Real>(ceil_exponent(p)));
}

template <typename Real>
Real bound_theorem(int which, Real m, Real big_m, Real p) {
  switch (which) {
    case 1: return bound_thm1(m, big_m, p);
    case 2: return bound_thm2(m, big_m, p);
    case 3: return bound_thm3(m, big_m, p);
  }
  throw Error(ErrorKind::PreconditionViolated, "theorem index must be 1, 2 or 3");
}

/// p above which the second bound family beats the third: 2 + 2 log_{M/m} 2.
double crossover_threshold(double m, double big_m);

// ---------------------------------------------------------------------------
// Gamma and its left-hand sides.

struct GammaParts {
  HermMatrix s;          // Phi(X*AY) Phi(Y*AY)^{-1} Phi(Y*AX)
  HermMatrix t;          // Phi(X*AX)
  double p = 1;
  HermMatrix s_pow;      // S^p
  HermMatrix t_inv_pow;  // T^{-p}
  CMatrix gamma;         // S^p T^{-p}
};

/// Builds Gamma from the Hermitian factors. Eigenvalues of S below its
/// rounding floor are treated as exact zeros before taking powers.
GammaParts gamma(const Instance& inst, double p);

struct LhsValues {
  HermMatrix half_abs;  // |Gamma + Gamma*| / 2
  HermMatrix half_sym;  // (Gamma + Gamma*) / 2
  double half_abs_norm = 0;
};

LhsValues lhs_values(const CMatrix& gamma);
inline LhsValues lhs_values(const GammaParts& g) { return lhs_values(g.gamma); }

/// |Gamma|.
double gamma_norm(const Instance& inst, double p);

// ---------------------------------------------------------------------------
// Check reports.

struct Witness {
  double eigenvalue = 0;
  CVector vector;
};

struct CheckReport {
  std::string check;
  double lhs = 0;     // norm of the left-hand side
  double bound = 0;   // right-hand side as a number
  double margin = 0;  // bound - lhs
  bool loewner_pass = true;
  bool norm_pass = true;
  std::optional<Witness> witness;  // smallest eigen-pair of RHS - LHS
  double tol = Tolerances::check;

  // Context, filled by instance-level checks.
  std::optional<std::uint64_t> seed;
  std::optional<std::array<Eigen::Index, 3>> dims;  // N, n, d
  std::optional<double> m;
  std::optional<double> big_m;
  std::optional<double> p;

  bool passed() const { return loewner_pass && norm_pass; }
};

/// lhs <= rhs up to tol * max(1, |lhs|, |rhs|).
inline bool leq_tol(double lhs, double rhs, double tol) {
  return lhs <= rhs + tol * std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

/// S <= ((M-m)/(M+m))^2 T.
CheckReport check_bhatia_davis(const Instance& inst, double tol = Tolerances::check);

struct TheoremReports {
  CheckReport abs_form;  // |Gamma + Gamma*|/2 <= bound
  CheckReport sym_form;  // (Gamma + Gamma*)/2 <= bound
};

TheoremReports check_theorem(const Instance& inst, double p, int which, double tol = Tolerances::check);
TheoremReports check_theorem(const GammaParts& g, const LhsValues& lhs, double m, double big_m, int which,
                             double tol = Tolerances::check);

/// |Gamma| <= bound of family 2 or 3 (the norm statements the proofs pass through).
CheckReport check_gamma_norm(const GammaParts& g, double m, double big_m, int which, double tol = Tolerances::check);

/// |(Gamma + Gamma*)/2| <= |Gamma|.
CheckReport check_sym_part_norm(const GammaParts& g, double tol = Tolerances::check);

struct ProofChainReport {
  std::array<double, 4> links{};  // |G+G*|/2, |S^{2p}+T^{-2p}|/2, (|S|^{2p}+|T^{-1}|^{2p})/2, bound_thm1
  std::array<bool, 3> holds{};
  bool passed() const { return holds[0] && holds[1] && holds[2]; }
};

ProofChainReport check_proof_chain(const GammaParts& g, double m, double big_m, double tol = Tolerances::check);

/// S^p <= c^{2p} T^p for 0 < p <= 1 (operator monotonicity of t^p).
CheckReport check_power_order(const GammaParts& g, double m, double big_m, double tol = Tolerances::check);

// ---------------------------------------------------------------------------
// Lemmas.

struct BlockEquivalenceReport {
  double t = 0;
  double norm = 0;
  bool abs_leq = false;    // |X| <= t I
  bool norm_leq = false;   // |X| <= t
  bool block_psd = false;  // [[t I, X], [X*, t I]] >= 0
  double block_min_eigenvalue = 0;
  bool agree() const { return abs_leq == norm_leq && norm_leq == block_psd; }
};

/// X may be rectangular; the block is [[t I_rows, X], [X*, t I_cols]].
BlockEquivalenceReport check_lemma_block_equivalence(const CMatrix& x, double t, double tol = Tolerances::check);

/// A^2 <= ((M+m)^2 / (4Mm)) B^2 given 0 <= A <= B and m <= B <= M.
CheckReport check_lemma_square_order(const HermMatrix& a, const HermMatrix& b, double m, double big_m,
                                     double tol = Tolerances::check);

/// |AB + BA| <= |A^2 + B^2| for PSD A, B.
CheckReport check_fact_norm_anticommutator(const HermMatrix& a, const HermMatrix& b, double tol = Tolerances::check);

/// |<x, Ay>|^2 <= c^2 <x, Ax><y, Ay> for x orthogonal to y.
CheckReport check_scalar_wielandt(const CVector& x, const CVector& y, const HermMatrix& a, double m, double big_m,
                                  double tol = Tolerances::check);

// ---------------------------------------------------------------------------
// Bound ordering.

struct BoundComparison {
  double m = 1, big_m = 1, p = 1;
  std::array<double, 3> values{};
  int tightest = 2;  // 1-based family index of the smallest bound, lowest index on ties
  bool thm1_ge_thm2 = true;
  std::optional<bool> thm3_ge_thm2;          // checked when p <= 1/2
  std::optional<bool> thm3_le_thm2;          // checked when 1/2 < p <= 2
  std::optional<bool> thm2_le_thm3;          // checked when p > crossover
  std::optional<double> crossover;           // absent when M = m
  double chain_rhs_p = 0;                    // c^p
  double chain_rhs_2p = 0;                   // c^{2p}
  bool chain_holds_p = true;                 // thm2 >= c^p
  bool chain_holds_2p = true;                // thm2 >= c^{2p}

  /// All applicable ordering flags hold (the exponent-p chain is reported, not required).
  bool orderings_hold() const {
    return thm1_ge_thm2 && thm3_ge_thm2.value_or(true) && thm3_le_thm2.value_or(true) && thm2_le_thm3.value_or(true);
  }
};

BoundComparison compare_bounds(double m, double big_m, double p, double tol = 1e-12);

}  // namespace wielandt
