#include <doctest.h>

#include "oracles.hpp"
#include "wielandt/bounds.hpp"
#include "wielandt/random.hpp"

using namespace wielandt;

namespace {

struct Frozen {
  double p, thm1, thm2, thm3;
};

// m = 1, M = 2, evaluated in 30-digit arithmetic by an external tool.
constexpr std::array<Frozen, 7> kFrozen{{
    {1, 0.52469135802469135802, 0.22222222222222222222, 0.11785113019775792073},
    {0.5, 0.61111111111111111111, 0.33333333333333333333, 0.33835058837607260162},
    {5, 0.50000014684016592857, 0.00054192280986976917475, 0.0035754625051011659395},
    {0.25, 0.73570226039551584147, 0.57735026918962576451, 0.57951873209992355473},
    {1.5, 0.50548696844993141289, 0.10475656017578481843, 0.047981301067957998702},
    {2, 0.50121932632220698064, 0.049382716049382716049, 0.019290123456790123457},
    {3, 0.50006021364554108546, 0.010973936899862825789, 0.0055242717280199025344},
}};

Instance scalar_instance(double m, double big_m, double c) {
  Instance inst = extremal_instance(1, 2);
  inst.a = HermMatrix::scalar(2, c);
  inst.m = m;
  inst.big_m = big_m;
  return inst;
}

}  // namespace

TEST_SUITE("closed-form bounds") {
  TEST_CASE("frozen high-precision values at (1, 2)") {
    for (const auto& f : kFrozen) {
      CAPTURE(f.p);
      CHECK(std::abs(bound_thm1(1.0, 2.0, f.p) - f.thm1) <= 1e-15);
      CHECK(std::abs(bound_thm2(1.0, 2.0, f.p) - f.thm2) <= 1e-15);
      CHECK(std::abs(bound_thm3(1.0, 2.0, f.p) - f.thm3) <= 1e-15);
    }
  }

  TEST_CASE("rational forms") {
    CHECK(bound_thm1(1.0, 2.0, 1.0) == doctest::Approx(85.0 / 162).epsilon(1e-15));
    CHECK(bound_thm1(1.0, 2.0, 0.5) == doctest::Approx(11.0 / 18).epsilon(1e-15));
    CHECK(bound_thm2(1.0, 2.0, 1.0) == doctest::Approx(2.0 / 9).epsilon(1e-15));
    CHECK(bound_thm2(1.0, 2.0, 0.5) == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(bound_thm3(1.0, 2.0, 1.0) == doctest::Approx(3.0 / (18 * std::sqrt(2.0))).epsilon(1e-15));
  }

  TEST_CASE("m = M") {
    for (double p : {0.3, 1.0, 2.5}) {
      CHECK(bound_thm1(1.5, 1.5, p) == doctest::Approx(std::pow(1.5, -2 * p) / 2));
      CHECK(bound_thm2(1.5, 1.5, p) == 0.0);
      CHECK(bound_thm3(1.5, 1.5, p) == 0.0);
    }
  }

  TEST_CASE("the p = 1/2 branch is the closed left branch") {
    CHECK(bound_thm2(1.0, 3.0, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(bound_thm2(1.0, 3.0, std::nextafter(0.5, 1.0)) > 0.5 * std::sqrt(3.0) * 0.999);
  }

  TEST_CASE("ceiling exponent snaps near-integers") {
    CHECK(ceil_exponent(1.0) == 1);
    CHECK(ceil_exponent(1.0 + 1e-13) == 1);
    CHECK(ceil_exponent(2.0 - 1e-13) == 2);
    CHECK(ceil_exponent(1.0 + 1e-9) == 2);
    CHECK(ceil_exponent(0.3) == 1);
    CHECK(bound_thm3(1.0, 2.0, 3.0 * 0.1 * 10) == doctest::Approx(kFrozen[6].thm3).epsilon(1e-14));
  }

  TEST_CASE("invalid arguments") {
    CHECK_THROWS_AS(bound_thm1(0.0, 2.0, 1.0), Error);
    CHECK_THROWS_AS(bound_thm2(2.0, 1.0, 1.0), Error);
    CHECK_THROWS_AS(bound_thm3(1.0, 2.0, 0.0), Error);
    CHECK_THROWS_AS(bound_theorem(4, 1.0, 2.0, 1.0), Error);
  }

  TEST_CASE("property: agreement with 50-digit evaluation over random (m, M, p)") {
    Rng rng(21);
    for (int trial = 0; trial < 2000; ++trial) {
      const double m = std::pow(10.0, rng.uniform(-1, 1));
      const double big_m = m * std::pow(10.0, rng.uniform(0, 1.5));
      const double p = rng.uniform(0.05, 6);
      const oracle::Big bm(m), bbig(big_m), bp(p);
      const double r1 = static_cast<double>(oracle::thm1(bm, bbig, bp));
      const double r2 = static_cast<double>(oracle::thm2(bm, bbig, bp));
      const double r3 = static_cast<double>(oracle::thm3(bm, bbig, bp, static_cast<int>(std::ceil(p))));
      REQUIRE(bound_thm1(m, big_m, p) == doctest::Approx(r1).epsilon(1e-12));
      REQUIRE(bound_thm2(m, big_m, p) == doctest::Approx(r2).epsilon(1e-12));
      REQUIRE(bound_thm3(m, big_m, p) == doctest::Approx(r3).epsilon(1e-12));
    }
  }

  TEST_CASE("extended precision instantiation matches the frozen values") {
    for (const auto& f : kFrozen) {
      const oracle::Big p(f.p);
      CHECK(static_cast<double>(bound_thm3(oracle::Big(1), oracle::Big(2), p)) == doctest::Approx(f.thm3).epsilon(1e-15));
    }
  }
}

TEST_SUITE("crossover") {
  TEST_CASE("examples") {
    CHECK(crossover_threshold(1, 2) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(crossover_threshold(1, 4) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(crossover_threshold(1, 1e12) < 2.06);
    CHECK(crossover_threshold(1, 1e12) > 2.0);
  }

  TEST_CASE("scale invariance") {
    CHECK(crossover_threshold(3, 6) == doctest::Approx(crossover_threshold(1, 2)).epsilon(1e-14));
  }
}

TEST_SUITE("gamma") {
  TEST_CASE("extremal instance: Gamma = 1/9 at p = 1, 1/81 at p = 2") {
    const Instance inst = extremal_instance(1, 2);
    const GammaParts g1 = gamma(inst, 1.0);
    CHECK(g1.s(0, 0).real() == doctest::Approx(1.0 / 6).epsilon(1e-15));
    CHECK(g1.t(0, 0).real() == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(g1.gamma(0, 0).real() == doctest::Approx(1.0 / 9).epsilon(1e-14));
    CHECK(gamma(inst, 2.0).gamma(0, 0).real() == doctest::Approx(1.0 / 81).epsilon(1e-14));
  }

  TEST_CASE("scalar A: S = 0 and Gamma = 0") {
    for (double p : {0.25, 1.0, 3.0}) {
      const GammaParts g = gamma(scalar_instance(1, 2, 1.3), p);
      CHECK(g.gamma.norm() == 0.0);
      const LhsValues lhs = lhs_values(g);
      CHECK(lhs.half_abs_norm == 0.0);
      CHECK(lhs.half_sym.matrix().norm() == 0.0);
    }
  }

  TEST_CASE("n = 1, identity map, p = 1 reduces to |a12|^2 / (a11 a22)") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      Instance inst = gen_instance(seed, Dims{2, 1, 1, 1}, 1, 3);
      inst.phi = PositiveMap::identity(1);
      const CMatrix a = inst.x.matrix().adjoint() * inst.a.matrix() * inst.y.matrix();
      const double a11 = (inst.x.matrix().adjoint() * inst.a.matrix() * inst.x.matrix())(0, 0).real();
      const double a22 = (inst.y.matrix().adjoint() * inst.a.matrix() * inst.y.matrix())(0, 0).real();
      REQUIRE(gamma(inst, 1.0).gamma(0, 0).real() == doctest::Approx(std::norm(a(0, 0)) / (a11 * a22)).epsilon(1e-12));
    }
  }

  TEST_CASE("lhs values of a scalar Gamma") {
    CMatrix g(1, 1);
    g(0, 0) = 1.0 / 9;
    const LhsValues lhs = lhs_values(g);
    CHECK(lhs.half_abs(0, 0).real() == doctest::Approx(1.0 / 9));
    CHECK(lhs.half_sym(0, 0).real() == doctest::Approx(1.0 / 9));
  }

  TEST_CASE("gamma_norm: 1/3 at p = 1/2, matching the second bound") {
    const Instance inst = extremal_instance(1, 2);
    CHECK(gamma_norm(inst, 0.5) == doctest::Approx(1.0 / 3).epsilon(1e-14));
    CHECK(gamma_norm(inst, 0.5) == doctest::Approx(bound_thm2(1.0, 2.0, 0.5)).epsilon(1e-14));
    CHECK(gamma_norm(scalar_instance(1, 2, 1.7), 1.0) == 0.0);
  }

  TEST_CASE("nearly collapsed spectrum: Gamma vanishes as M - m -> 0") {
    const double g = gamma_norm(extremal_instance(1, 1 + 1e-6), 1.0);
    CHECK(g < 1e-12);
  }

  TEST_CASE("invalid exponent") { CHECK_THROWS_AS(gamma(extremal_instance(1, 2), -1.0), Error); }
}

TEST_SUITE("theorem checks") {
  TEST_CASE("Bhatia-Davis: equality at the extremal instance, pass for scalar A") {
    const CheckReport r = check_bhatia_davis(extremal_instance(1, 2));
    CHECK(r.passed());
    CHECK(std::abs(r.margin) <= 1e-12);
    CHECK(check_bhatia_davis(scalar_instance(1, 2, 1.5)).passed());
  }

  TEST_CASE("extremal instance against the second and third bounds") {
    const Instance inst = extremal_instance(1, 2);
    const TheoremReports r2 = check_theorem(inst, 1.0, 2);
    CHECK(r2.abs_form.passed());
    CHECK(r2.abs_form.lhs == doctest::Approx(1.0 / 9).epsilon(1e-14));
    CHECK(r2.abs_form.bound == doctest::Approx(2.0 / 9).epsilon(1e-15));
    const TheoremReports r3 = check_theorem(inst, 1.0, 3);
    CHECK(r3.abs_form.passed());
    CHECK(r3.abs_form.margin == doctest::Approx(0.11785113019775792073 - 1.0 / 9).epsilon(1e-12));
    CHECK(r3.sym_form.passed());
  }

  TEST_CASE("collapsed spectrum: lhs 0 passes every family") {
    for (int which = 1; which <= 3; ++which) {
      const TheoremReports r = check_theorem(scalar_instance(2, 2, 2), 1.0, which);
      CHECK(r.abs_form.passed());
      CHECK(r.abs_form.lhs == 0.0);
    }
  }

  TEST_CASE("property: all checks pass on random instances, Loewner pass implies norm pass") {
    const std::array<double, 4> ps{0.25, 0.5, 1.0, 2.5};
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
      const Instance inst = gen_instance(seed, Dims{}, 1, 1 + static_cast<double>(seed % 4));
      REQUIRE(check_bhatia_davis(inst).passed());
      for (double p : ps) {
        const GammaParts g = gamma(inst, p);
        const LhsValues lhs = lhs_values(g);
        for (int which = 1; which <= 3; ++which) {
          const TheoremReports r = check_theorem(g, lhs, inst.m, inst.big_m, which);
          REQUIRE(r.abs_form.passed());
          REQUIRE(r.sym_form.passed());
          if (r.abs_form.loewner_pass) REQUIRE(r.abs_form.norm_pass);
          if (r.abs_form.passed()) REQUIRE(r.sym_form.passed());
          REQUIRE(std::abs(r.abs_form.margin - (r.abs_form.bound - r.abs_form.lhs)) <= 1e-15);
        }
        REQUIRE(check_gamma_norm(g, inst.m, inst.big_m, 2).passed());
        REQUIRE(check_gamma_norm(g, inst.m, inst.big_m, 3).passed());
        REQUIRE(check_sym_part_norm(g).passed());
        REQUIRE(check_proof_chain(g, inst.m, inst.big_m).passed());
        if (p <= 1) REQUIRE(check_power_order(g, inst.m, inst.big_m).passed());
      }
    }
  }

  TEST_CASE("check reports are deterministic") {
    const Instance inst = gen_instance(4, Dims{}, 1, 2);
    const TheoremReports a = check_theorem(inst, 1.5, 3), b = check_theorem(inst, 1.5, 3);
    CHECK(a.abs_form.lhs == b.abs_form.lhs);
    CHECK(a.abs_form.margin == b.abs_form.margin);
  }

  TEST_CASE("check_gamma_norm rejects the first family") {
    CHECK_THROWS_AS(check_gamma_norm(gamma(extremal_instance(1, 2), 1.0), 1, 2, 1), Error);
  }

  TEST_CASE("leq_tol is relative") {
    CHECK(leq_tol(1.0 + 1e-10, 1.0, 1e-9));
    CHECK_FALSE(leq_tol(1.0 + 1e-8, 1.0, 1e-9));
    CHECK(leq_tol(1e6 + 1e-4, 1e6, 1e-9));
  }
}

TEST_SUITE("lemmas") {
  TEST_CASE("block equivalence examples") {
    const auto id = check_lemma_block_equivalence(CMatrix::Identity(2, 2), 1.0);
    CHECK((id.abs_leq && id.norm_leq && id.block_psd));
    CMatrix x(2, 2);
    x << 0, 2, 0, 0;
    const auto below = check_lemma_block_equivalence(x, 1.0);
    CHECK(!below.abs_leq);
    CHECK(!below.norm_leq);
    CHECK(!below.block_psd);
    const auto at = check_lemma_block_equivalence(x, 2.0);
    CHECK((at.abs_leq && at.norm_leq && at.block_psd));
    CHECK(at.norm == doctest::Approx(2.0));
  }

  TEST_CASE("rectangular X") {
    CMatrix v(3, 1);
    v << 3, 0, 4;
    CHECK(check_lemma_block_equivalence(v, 5.0).agree());
    CHECK(check_lemma_block_equivalence(v, 5.0).block_psd);
    CHECK_FALSE(check_lemma_block_equivalence(CMatrix(v.transpose()), 4.9).norm_leq);
    CHECK(check_lemma_block_equivalence(CMatrix(v.transpose()), 4.9).agree());
  }

  TEST_CASE("property: three-way agreement including t = |X| +- 1e-6") {
    Rng rng(31);
    for (int trial = 0; trial < 300; ++trial) {
      const CMatrix x = rng.gaussian(1 + trial % 4, 1 + trial % 4);
      const double norm = oracle::spectral_norm(x);
      for (double t : {norm - 1e-6, norm, norm + 1e-6, 0.5 * norm, 2 * norm}) {
        const auto r = check_lemma_block_equivalence(x, t);
        REQUIRE(r.agree());
        if (t < norm - 1e-7) REQUIRE(!r.norm_leq);
        if (t > norm + 1e-7) REQUIRE(r.norm_leq);
      }
    }
  }

  TEST_CASE("square order examples") {
    const HermMatrix b = HermMatrix::diagonal(RVector::LinSpaced(2, 1, 2));
    CHECK(check_lemma_square_order(b, b, 1, 2).passed());
    CHECK(check_lemma_square_order(HermMatrix::zero(2), b, 1, 2).passed());
    const auto r = check_lemma_square_order(HermMatrix::identity(2), b, 1, 2);
    CHECK(r.passed());
    // diag(1,1) <= (9/8) diag(1,4)
    CHECK(r.lhs == doctest::Approx(1.0));
    CHECK(r.bound == doctest::Approx(9.0 / 2));
    REQUIRE(r.witness.has_value());
    CHECK(r.witness->eigenvalue == doctest::Approx(1.0 / 8).epsilon(1e-12));
  }

  TEST_CASE("square order preconditions") {
    const HermMatrix b = HermMatrix::diagonal(RVector::LinSpaced(2, 1, 2));
    CHECK_THROWS_AS(check_lemma_square_order(HermMatrix::scalar(2, 3), b, 1, 2), Error);
    CHECK_THROWS_AS(check_lemma_square_order(b, b, 1.5, 2), Error);
  }

  TEST_CASE("property: square order on generated pairs") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
      const auto pr = gen_square_order_pair(seed, 2 + seed % 4, 1, 1 + static_cast<double>(seed % 7));
      REQUIRE(check_lemma_square_order(pr.a, pr.b, 1, 1 + static_cast<double>(seed % 7)).passed());
    }
  }

  TEST_CASE("anticommutator fact") {
    const HermMatrix a = HermMatrix::diagonal(RVector::LinSpaced(2, 1, 2));
    const auto eq = check_fact_norm_anticommutator(a, a);
    CHECK(eq.passed());
    CHECK(std::abs(eq.margin) <= 1e-12);
    RVector e1(2), e2(2);
    e1 << 1, 0;
    e2 << 0, 1;
    const auto orth = check_fact_norm_anticommutator(HermMatrix::diagonal(e1), HermMatrix::diagonal(e2));
    CHECK(orth.lhs == 0.0);
    CHECK(orth.bound == doctest::Approx(1.0));
    CHECK_THROWS_AS(check_fact_norm_anticommutator(HermMatrix::diagonal(-e1), a), Error);
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
      const auto dim = static_cast<Eigen::Index>(1 + seed % 6);
      REQUIRE(check_fact_norm_anticommutator(gen_psd(sub_seed(seed, "a"), dim), gen_psd(sub_seed(seed, "b"), dim)).passed());
    }
  }

  TEST_CASE("scalar Wielandt: equality on the extremal pair, zero for scalar A") {
    const Instance inst = extremal_instance(1, 2);
    const CVector x = inst.x.matrix().col(0), y = inst.y.matrix().col(0);
    const auto r = check_scalar_wielandt(x, y, inst.a, 1, 2);
    CHECK(r.passed());
    CHECK(std::abs(r.margin) <= 1e-12);
    CHECK(check_scalar_wielandt(x, y, HermMatrix::scalar(2, 1.5), 1, 2).lhs == 0.0);
    CHECK_THROWS_AS(check_scalar_wielandt(x, x, inst.a, 1, 2), Error);
  }

  TEST_CASE("property: scalar Wielandt on random orthogonal pairs") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
      const auto pr = gen_isometry_pair(sub_seed(seed, "xy"), 4, 1);
      const HermMatrix a = gen_operator(sub_seed(seed, "a"), 4, 1, 5);
      REQUIRE(check_scalar_wielandt(pr.x.matrix().col(0), pr.y.matrix().col(0), a, 1, 5).passed());
    }
  }
}

TEST_SUITE("compare_bounds") {
  TEST_CASE("(1, 2, 1)") {
    const auto c = compare_bounds(1, 2, 1);
    CHECK(c.values[0] == doctest::Approx(0.524691358).epsilon(1e-9));
    CHECK(c.tightest == 3);
    CHECK(c.thm1_ge_thm2);
    CHECK(c.thm3_le_thm2.value());
    CHECK(c.orderings_hold());
    // the exponent-p chain c^p = 1/3 exceeds 2/9, the 2p chain 1/9 does not
    CHECK_FALSE(c.chain_holds_p);
    CHECK(c.chain_holds_2p);
    CHECK(c.chain_rhs_p == doctest::Approx(1.0 / 3));
    CHECK(c.chain_rhs_2p == doctest::Approx(1.0 / 9));
  }

  TEST_CASE("(1, 2, 0.5) and (1, 2, 5)") {
    const auto half = compare_bounds(1, 2, 0.5);
    CHECK(half.thm3_ge_thm2.value());
    CHECK(half.tightest == 2);
    const auto five = compare_bounds(1, 2, 5);
    CHECK(five.thm2_le_thm3.value());
    CHECK(five.crossover.value() == doctest::Approx(4.0));
    CHECK(five.tightest == 2);
  }

  TEST_CASE("m = M has no crossover") {
    const auto c = compare_bounds(1, 1, 1);
    CHECK_FALSE(c.crossover.has_value());
    CHECK(c.orderings_hold());
  }

  TEST_CASE("property: the 2p chain holds everywhere, the exponent-p chain fails exactly for M < (1 + sqrt 2) m") {
    Rng rng(41);
    for (int trial = 0; trial < 2000; ++trial) {
      const double m = std::pow(10.0, rng.uniform(-1, 1));
      const double ratio = 1 + rng.uniform(0.01, 4);
      const double p = rng.uniform(0.55, 6);
      const auto c = compare_bounds(m, m * ratio, p);
      REQUIRE(c.chain_holds_2p);
      // for p > 1/2 the exponent-p chain is c^p (M/m)^p >= 1, i.e. M/m >= 1 + sqrt 2
      if (std::abs(ratio - (1 + std::sqrt(2.0))) > 1e-9) REQUIRE(c.chain_holds_p == (ratio > 1 + std::sqrt(2.0)));
    }
  }

  TEST_CASE("property: tightest family is invariant under scaling (m, M) together") {
    Rng rng(42);
    for (int trial = 0; trial < 1000; ++trial) {
      const double m = rng.uniform(0.5, 2), big_m = m * rng.uniform(1.01, 20), p = rng.uniform(0.1, 6);
      const double s = std::pow(10.0, rng.uniform(-2, 2));
      // the second and third bounds depend on M/m only
      REQUIRE(bound_thm2(m, big_m, p) == doctest::Approx(bound_thm2(s * m, s * big_m, p)).epsilon(1e-12));
      REQUIRE(bound_thm3(m, big_m, p) == doctest::Approx(bound_thm3(s * m, s * big_m, p)).epsilon(1e-12));
      const auto a = compare_bounds(m, big_m, p), b = compare_bounds(s * m, s * big_m, p);
      if (a.tightest != 1 && b.tightest != 1 && std::abs(a.values[1] - a.values[2]) > 1e-9 * a.values[1])
        REQUIRE(a.tightest == b.tightest);
    }
  }
}
