#include <gtest/gtest.h>

#include <cmath>

#include "qtsallis/bounds.hpp"

using namespace qtsallis;

namespace {

DensityMatrix diag_state(std::initializer_list<double> v) { return density_from_matrix(HermitianOperator::diagonal(v).matrix()); }

const DensityMatrix& rho_fix() {
  static const auto r = diag_state({0.5, 0.5});
  return r;
}
const DensityMatrix& sigma_fix() {
  static const auto s = diag_state({0.75, 0.25});
  return s;
}

}  // namespace

TEST(Summary, FixtureConstants) {
  const auto c = summarize(rho_fix(), sigma_fix());
  EXPECT_DOUBLE_EQ(c.a1, 0.5);
  EXPECT_DOUBLE_EQ(c.b1, 0.75);
  EXPECT_DOUBLE_EQ(c.b0, 0.25);
  EXPECT_DOUBLE_EQ(c.lambda0, 0.25);
  EXPECT_DOUBLE_EQ(c.lambda1, 0.75);
  const auto d = distances(rho_fix(), sigma_fix());
  EXPECT_NEAR(d.trace_norm, 0.5, 1e-15);
  EXPECT_NEAR(d.spectral_norm, 0.25, 1e-15);
}

TEST(Thm1, Fixture) {
  const auto reps = thm1_bounds(rho_fix(), sigma_fix(), 2.0);
  for (const auto& r : reps) {
    EXPECT_NEAR(r.rhs.value(), 2.0, 1e-12) << r.name;
    EXPECT_NEAR(r.lhs.value(), 1.0 / 3.0, 1e-12);
    EXPECT_TRUE(r.holds);
    EXPECT_FALSE(r.vacuous);
  }
  EXPECT_EQ(reps[0].name, "thm1_rhs1");
}

TEST(Thm1, EqualStatesGiveZero) {
  Rng rng(1);
  const auto rho = sample_density(3, 3, rng);
  for (const auto& r : thm1_bounds(rho, rho, 1.5)) {
    EXPECT_NEAR(r.rhs.value(), 0.0, 1e-12);
    EXPECT_NEAR(r.lhs.value(), 0.0, 1e-12);
    EXPECT_TRUE(r.holds);
  }
}

TEST(Thm1, VacuousOutsideHypotheses) {
  for (const auto& r : thm1_bounds(rho_fix(), sigma_fix(), 2.5)) {
    EXPECT_TRUE(r.vacuous);
    EXPECT_TRUE(r.rhs.is_infinite());
    EXPECT_TRUE(r.holds);
  }
  for (const auto& r : thm1_bounds(diag_state({0.6, 0.4, 0.0}), diag_state({0.5, 0.5, 0.0}), 2.0)) EXPECT_TRUE(r.vacuous);
}

TEST(Thm2, Fixture) {
  const auto r = thm2_bound(rho_fix(), sigma_fix(), 2.0);
  EXPECT_NEAR(r.rhs.value(), 2.0, 1e-12);
  EXPECT_NEAR(r.terms[0].second, 1.0, 1e-12);
  EXPECT_TRUE(r.holds);
  const auto tl = thm2_bound(rho_fix(), sigma_fix(), 2.0, Thm2Variant::traceless);
  EXPECT_EQ(tl.name, "thm2tl_rhs");
  EXPECT_NEAR(tl.rhs.value(), 2.0, 1e-12);
}

TEST(Thm2, PrefactorLimitAtFlatSigma) {
  EXPECT_DOUBLE_EQ(thm2_prefactor(0.25, 0.25, 1.5), 1.0);
  EXPECT_NEAR(thm2_prefactor(0.25, 0.25 * (1 + 1e-7), 1.5), 1.0, 1e-6);
  const auto r = thm2_bound(diag_state({0.7, 0.3}), diag_state({0.5, 0.5}), 1.5);
  EXPECT_TRUE(r.rhs.is_finite());
  EXPECT_FALSE(r.note.empty());
  EXPECT_TRUE(r.holds);
}

TEST(Thm2, EqualStatesAndVacuity) {
  const auto r = thm2_bound(sigma_fix(), sigma_fix(), 1.7);
  EXPECT_NEAR(r.rhs.value(), 0.0, 1e-15);
  EXPECT_NEAR(r.lhs.value(), 0.0, 1e-12);
  EXPECT_TRUE(thm2_bound(rho_fix(), sigma_fix(), 3.0).vacuous);
  const auto singular = thm2_bound(rho_fix(), diag_state({1.0, 0.0}), 2.0);
  EXPECT_TRUE(singular.vacuous);
  EXPECT_TRUE(singular.lhs.is_infinite());
}

TEST(Thm3, CeilingFactor) {
  EXPECT_NEAR(thm3_ceiling_factor(3.5), 1.2, 1e-15);
  EXPECT_DOUBLE_EQ(thm3_ceiling_factor(2.0), 1.0);
  EXPECT_DOUBLE_EQ(thm3_ceiling_factor(3.0), 1.0);
  EXPECT_THROW(thm3_ceiling_factor(1.0), QOutOfRange);
}

TEST(Thm3, Fixture) {
  const auto g = thm3_bound(rho_fix(), sigma_fix(), 2.0);
  const auto q2 = thm3_bound(rho_fix(), sigma_fix(), 2.0, Thm3Variant::q2);
  EXPECT_NEAR(g.rhs.value(), 1.5, 1e-12);
  EXPECT_NEAR(q2.rhs.value(), 1.0, 1e-12);
  EXPECT_TRUE(g.holds);
  EXPECT_TRUE(q2.holds);
}

TEST(Thm3, SingularSigmaFiniteBranch) {
  const auto r = thm3_bound(diag_state({0.6, 0.4, 0.0}), diag_state({0.5, 0.5, 0.0}), 2.0, Thm3Variant::q2);
  EXPECT_NEAR(r.lhs.value(), 0.04, 1e-12);
  EXPECT_NEAR(r.rhs.value(), 0.24, 1e-12);
  EXPECT_TRUE(r.holds);
  EXPECT_NEAR(r.dist.trace_norm, 0.2, 1e-14);
}

TEST(Thm3, RangeOfQ) {
  EXPECT_FALSE(thm3_bound(rho_fix(), sigma_fix(), 5.5).vacuous);
  EXPECT_TRUE(thm3_bound(rho_fix(), sigma_fix(), 5.5).holds);
  EXPECT_TRUE(thm3_bound(rho_fix(), sigma_fix(), 2.5, Thm3Variant::q2).vacuous);
}

TEST(LowerBounds, Fixture) {
  const auto reps = lower_bounds(rho_fix(), sigma_fix(), 2.0, 0.5);
  const auto& chain = reps[0];
  const auto& pin = reps[1];
  EXPECT_NEAR(pin.lhs.value(), 0.125, 1e-15);
  EXPECT_NEAR(pin.rhs.value(), 0.5 * std::log(4.0 / 3.0), 1e-12);
  EXPECT_TRUE(pin.holds);
  const double hellinger = 2.0 * (1.0 - std::sqrt(0.375) - std::sqrt(0.125));
  EXPECT_NEAR(chain.lhs.value(), hellinger, 1e-14);
  EXPECT_TRUE(chain.holds);
}

TEST(LowerBounds, EqualStates) {
  for (const auto& r : lower_bounds(sigma_fix(), sigma_fix(), 1.5, 0.3)) {
    EXPECT_NEAR(r.lhs.value(), 0.0, 1e-12);
    EXPECT_NEAR(r.rhs.value(), 0.0, 1e-12);
    EXPECT_TRUE(r.holds);
  }
  for (const auto& r : lower_bounds(rho_fix(), sigma_fix(), 2.5, 0.3)) EXPECT_TRUE(r.vacuous);
  for (const auto& r : lower_bounds(rho_fix(), sigma_fix(), 1.5, 1.0)) EXPECT_TRUE(r.vacuous);
}

TEST(PowerDiff, Examples) {
  const auto x = HermitianOperator::diagonal({1.0, 0.0});
  const auto y = HermitianOperator::diagonal({0.0, 1.0});
  const auto r = power_diff_bound(x, y, 2, SchattenIndex(1.0));
  EXPECT_NEAR(r.lhs.value(), 2.0, 1e-15);
  EXPECT_NEAR(r.rhs.value(), 4.0, 1e-15);
  EXPECT_TRUE(r.holds);
  const auto same = power_diff_bound(x, x, 3, SchattenIndex::infinity());
  EXPECT_EQ(same.lhs.value(), 0.0);
  EXPECT_EQ(same.rhs.value(), 0.0);
  Rng rng(3);
  const Matrix g = ginibre(3, 3, rng);
  const HermitianOperator h((g + g.adjoint()) * 0.5);
  const auto base = power_diff_bound(h, HermitianOperator::identity(3), 1, SchattenIndex(2.0));
  EXPECT_EQ(base.lhs.value(), base.rhs.value());
  EXPECT_THROW(power_diff_bound(x, y, 0, SchattenIndex(1.0)), DomainViolation);
  EXPECT_EQ(power_diff_bound(x, y, 2, SchattenIndex(1.0), PowerDiffMode::same_norm).name, "remark1");
}

TEST(Lemma3, Examples) {
  const auto a = HermitianOperator::diagonal({0.5, 0.5});
  const auto b = HermitianOperator::diagonal({0.75, 0.25});
  const auto r = lemma3_bound(a, b, 0.5);
  EXPECT_NEAR(r.lhs.value(), std::abs(std::sqrt(0.375) + std::sqrt(0.125) - 1.0), 1e-14);
  EXPECT_NEAR(r.lhs.value(), 0.034074, 1e-6);
  EXPECT_NEAR(r.rhs.value(), std::sqrt(2.0) * 0.5, 1e-14);
  EXPECT_TRUE(r.holds);
  EXPECT_NEAR(lemma3_bound(b, b, 0.3).lhs.value(), 0.0, 1e-15);
  const auto scaled = lemma3_bound(2.0 * a, 2.0 * b, 0.5);
  EXPECT_NEAR(scaled.lhs.value(), 2.0 * r.lhs.value(), 1e-14);
  EXPECT_NEAR(scaled.rhs.value(), 2.0 * r.rhs.value(), 1e-14);
  EXPECT_EQ(scaled.holds, r.holds);
}

TEST(Lemma3, Preconditions) {
  const auto a = HermitianOperator::diagonal({0.5, 0.5});
  EXPECT_TRUE(lemma3_bound(a, HermitianOperator::diagonal({0.5, 0.6}), 0.5).vacuous);
  EXPECT_TRUE(lemma3_bound(a, HermitianOperator::diagonal({1.0, 0.0}), 0.5).vacuous);
  EXPECT_TRUE(lemma3_bound(a, a, 1.0).vacuous);
  EXPECT_TRUE(lemma3_bound(HermitianOperator::diagonal({1.5, -0.5}), a, 0.5).vacuous);
}

TEST(Frechet, Examples) {
  const QuadratureRule rule(0.5);
  const auto eye = HermitianOperator::identity(2);
  const auto same = frechet_check(eye, eye, rule);
  EXPECT_NEAR(same.slack.value(), 0.0, 1e-14);
  const auto r = frechet_check(eye, 2.0 * eye, rule);
  EXPECT_NEAR(r.slack.value(), 0.5 - (1.0 - std::pow(2.0, -0.5)), 1e-10);
  EXPECT_TRUE(r.holds);
  EXPECT_TRUE(frechet_check(HermitianOperator::diagonal({1.0, 0.0}), eye, rule).vacuous);
}

TEST(Frechet, RandomPairs) {
  Rng rng(4);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int rep = 0; rep < 50; ++rep) {
    RealVector ea(4), eb(4);
    for (int i = 0; i < 4; ++i) {
      ea(i) = std::pow(10.0, -u(rng));
      eb(i) = std::pow(10.0, -u(rng));
    }
    const HermitianOperator a(from_eigensystem(haar_unitary(4, rng), ea));
    const HermitianOperator b(from_eigensystem(haar_unitary(4, rng), eb));
    for (double r : {0.1, 0.5, 0.9}) EXPECT_GE(frechet_check(a, b, QuadratureRule(r)).slack.value(), -1e-7);
  }
}
