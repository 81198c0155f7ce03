#include <cmath>

#include <gtest/gtest.h>

#include "bol/condition.hpp"
#include "bol/errors.hpp"
#include "bol/young.hpp"
#include "support.hpp"

namespace bol {
namespace {

using testing::rel_err;

TEST(Condition, ClosedFormValues) {
  EXPECT_NEAR(power_condition_closed_form(1.3, 2), 6.19047619047619, 1e-12);
  EXPECT_NEAR(power_condition_closed_form(1.2, 2), 7.5, 1e-12);
  EXPECT_NEAR(power_condition_closed_form(1.4, 2), 5.83333333333333, 1e-12);
  const double theta3 = critical_theta(1.2, 3);
  EXPECT_NEAR(power_condition_closed_form(1.2, 3), 1.0 / theta3 + 1.2 / (2.0 * 0.2), 1e-12);
  EXPECT_THROW(power_condition_closed_form(1.3, 1), DomainError);
}

TEST(Condition, CriticalPowerPairIsConstantInS) {
  for (const double p : {1.2, 1.3, 1.4}) {
    const auto phi = make_power_young(p);
    const auto psi = make_power_weight(critical_theta(p, 2));
    const double closed = power_condition_closed_form(p, 2);
    for (const double s : {1e-5, 0.37, 1.0, 42.0, 1e9}) {
      const auto t = condition_terms(s, phi, psi, 2);
      EXPECT_FALSE(t.divergent);
      EXPECT_LT(rel_err(t.value, closed), 1e-4) << "p=" << p << " s=" << s;
      EXPECT_NEAR(t.first, p / (2.0 - p), 1e-4 * closed);
    }
  }
}

TEST(Condition, MatchesIndependentQuadrature) {
  // tests/oracles/oracles.py: power_condition_numeric(1.3, theta(1.3, 2), 0.37)
  const auto phi = make_power_young(1.3);
  const auto psi = make_power_weight(critical_theta(1.3, 2));
  EXPECT_LT(rel_err(condition_value(0.37, phi, psi, 2), 6.19047614863383), 1e-4);
}

TEST(Condition, LowerLimitOfFirstIntegral) {
  const double p = 1.3;
  const double theta = critical_theta(p, 2);
  const auto phi = make_power_young(p);
  const auto psi = make_power_weight(theta);
  ConditionOptions opt;
  opt.head_lower_limit = 0.5;
  const double s = 2.0;
  const auto t = condition_terms(s, phi, psi, 2, opt);
  const double expected = s / std::pow(s * s, 1.0 / p) * (std::pow(s, theta) - std::pow(0.5, theta)) / theta;
  // 64 trapezoid nodes over ln(s/a) for e^{theta u}: error (theta du)^2 / 12.
  const double du = std::log(s / 0.5) / 63.0;
  EXPECT_LT(rel_err(t.first, expected), 1.05 * (theta * du) * (theta * du) / 12.0);
}

TEST(Condition, HeadDivergence) {
  const auto phi = make_power_young(1.3);
  try {
    condition_value(1.0, phi, make_power_weight(0.0), 2);
    FAIL();
  } catch (const DivergenceError& e) {
    EXPECT_EQ(e.end(), "head");
  }
}

TEST(Condition, TailDivergenceIsFlagged) {
  const auto phi = make_power_young(1.3);
  const auto psi = make_power_weight(0.8);
  const auto t = condition_terms(1.0, phi, psi, 2);
  EXPECT_TRUE(t.divergent);
  try {
    condition_value(1.0, phi, psi, 2);
    FAIL();
  } catch (const DivergenceError& e) {
    EXPECT_EQ(e.end(), "tail");
  }
}

TEST(ConditionSup, CriticalPairsBounded) {
  for (const double p : {1.2, 1.3, 1.4}) {
    const auto rep = condition_sup(make_power_young(p), make_power_weight(critical_theta(p, 2)), 2);
    EXPECT_EQ(rep.verdict, Verdict::bounded) << rep.reason;
    EXPECT_LT(rel_err(rep.D_hat, power_condition_closed_form(p, 2)), 0.01);
    EXPECT_LE(std::abs(rep.high_slope), 0.02);
    EXPECT_LE(std::abs(rep.low_slope), 0.02);
    EXPECT_EQ(rep.s_grid.size(), 97u);
    EXPECT_DOUBLE_EQ(rep.s_grid.front(), 1e-6);
    EXPECT_DOUBLE_EQ(rep.s_grid.back(), 1e12);
  }
}

TEST(ConditionSup, AboveCriticalWeightIsUnbounded) {
  const auto rep = condition_sup(make_power_young(1.3), make_power_weight(0.8), 2);
  EXPECT_EQ(rep.verdict, Verdict::unbounded);
  ASSERT_TRUE(rep.divergent_s.has_value());
  EXPECT_NEAR(rep.high_slope, 0.8 - critical_theta(1.3, 2), 0.03);
}

TEST(ConditionSup, BelowCriticalWeightGrowsAsSShrinks) {
  // C(s) ~ s^{theta - theta(p, d)}: grows as s -> 0 when theta is below critical.
  const double theta = 0.3;
  const auto rep = condition_sup(make_power_young(1.3), make_power_weight(theta), 2);
  EXPECT_EQ(rep.verdict, Verdict::unbounded);
  EXPECT_FALSE(rep.divergent_s.has_value());
  EXPECT_NEAR(rep.low_slope, critical_theta(1.3, 2) - theta, 0.03);
}

TEST(ConditionSup, SlopeReproducibleOverAddedDecade) {
  const auto phi = make_power_young(1.3);
  const auto psi = make_power_weight(0.3);
  SupOptions opt;
  const auto a = condition_sup(phi, psi, 2, opt);
  opt.s_min = 1e-7;
  opt.points = 105;
  const auto b = condition_sup(phi, psi, 2, opt);
  EXPECT_EQ(b.verdict, Verdict::unbounded);
  EXPECT_NEAR(a.low_slope, b.low_slope, 0.01);
  EXPECT_GT(b.low_slope, 0.0);
}

TEST(ConditionSup, ThreePieceExampleIsBounded) {
  const auto phi = make_section5_young(0.1);
  const auto rep = condition_sup(phi, make_section5_weight(phi), 2);
  EXPECT_NE(rep.verdict, Verdict::unbounded) << rep.reason;
  EXPECT_TRUE(std::isfinite(rep.D_hat));
}

TEST(ConditionSup, ReportIsDeterministic) {
  const auto phi = make_power_young(1.3);
  const auto psi = make_power_weight(critical_theta(1.3, 2));
  const auto a = condition_sup(phi, psi, 2);
  const auto b = condition_sup(phi, psi, 2);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.D_hat, b.D_hat);
}

TEST(Verdict, Names) {
  EXPECT_EQ(to_string(Verdict::bounded), "bounded");
  EXPECT_EQ(to_string(Verdict::unbounded), "unbounded");
  EXPECT_EQ(to_string(Verdict::inconclusive), "inconclusive");
}

// References from tests/oracles/oracles.py (first_bound, second_bound).
TEST(ThreePiece, FirstBoundMatchesOracle) {
  const double r = Section5Params::make(0.1).r;
  const std::vector<double> s{10.0 * r, 100.0 * r, 1000.0 * r};
  const auto b = section5_first_bound(0.1, s);
  ASSERT_EQ(b.size(), 3u);
  // 200 nodes per unit of ln t on an integrand close to e^x: du^2 / 12.
  const double tol = 1.05 / (200.0 * 200.0 * 12.0);
  EXPECT_LT(rel_err(b[0].value, 0.915589121749363), tol);
  EXPECT_LT(rel_err(b[1].value, 1.0117036614512), tol);
  EXPECT_LT(rel_err(b[2].value, 1.02142530671679), tol);
  for (const auto& x : b) EXPECT_TRUE(x.pass);
  const double r13 = Section5Params::make(0.13).r;
  const std::vector<double> s13{r13 * r13};
  EXPECT_LT(rel_err(section5_first_bound(0.13, s13)[0].value, 1.02798278753362), tol);
}

TEST(ThreePiece, FirstBoundBelowTwoOnLogGrid) {
  const double r = Section5Params::make(0.1).r;
  for (const auto& b : section5_first_bound(0.1, log_grid(r, 1e3 * r, 20))) {
    EXPECT_LT(b.value, 2.0);
    EXPECT_GE(b.value, 0.0);
    EXPECT_GT(b.intermediate, 0.0 - 1e-300);
  }
  const std::vector<double> at_r{r};
  EXPECT_DOUBLE_EQ(section5_first_bound(0.1, at_r)[0].value, 0.0);
}

TEST(ThreePiece, FirstBoundRejectsSmallS) {
  const double r = Section5Params::make(0.1).r;
  const std::vector<double> s{0.5 * r};
  EXPECT_THROW(section5_first_bound(0.1, s), DomainError);
}

TEST(ThreePiece, SecondBoundMatchesOracleAndConverges) {
  const double r = Section5Params::make(0.1).r;
  const auto b = section5_second_bound(0.1, r);
  EXPECT_LT(rel_err(b.value, 127.004523615981), 1e-6);
  EXPECT_TRUE(b.converged);
  EXPECT_LT(b.relative_change, 1e-6);
  EXPECT_LT(b.remainder_doubled, b.remainder);
}

TEST(ThreePiece, SecondBoundDivergesWithoutTheCorrection) {
  try {
    section5_second_bound(0.0, Section5Params::make(0.0).r);
    FAIL();
  } catch (const DivergenceError& e) {
    EXPECT_EQ(e.end(), "tail");
  }
}

}  // namespace
}  // namespace bol
