#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "bol/errors.hpp"
#include "bol/evidence.hpp"
#include "bol/grid.hpp"
#include "bol/young.hpp"
#include "support.hpp"

namespace bol {
namespace {

using testing::rel_err;
constexpr double kPi = std::numbers::pi;

TEST(SymmetricDifference, OneDimensional) {
  EXPECT_DOUBLE_EQ(symmetric_difference_volume(1, 1.0, 0.6), 1.2);
  EXPECT_DOUBLE_EQ(symmetric_difference_volume(1, 1.0, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(symmetric_difference_volume(1, 1.0, 5.0), 4.0);
}

TEST(SymmetricDifference, LensFormulas) {
  for (const double c : {0.1, 0.7, 1.3, 1.99}) {
    const double lens2 = 2.0 * std::acos(c / 2.0) - 0.5 * c * std::sqrt(4.0 - c * c);
    EXPECT_NEAR(symmetric_difference_volume(2, 1.0, c), 2.0 * (kPi - lens2), 1e-12);
    const double lens3 = kPi * (4.0 + c) * (2.0 - c) * (2.0 - c) / 12.0;
    EXPECT_NEAR(symmetric_difference_volume(3, 1.0, c), 2.0 * (4.0 * kPi / 3.0 - lens3), 1e-12);
  }
  EXPECT_NEAR(symmetric_difference_volume(2, 0.5, 3.0), 2.0 * kPi * 0.25, 1e-12);
  EXPECT_THROW(symmetric_difference_volume(4, 1.0, 0.5), DomainError);
}

TEST(Lemma6, IntervalExample) {
  Lemma6Options opt;
  opt.samples = 0;
  const auto rec = lemma6_check(1, 1.0, {0.3}, opt);
  ASSERT_TRUE(rec.pass);
  const auto& row = rec.measured["rows"][0];
  EXPECT_DOUBLE_EQ(row["exact"].get<double>(), 1.2);
  EXPECT_DOUBLE_EQ(row["bound"].get<double>(), 0.6);
}

TEST(Lemma6, EqualityOnlyAtZeroOffsetInOneDimension) {
  Lemma6Options opt;
  opt.samples = 0;
  const auto rec = lemma6_check(1, 1.0, {0.0, 0.01, 0.5, 0.99}, opt);
  EXPECT_TRUE(rec.pass);
  const auto& rows = rec.measured["rows"];
  EXPECT_DOUBLE_EQ(rows[0]["exact"].get<double>(), rows[0]["bound"].get<double>());
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_GT(rows[i]["exact"].get<double>(), rows[i]["bound"].get<double>());
  }
}

TEST(Lemma6, MonteCarloAgreesWithLensArea) {
  Lemma6Options opt;
  opt.samples = 1'000'000;
  for (const int d : {2, 3}) {
    const auto rec = lemma6_check(d, 1.0, {0.1, 0.5, 0.9}, opt);
    EXPECT_TRUE(rec.pass);
    for (const auto& row : rec.measured["rows"]) {
      EXPECT_TRUE(row["agrees_within_3_sigma"].get<bool>()) << row.dump();
      EXPECT_TRUE(row["exact_pass"].get<bool>());
    }
  }
}

TEST(Lemma6, MonteCarloIsReproducible) {
  Lemma6Options opt;
  opt.samples = 300'000;
  const auto a = lemma6_check(3, 1.0, {0.5}, opt);
  const auto b = lemma6_check(3, 1.0, {0.5}, opt);
  EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
  opt.seed += 1;
  const auto c = lemma6_check(3, 1.0, {0.5}, opt);
  EXPECT_NE(a.measured["rows"][0]["monte_carlo"], c.measured["rows"][0]["monte_carlo"]);
}

TEST(Lemma6, RejectsOffsetsOutsideRange) {
  EXPECT_THROW(lemma6_check(2, 1.0, {1.0}), DomainError);
  EXPECT_THROW(lemma6_check(2, 1.0, {-0.1}), DomainError);
  EXPECT_THROW(lemma6_check(2, 0.0, {0.1}), DomainError);
}

NecessityOptions expecting(Verdict v, SymdiffModel m = SymdiffModel::lemma6) {
  NecessityOptions o;
  o.expected = v;
  o.symdiff = m;
  return o;
}

const std::vector<double> kRadii{1.0, 0.5, 0.25, 0.125};

TEST(Necessity, BallBvNorm) {
  const auto rec = necessity_ball_experiment(make_power_young(1.3), make_power_weight(critical_theta(1.3, 2)), 2,
                                             {1.0}, expecting(Verdict::bounded));
  EXPECT_NEAR(rec.measured["rows"][0]["bv"].get<double>(), 3.0 * kPi, 1e-12);
  EXPECT_DOUBLE_EQ(rec.inputs["omega_box_radius"].get<double>(), 2.0);
  EXPECT_NEAR(rec.inputs["diam_omega"].get<double>(), 4.0 * std::sqrt(2.0), 1e-12);
}

// References from tests/oracles/oracles.py (necessity_ratio).
TEST(Necessity, CriticalRatiosMatchOracle) {
  const double p = 1.3;
  const auto phi = make_power_young(p);
  const auto psi = make_power_weight(critical_theta(p, 2));
  const std::vector<double> lemma6{1.57735780289962, 1.7971574263249, 1.92365204965446, 1.98345251413953};
  const std::vector<double> exact{2.3575478546272, 2.7333854866607, 2.96390544776874, 3.08489728580737};
  const auto a = necessity_ball_experiment(phi, psi, 2, kRadii, expecting(Verdict::bounded));
  const auto b = necessity_ball_experiment(phi, psi, 2, kRadii, expecting(Verdict::bounded, SymdiffModel::exact));
  for (std::size_t i = 0; i < kRadii.size(); ++i) {
    EXPECT_LT(rel_err(a.measured["rows"][i]["ratio"].get<double>(), lemma6[i]), 1e-3) << kRadii[i];
    EXPECT_LT(rel_err(b.measured["rows"][i]["ratio"].get<double>(), exact[i]), 1e-3) << kRadii[i];
    EXPECT_DOUBLE_EQ(a.measured["rows"][i]["ratio_exact_symdiff"].get<double>(),
                     b.measured["rows"][i]["ratio"].get<double>());
  }
}

TEST(Necessity, CriticalRatiosSettleAsRadiusShrinks) {
  // Seminorm and BV norm both scale like r for small r; the corrections are
  // r^{2/p - 1} (Orlicz part) and r (volume part), so successive differences
  // eventually shrink by 2^{-(2/p - 1)} per halving.
  const double p = 1.3;
  std::vector<double> radii;
  for (int k = 0; k <= 16; ++k) radii.push_back(std::ldexp(1.0, -k));
  const auto rec = necessity_ball_experiment(make_power_young(p), make_power_weight(critical_theta(p, 2)), 2, radii,
                                             expecting(Verdict::bounded));
  EXPECT_FALSE(rec.measured["any_divergent"].get<bool>());
  std::vector<double> ratios;
  for (const auto& row : rec.measured["rows"]) ratios.push_back(row["ratio"].get<double>());
  for (const double x : ratios) {
    EXPECT_GT(x, 1.5);
    EXPECT_LT(x, 2.05);
  }
  const double q_limit = std::pow(2.0, -(2.0 / p - 1.0));
  for (std::size_t i = ratios.size() - 4; i < ratios.size(); ++i) {
    const double q = (ratios[i] - ratios[i - 1]) / (ratios[i - 1] - ratios[i - 2]);
    EXPECT_GT(q, q_limit) << i;
    EXPECT_LT(q, q_limit + 0.03) << i;
  }
}

TEST(Necessity, OffCriticalRatiosGrow) {
  const auto rec = necessity_ball_experiment(make_power_young(1.3), make_power_weight(0.8), 2, kRadii,
                                             expecting(Verdict::unbounded));
  EXPECT_TRUE(rec.measured["any_divergent"].get<bool>());
  EXPECT_TRUE(rec.measured["strictly_increasing"].get<bool>());
  const double exponent = 0.8 - critical_theta(1.3, 2);
  EXPECT_GE(rec.measured["growth"].get<double>(), std::pow(8.0, exponent) / 2.0);
  EXPECT_FALSE(rec.warnings.empty());
}

TEST(Necessity, AutoVerdictRunsTheCondition) {
  NecessityOptions opt;
  opt.sup.points = 25;
  const auto rec = necessity_ball_experiment(make_power_young(1.3), make_power_weight(0.8), 2, {1.0, 0.5}, opt);
  EXPECT_EQ(rec.measured["condition_verdict"], "unbounded");
}

TEST(Necessity, GridCrossCheckIsAboveAxisLowerBound) {
  const double p = 1.3;
  NecessityOptions opt = expecting(Verdict::bounded);
  opt.grid_h = 1.0 / 16.0;
  const auto rec = necessity_ball_experiment(make_power_young(p), make_power_weight(critical_theta(p, 2)), 2, {1.0},
                                             opt);
  const auto& row = rec.measured["rows"][0];
  ASSERT_TRUE(row.contains("grid"));
  ASSERT_TRUE(row["grid"].contains("total")) << row["grid"].dump();
  // The lattice sup over all directions dominates the single-direction bound.
  EXPECT_GE(row["grid"]["total"].get<double>(), 0.95 * row["besov_lower"].get<double>());
}

TEST(Necessity, RejectsBadRadii) {
  const auto phi = make_power_young(1.3);
  const auto psi = make_power_weight(0.5);
  EXPECT_THROW(necessity_ball_experiment(phi, psi, 2, {0.5, 1.0}, expecting(Verdict::bounded)), DomainError);
  EXPECT_THROW(necessity_ball_experiment(phi, psi, 2, {1.0, 1.0}, expecting(Verdict::bounded)), DomainError);
  EXPECT_THROW(necessity_ball_experiment(phi, psi, 2, {}, expecting(Verdict::bounded)), DomainError);
  EXPECT_THROW(necessity_ball_experiment(phi, psi, 2, {1.0, -0.5}, expecting(Verdict::bounded)), DomainError);
  EXPECT_THROW(necessity_ball_experiment(phi, psi, 4, {1.0}, expecting(Verdict::bounded, SymdiffModel::exact)),
               DomainError);
}

TEST(Sobolev, SquareRatioIsOneQuarter) {
  std::vector<ShapeSampler> shapes;
  for (const double side : {0.25, 1.0, 3.0}) {
    shapes.push_back({"square", [side](double h) { return square_indicator(side, h); }});
  }
  const auto rec = sobolev_check(shapes, 2, 1.0 / 16.0);
  EXPECT_TRUE(rec.pass);
  for (const auto& row : rec.measured["rows"]) EXPECT_NEAR(row["ratio"].get<double>(), 0.25, 1e-12);
}

TEST(Sobolev, DiscRatio) {
  std::vector<ShapeSampler> shapes{{"disc", [](double h) { return ball_indicator(2, 1.0, h).function; }}};
  const auto rec = sobolev_check(shapes, 2, 1.0 / 128.0);
  EXPECT_TRUE(rec.pass);
  EXPECT_NEAR(rec.measured["C_grid"].get<double>(), std::sqrt(kPi) / 8.0, 3e-3);
}

TEST(Sobolev, CorpusAndHomogeneity) {
  const auto& c = testing::small_corpus();
  const auto rec = sobolev_check(c, 2);
  EXPECT_TRUE(rec.pass);
  EXPECT_LE(rec.measured["C_grid"].get<double>(), 0.25 + 1e-12);
  std::vector<GridFunction> scaled;
  for (const auto& f : c) scaled.push_back(f.scaled(-7.5));
  EXPECT_LT(rel_err(sobolev_check(scaled, 2).measured["C_grid"].get<double>(), rec.measured["C_grid"].get<double>()),
            1e-12);
  EXPECT_THROW(sobolev_check(c, 1), DomainError);
}

TEST(Sufficiency, DiscAtCriticalPair) {
  const double p = 1.3;
  const auto disc = ball_indicator(2, 0.5, 1.0 / 16.0).function;
  SufficiencyOptions opt;
  opt.sup.points = 49;
  const auto rec = sufficiency_molecule_estimates(disc, make_power_young(p), make_power_weight(critical_theta(p, 2)),
                                                  opt);
  EXPECT_TRUE(rec.pass) << rec.to_json().dump(1);
  EXPECT_EQ(rec.measured["molecules"].size(), 1u);
}

TEST(Sufficiency, StaircaseBigBound) {
  const auto rec = sufficiency_molecule_estimates(staircase_1d(0.01), make_power_young(1.3), make_power_weight(0.2));
  ASSERT_EQ(rec.measured["molecules"].size(), 2u);
  for (const auto& m : rec.measured["molecules"]) {
    ASSERT_EQ(m["big"].size(), 3u);
    for (const auto& b : m["big"]) EXPECT_TRUE(b["pass"].get<bool>()) << b.dump();
  }
  EXPECT_TRUE(rec.pass);
}

TEST(Sufficiency, TwoDimensionalCorpusItems) {
  const double p = 1.4;
  SufficiencyOptions opt;
  opt.sup.points = 49;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto rec = sufficiency_molecule_estimates(testing::small_corpus()[i], make_power_young(p),
                                                    make_power_weight(critical_theta(p, 2)), opt);
    EXPECT_TRUE(rec.pass) << i;
  }
}

TEST(Evidence, JsonNumbers) {
  EXPECT_EQ(json_number(1.5), 1.5);
  EXPECT_EQ(json_number(INFINITY), "inf");
  EXPECT_EQ(json_number(-INFINITY), "-inf");
  EXPECT_EQ(json_number(NAN), "nan");
}

}  // namespace
}  // namespace bol
