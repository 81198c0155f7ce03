#include <cmath>
#include <fstream>
#include <numbers>

#include <gtest/gtest.h>

#include "bol/errors.hpp"
#include "bol/grid.hpp"
#include "bol/grid_io.hpp"
#include "support.hpp"

namespace bol {
namespace {

TEST(Grid, ShapeAndValuesMustAgree) {
  EXPECT_THROW(GridFunction({2, 2}, 1.0, {0.0, 0.0}, {1.0, 2.0, 3.0}), DomainError);
  EXPECT_THROW(GridFunction({2}, 0.0, {0.0}, {1.0, 2.0}), DomainError);
  EXPECT_THROW(GridFunction({2}, 1.0, {0.0, 0.0}, {1.0, 2.0}), DomainError);
}

TEST(Grid, AtIsZeroOutsideTheBox) {
  const GridFunction f({2, 3}, 0.5, {0.0, 0.0}, {1, 2, 3, 4, 5, 6});
  const std::ptrdiff_t in[] = {1, 2};
  const std::ptrdiff_t out[] = {2, 0};
  const std::ptrdiff_t neg[] = {-1, 0};
  EXPECT_DOUBLE_EQ(f.at(in), 6.0);
  EXPECT_DOUBLE_EQ(f.at(out), 0.0);
  EXPECT_DOUBLE_EQ(f.at(neg), 0.0);
  EXPECT_DOUBLE_EQ(f.cell_volume(), 0.25);
  const auto c = f.cell_center(in);
  EXPECT_DOUBLE_EQ(c[0], 0.75);
  EXPECT_DOUBLE_EQ(c[1], 1.25);
}

TEST(Grid, TotalVariationOfUnitSquare) {
  // l1 perimeter of [0,1]^2 is 4 at any resolution.
  for (const double h : {0.5, 0.1, 1.0 / 64.0}) {
    const auto sq = square_indicator(1.0, h);
    EXPECT_NEAR(total_variation(sq), 4.0, 1e-12) << h;
    EXPECT_NEAR(lp_norm(sq, 1.0), 1.0, 1e-12);
  }
}

TEST(Grid, StaircaseNorms) {
  const auto f = staircase_1d(0.01);
  const auto n = norms(f, 2.0);
  EXPECT_NEAR(n.l1, 5.0, 1e-12);
  EXPECT_NEAR(n.linf, 3.0, 0.0);
  // jumps 3, 1, 2
  EXPECT_NEAR(n.tv, 6.0, 1e-12);
  EXPECT_NEAR(n.lp, std::sqrt(9.0 + 4.0), 1e-12);
  EXPECT_NEAR(n.bv(), 11.0, 1e-12);
}

TEST(Grid, LpNormRejectsSmallExponent) {
  EXPECT_THROW(lp_norm(staircase_1d(), 0.5), DomainError);
  EXPECT_THROW(norms(staircase_1d(), 0.9), DomainError);
}

// Coarea identity: TV(g) equals the sum over consecutive distinct values
// v_i < v_{i+1} of (v_{i+1} - v_i) times the perimeter of {g > v_i}, for
// non-negative piecewise-constant g. Checked on both sign parts.
double coarea(const GridFunction& g) {
  std::vector<double> lv(g.values().begin(), g.values().end());
  lv.push_back(0.0);
  std::sort(lv.begin(), lv.end());
  lv.erase(std::unique(lv.begin(), lv.end()), lv.end());
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < lv.size(); ++i) {
    std::vector<double> ind(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) ind[k] = g.values()[k] > lv[i] ? 1.0 : 0.0;
    s += (lv[i + 1] - lv[i]) * total_variation(g.with_values(ind));
  }
  return s;
}

TEST(Grid, CoareaIdentityOnCorpus) {
  for (const auto& f : testing::small_corpus()) {
    std::vector<double> pos(f.size()), neg(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
      pos[k] = std::max(f.values()[k], 0.0);
      neg[k] = std::max(-f.values()[k], 0.0);
    }
    for (const auto& g : {f.with_values(pos), f.with_values(neg)}) {
      EXPECT_NEAR(coarea(g), total_variation(g), 1e-12 * (1.0 + total_variation(g)));
    }
  }
}

TEST(Grid, TotalVariationIsSeminorm) {
  const auto& c = testing::small_corpus();
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    const auto& f = c[i];
    EXPECT_NEAR(total_variation(f.scaled(-2.5)), 2.5 * total_variation(f), 1e-12 * total_variation(f));
    const auto g = f.with_values(std::vector<double>(f.size(), 0.0));
    EXPECT_DOUBLE_EQ(total_variation(g), 0.0);
  }
  // Triangle inequality on pairs sharing a lattice.
  const auto a = square_indicator(0.5, 1.0 / 16.0);
  const auto b = square_indicator(0.75, 1.0 / 16.0);
  EXPECT_LE(total_variation(sum(a, b)), total_variation(a) + total_variation(b) + 1e-12);
}

TEST(Grid, DiscPerimeterConvergesToL1Perimeter) {
  // The l1 perimeter of the unit disc is 8; the Euclidean perimeter is 2 pi.
  std::vector<double> tv;
  for (const double h : {0.04, 0.02, 0.01}) tv.push_back(total_variation(ball_indicator(2, 1.0, h).function));
  for (const double v : tv) EXPECT_NEAR(v, 8.0, 0.05);
  // Richardson-style extrapolation of the last two levels (first order).
  EXPECT_NEAR(2.0 * tv[2] - tv[1], 8.0, 0.02);
  EXPECT_NEAR(8.0 / (2.0 * std::numbers::pi), 4.0 / std::numbers::pi, 1e-15);
}

TEST(Grid, BallIndicatorAnalyticCompanions) {
  const auto b = ball_indicator(2, 1.0, 0.05);
  EXPECT_DOUBLE_EQ(b.analytic_volume, std::numbers::pi);
  EXPECT_DOUBLE_EQ(b.analytic_perimeter, 2.0 * std::numbers::pi);
  EXPECT_NEAR(lp_norm(b.function, 1.0), std::numbers::pi, 0.02);
  const auto b3 = ball_indicator(3, 0.5, 0.05);
  EXPECT_NEAR(b3.analytic_volume, 4.0 / 3.0 * std::numbers::pi * 0.125, 1e-14);
  EXPECT_NEAR(lp_norm(b3.function, 1.0), b3.analytic_volume, 0.01);
}

TEST(Grid, BallIndicatorGuards) {
  EXPECT_THROW(ball_indicator(2, 1.0, 1e-5), ResourceGuardError);
  try {
    ball_indicator(2, 1.0, 1e-5);
  } catch (const ResourceGuardError& e) {
    EXPECT_EQ(e.guard(), "ball_resolution");
  }
  EXPECT_THROW(ball_indicator(2, -1.0, 0.1), DomainError);
}

TEST(Grid, UnitBallVolumes) {
  EXPECT_DOUBLE_EQ(unit_ball_volume(1), 2.0);
  EXPECT_NEAR(unit_ball_volume(2), std::numbers::pi, 1e-15);
  EXPECT_NEAR(unit_ball_volume(3), 4.0 * std::numbers::pi / 3.0, 1e-14);
  EXPECT_NEAR(unit_ball_volume(4), std::numbers::pi * std::numbers::pi / 2.0, 1e-14);
}

TEST(Grid, ShiftAndDifference) {
  const GridFunction f({4}, 1.0, {0.0}, {0, 1, 1, 0});
  const std::ptrdiff_t k[] = {1};
  const auto g = f.shifted(k);  // g(x) = f(x + 1)
  // The box grows, so locate cells by position: g = 1 on [0, 2).
  auto g_at = [&](double x) {
    const std::ptrdiff_t i[] = {static_cast<std::ptrdiff_t>(std::floor((x - g.origin()[0]) / g.spacing()))};
    return g.at(i);
  };
  EXPECT_DOUBLE_EQ(g_at(0.5), 1.0);
  EXPECT_DOUBLE_EQ(g_at(1.5), 1.0);
  EXPECT_DOUBLE_EQ(g_at(2.5), 0.0);
  EXPECT_DOUBLE_EQ(g_at(-0.5), 0.0);
  const auto d = difference(g, f);
  EXPECT_DOUBLE_EQ(lp_norm(d, 1.0), 2.0);
  EXPECT_DOUBLE_EQ(lp_norm(sum(f, f), 1.0), 4.0);
  const GridFunction other({4}, 0.5, {0.0}, {0, 1, 1, 0});
  EXPECT_THROW(difference(f, other), DomainError);
  const GridFunction offset({4}, 1.0, {0.3}, {0, 1, 1, 0});
  EXPECT_THROW(difference(f, offset), DomainError);
}

TEST(Grid, SupportBox) {
  const auto sq = square_indicator(1.0, 0.25);
  const auto box = sq.support();
  ASSERT_FALSE(box.empty);
  EXPECT_EQ(box.extents(), (std::vector<std::size_t>{4, 4}));
  EXPECT_EQ(sq.support_cells(), 16u);
  EXPECT_NEAR(sq.support_diameter(), std::sqrt(2.0), 1e-12);
  EXPECT_TRUE(GridFunction::zeros({3, 3}, 1.0).support().empty);
}

TEST(Grid, UpsamplePreservesNorms) {
  for (const auto& f : testing::small_corpus()) {
    const auto g = upsample(f, 2);
    EXPECT_NEAR(lp_norm(g, 1.0), lp_norm(f, 1.0), 1e-12 * lp_norm(f, 1.0));
    EXPECT_NEAR(total_variation(g), total_variation(f), 1e-12 * total_variation(f));
    EXPECT_DOUBLE_EQ(lp_norm(g, INFINITY), lp_norm(f, INFINITY));
  }
}

TEST(GridIo, CsvRoundTrip) {
  testing::TempDir dir("grid");
  for (const auto& f : {staircase_1d(0.1), testing::small_corpus()[0], ball_indicator(3, 1.0, 0.25).function}) {
    const auto path = dir / "f.csv";
    write_grid(path, f);
    const auto g = read_grid(path);
    EXPECT_EQ(g.shape(), f.shape());
    EXPECT_EQ(g.origin(), f.origin());
    EXPECT_EQ(g.spacing(), f.spacing());
    EXPECT_TRUE(std::equal(f.values().begin(), f.values().end(), g.values().begin()));
  }
}

TEST(GridIo, BinaryRoundTrip) {
  testing::TempDir dir("grid");
  const auto f = testing::small_corpus()[3];
  const auto path = dir / "f.bolg";
  write_grid(path, f);
  std::ifstream in(path, std::ios::binary);
  char magic[8];
  in.read(magic, 8);
  EXPECT_EQ(std::string(magic, 8), "BOLGRID1");
  const auto g = read_grid(path);
  EXPECT_EQ(g.shape(), f.shape());
  EXPECT_TRUE(std::equal(f.values().begin(), f.values().end(), g.values().begin()));
}

TEST(GridIo, HeaderlessCsvNeedsDimension) {
  testing::TempDir dir("grid");
  const auto path = dir / "raw.csv";
  {
    std::ofstream out(path);
    out << "0,1,1\n0,2,0\n";
  }
  EXPECT_THROW(read_grid(path), DomainError);
  GridReadOptions opt;
  opt.dim = 2;
  opt.spacing = 0.5;
  const auto f = read_grid(path, opt);
  EXPECT_EQ(f.shape(), (std::vector<std::size_t>{2, 3}));
  EXPECT_DOUBLE_EQ(f.spacing(), 0.5);
  opt.dim = 3;
  EXPECT_THROW(read_grid(path, opt), DomainError);
}

TEST(GridIo, MalformedFiles) {
  testing::TempDir dir("grid");
  const auto ragged = dir / "ragged.csv";
  {
    std::ofstream out(ragged);
    out << "0,1,1\n0,2\n";
  }
  GridReadOptions opt;
  opt.dim = 2;
  EXPECT_THROW(read_grid(ragged, opt), DomainError);
  const auto bad = dir / "bad.csv";
  {
    std::ofstream out(bad);
    out << "# {\"dim\": 1, \"shape\": [3], \"spacing\": 1, \"origin\": [0]}\n1,x,2\n";
  }
  EXPECT_THROW(read_grid(bad), DomainError);
  EXPECT_THROW(read_grid(dir / "missing.csv"), DomainError);
}

}  // namespace
}  // namespace bol
