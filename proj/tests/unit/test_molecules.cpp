#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "bol/errors.hpp"
#include "bol/grid.hpp"
#include "bol/molecules.hpp"
#include "support.hpp"

namespace bol {
namespace {

TEST(Molecules, StaircaseHasTwoLayers) {
  const auto dec = decompose(staircase_1d(0.01));
  ASSERT_EQ(dec.molecules.size(), 2u);
  EXPECT_DOUBLE_EQ(dec.molecules[0].a_lo, 0.0);
  EXPECT_DOUBLE_EQ(dec.molecules[0].a_hi, 2.0);
  EXPECT_EQ(dec.molecules[0].level_cells, 200u);
  EXPECT_DOUBLE_EQ(dec.molecules[1].a_lo, 2.0);
  EXPECT_DOUBLE_EQ(dec.molecules[1].a_hi, 3.0);
  EXPECT_EQ(dec.molecules[1].level_cells, 100u);
  EXPECT_NEAR(dec.molecules[1].level_measure, 1.0, 1e-12);
  EXPECT_TRUE(verify_r1_r2(dec).pass);
  EXPECT_DOUBLE_EQ(dec.alpha_observed, 0.5);
}

TEST(Molecules, CorpusSatisfiesR1R2) {
  for (const auto& f : testing::small_corpus()) {
    const auto dec = decompose(f);
    const auto rep = verify_r1_r2(dec);
    EXPECT_TRUE(rep.reconstruction_exact) << rep.max_cell_error;
    EXPECT_TRUE(rep.l1_additive) << rep.l1_relative_error;
    EXPECT_TRUE(rep.tv_additive) << rep.tv_relative_error;
    EXPECT_TRUE(rep.halving);
    EXPECT_TRUE(rep.count_within_bound);
    EXPECT_TRUE(rep.pass) << rep.detail;
    EXPECT_FALSE(rep.offending.has_value());
  }
}

TEST(Molecules, LayersAreInterleavedAndNested) {
  for (const auto& f : testing::small_corpus()) {
    const auto dec = decompose(f);
    double last_hi[2] = {0.0, 0.0};
    std::size_t counts[2] = {0, 0};
    std::string signs;
    for (const auto& m : dec.molecules) {
      const int c = m.sign > 0 ? 0 : 1;
      EXPECT_DOUBLE_EQ(m.a_lo, last_hi[c]);
      EXPECT_GT(m.a_hi, m.a_lo);
      last_hi[c] = m.a_hi;
      ++counts[c];
      signs += m.sign > 0 ? '+' : '-';
      for (const double v : m.layer.values()) {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, m.a_hi - m.a_lo);
      }
    }
    std::string expected;
    for (std::size_t i = 0; i < std::max(counts[0], counts[1]); ++i) {
      if (i < counts[0]) expected += '+';
      if (i < counts[1]) expected += '-';
    }
    EXPECT_EQ(signs, expected);
  }
}

TEST(Molecules, AlphaObservedIsMaxRatio) {
  for (const auto& f : testing::small_corpus()) {
    const auto dec = decompose(f);
    double best = 0.0;
    for (const auto& m : dec.molecules) best = std::max(best, molecule_ratio(m.layer));
    EXPECT_DOUBLE_EQ(dec.alpha_observed, best);
  }
}

TEST(Molecules, NegativeFunction) {
  const auto f = staircase_1d(0.05).scaled(-1.0);
  const auto dec = decompose(f);
  ASSERT_EQ(dec.molecules.size(), 2u);
  for (const auto& m : dec.molecules) EXPECT_EQ(m.sign, -1);
  EXPECT_TRUE(verify_r1_r2(dec).pass);
}

TEST(Molecules, ZeroFunction) {
  const auto dec = decompose(GridFunction::zeros({4, 4}, 1.0));
  EXPECT_TRUE(dec.molecules.empty());
  EXPECT_TRUE(verify_r1_r2(dec).pass);
  EXPECT_THROW(verify_r3(dec), DomainError);
}

TEST(Molecules, RatioOfSquareAndDisc) {
  // ||chi||_inf^{1/2} |A|^{1/2} / TV under l1 TV: 1/4 for squares, sqrt(pi)/8 for discs.
  EXPECT_NEAR(molecule_ratio(square_indicator(0.75, 1.0 / 16.0)), 0.25, 1e-12);
  EXPECT_NEAR(molecule_ratio(ball_indicator(2, 1.0, 0.005).function), std::sqrt(std::numbers::pi) / 8.0, 2e-3);
  EXPECT_DOUBLE_EQ(molecule_ratio(GridFunction::zeros({2, 2}, 1.0)), 0.0);
}

TEST(Isoperimetric, GridConstants) {
  EXPECT_DOUBLE_EQ(isoperimetric_constant_grid({50}), 0.5);
  EXPECT_NEAR(isoperimetric_constant_grid({16, 16}), 0.25, 1e-12);
  EXPECT_NEAR(isoperimetric_constant_grid({16, 40}), 0.25, 1e-12);
  EXPECT_NEAR(isoperimetric_constant_grid({6, 6, 6}), 1.0 / 6.0, 1e-12);
  EXPECT_THROW(isoperimetric_constant_grid({}), DomainError);
}

TEST(Molecules, R3BudgetOnCorpus) {
  for (const auto& f : testing::small_corpus()) {
    const auto rep = verify_r3(decompose(f));
    EXPECT_NEAR(rep.c_iso, 0.25, 1e-12);
    EXPECT_NEAR(rep.budget, std::pow(2.0, 1.5) * 0.25, 1e-12);
    EXPECT_TRUE(rep.pass) << rep.alpha_observed;
  }
  const auto tight = verify_r3(decompose(testing::small_corpus()[0]), 1e-3);
  EXPECT_FALSE(tight.pass);
}

}  // namespace
}  // namespace bol
