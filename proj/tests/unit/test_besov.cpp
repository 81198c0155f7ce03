#include <cmath>

#include <gtest/gtest.h>

#include "bol/besov.hpp"
#include "bol/errors.hpp"
#include "bol/grid.hpp"
#include "bol/young.hpp"
#include "support.hpp"

namespace bol {
namespace {

using testing::rel_err;

GridFunction unit_interval(double h) {
  const auto n = static_cast<std::ptrdiff_t>(std::llround(1.0 / h));
  const std::ptrdiff_t lo[] = {2};
  const std::ptrdiff_t hi[] = {2 + n};
  return box_indicator({static_cast<std::size_t>(n + 4)}, h, lo, hi);
}

GridFunction rescaled(const GridFunction& f, double s) {
  std::vector<double> origin = f.origin();
  for (auto& o : origin) o *= s;
  return GridFunction(f.shape(), f.spacing() * s, origin, std::vector<double>(f.values().begin(), f.values().end()));
}

// Reference from tests/oracles/oracles.py (besov_interval_closed_form):
// chi_[0,1], Phi = t^1.3, Psi = t^-0.2, omega(t) = (2 min(t, 1))^{1/1.3}.
constexpr double kIntervalSeminorm = 11.5159513030888;

TEST(Besov, IntervalApproachesClosedForm) {
  // The shortfall is the head over (0, h), of order h^{1/p - theta}, plus the
  // lattice modulus lagging the continuous one between lattice lengths.
  const auto phi = make_power_young(1.3);
  const auto psi = make_power_weight(0.2);
  EXPECT_FALSE(besov_orlicz_norm(unit_interval(1.0 / 250.0), phi, psi).converged);
  double prev_err = INFINITY;
  double prev_gap = INFINITY;
  for (const double h : {1.0 / 500.0, 1.0 / 1000.0, 1.0 / 2000.0}) {
    const auto n = besov_orlicz_norm(unit_interval(h), phi, psi);
    EXPECT_NEAR(n.orlicz_part, 1.0, 1e-12);
    EXPECT_TRUE(n.converged) << h;
    EXPECT_LT(n.seminorm_part, kIntervalSeminorm);
    const double err = rel_err(n.seminorm_part, kIntervalSeminorm);
    EXPECT_LT(err, 0.75 * prev_err) << h;
    const double gap = 1.0 - (n.seminorm_part + n.head_bound) / kIntervalSeminorm;
    EXPECT_LT(gap, prev_gap) << h;
    prev_err = err;
    prev_gap = gap;
  }
  EXPECT_LT(prev_err, 0.01);
  EXPECT_LT(prev_gap, 2e-3);
}

TEST(Besov, Homogeneity) {
  const auto phi = make_power_young(1.5);
  const auto psi = make_power_weight(0.3);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& f = testing::small_corpus()[i];
    const auto a = besov_orlicz_norm(f, phi, psi);
    const auto b = besov_orlicz_norm(f.scaled(-2.0), phi, psi);
    EXPECT_LT(rel_err(b.seminorm_part, 2.0 * a.seminorm_part), 1e-10);
    EXPECT_LT(rel_err(b.total, 2.0 * a.total), 1e-10);
  }
}

TEST(Besov, CriticalPairScalesLikePerimeter) {
  // Dilating the grid by s multiplies the seminorm by s^{d/p - theta} = s^{d-1}
  // at the critical weight.
  const double p = 1.3;
  const auto phi = make_power_young(p);
  const auto psi = make_power_weight(critical_theta(p, 2));
  const auto disc = ball_indicator(2, 1.0, 1.0 / 8.0).function;
  const auto base = besov_orlicz_norm(disc, phi, psi);
  for (const double s : {0.25, 3.0}) {
    const auto scaled = besov_orlicz_norm(rescaled(disc, s), phi, psi);
    EXPECT_LT(rel_err(scaled.seminorm_part, s * base.seminorm_part), 1e-9) << s;
    EXPECT_LT(rel_err(scaled.orlicz_part, std::pow(s, 2.0 / p) * base.orlicz_part), 1e-12);
  }
}

TEST(Besov, ConvergenceFlagMatchesTailBound) {
  const auto f = square_indicator(1.0, 1.0 / 16.0);
  BesovConfig cfg;
  const auto n = besov_orlicz_norm(f, make_power_young(1.3), make_power_weight(0.5), cfg);
  EXPECT_EQ(n.converged, n.tail_bound <= cfg.rel_tol * n.seminorm_part);
  EXPECT_DOUBLE_EQ(n.total, n.orlicz_part + n.seminorm_part);
  cfg.rel_tol = 1e-9;
  EXPECT_FALSE(besov_orlicz_norm(f, make_power_young(1.3), make_power_weight(0.5), cfg).converged);
  EXPECT_THROW(besov_bv_ratio(f, make_power_young(1.3), make_power_weight(0.5), cfg), ConvergenceError);
}

TEST(Besov, DivergentWeights) {
  const auto f = square_indicator(1.0, 1.0 / 8.0);
  const auto phi = make_power_young(1.3);
  try {
    besov_orlicz_norm(f, phi, make_power_weight(0.0));
    FAIL();
  } catch (const DivergenceError& e) {
    EXPECT_EQ(e.end(), "tail");
  }
  try {
    besov_orlicz_norm(f, phi, make_power_weight(1.0 / 1.3));
    FAIL();
  } catch (const DivergenceError& e) {
    EXPECT_EQ(e.end(), "head");
  }
}

TEST(Besov, ZeroFunction) {
  const auto z = GridFunction::zeros({4, 4}, 0.25);
  const auto n = besov_orlicz_norm(z, make_power_young(2.0), make_power_weight(0.3));
  EXPECT_DOUBLE_EQ(n.total, 0.0);
  EXPECT_THROW(besov_bv_ratio(z, make_power_young(2.0), make_power_weight(0.3)), DomainError);
}

TEST(Besov, WindowValidation) {
  const auto f = square_indicator(1.0, 1.0 / 8.0);
  BesovConfig cfg;
  cfg.t_min = 1.0;
  cfg.t_max = 0.5;
  EXPECT_THROW(besov_orlicz_norm(f, make_power_young(1.3), make_power_weight(0.3), cfg), DomainError);
}

TEST(Besov, CriticalPairBracketNestsUnderRefinement) {
  // The head below h decays only like h^{1/p - theta} = h^0.23 here, so the
  // norm is bracketed rather than converged: the computed part grows and the
  // part plus the head bound shrinks as h halves.
  const double p = 1.3;
  const auto phi = make_power_young(p);
  const auto psi = make_power_weight(critical_theta(p, 2));
  double lo_prev = 0.0;
  double hi_prev = INFINITY;
  for (const double h : {1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0}) {
    const auto f = ball_indicator(2, 0.5, h).function;
    const double bv = lp_norm(f, 1.0) + total_variation(f);
    const auto n = besov_orlicz_norm(f, phi, psi);
    const double lo = n.total / bv;
    const double hi = (n.total + n.tail_bound) / bv;
    EXPECT_GT(lo, lo_prev) << h;
    EXPECT_LT(hi, hi_prev) << h;
    lo_prev = lo;
    hi_prev = hi;
  }
  EXPECT_THROW(besov_bv_ratio(ball_indicator(2, 0.5, 1.0 / 16.0).function, phi, psi), ConvergenceError);
}

}  // namespace
}  // namespace bol
