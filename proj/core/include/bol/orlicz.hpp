#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bol/grid.hpp"
#include "bol/young.hpp"

namespace bol {

inline constexpr std::size_t kDefaultShiftBudget = 1'000'000;

struct LuxemburgResult {
  double norm = 0.0;
  int iterations = 0;
  /// |J(norm) - 1| with J(lambda) = sum Phi(|v| / lambda) h^d.
  double residual = 0.0;
};

/// inf{lambda > 0 : sum Phi(|v|/lambda) h^d <= 1} by geometric bisection.
LuxemburgResult luxemburg_norm(const GridFunction& f, const YoungFunction& phi);
/// Same for a bare value list with cell volume `cell_volume`.
LuxemburgResult luxemburg_norm(std::span<const double> values, double cell_volume, const YoungFunction& phi);
/// Values given as distinct magnitudes with (possibly fractional) counts.
LuxemburgResult luxemburg_norm(std::span<const double> magnitudes, std::span<const double> counts,
                               double cell_volume, const YoungFunction& phi);

/// Lattice sup of ||f(. + k h) - f||_Phi over |k h| <= t, precomputed for
/// every lattice vector up to a radius. Shifts that move the support off
/// itself all give the same value (the norm of |f| taken twice), so once the
/// radius passes the smallest such shift the table also knows the global sup.
class ModulusTable {
 public:
  /// Tabulates all lattice vectors with |k h| <= t_max. Throws
  /// ResourceGuardError("shift_budget") when more than `shift_budget` vectors
  /// would be needed.
  static ModulusTable build(const GridFunction& f, const YoungFunction& phi, double t_max,
                            std::size_t shift_budget = kDefaultShiftBudget);

  /// omega_Phi(f, t). Below one cell: (t/h) omega(h). Beyond the tabulated
  /// radius only when fully_resolved().
  double operator()(double t) const;

  double spacing() const noexcept { return h_; }
  double t_max() const noexcept { return t_max_; }
  /// Length of the shortest shift with disjoint supports.
  double saturation_radius() const noexcept { return saturation_radius_; }
  /// The norm of a shift difference with disjoint supports.
  double saturated_value() const noexcept { return saturated_; }
  /// The radius covers every overlapping shift and the disjoint regime, so
  /// the table is exact for all t.
  bool fully_resolved() const noexcept { return fully_resolved_; }
  /// Largest value in the table (the sup over all shifts when fully
  /// resolved).
  double max_value() const;
  std::size_t lattice_vectors() const noexcept { return lengths2_.size(); }

 private:
  double h_ = 1.0;
  double t_max_ = 0.0;
  double saturation_radius_ = 0.0;
  double saturated_ = 0.0;
  bool fully_resolved_ = false;
  bool zero_ = true;
  // Squared lengths (in cells) sorted ascending, with the running max of the
  // shift-difference norms.
  std::vector<long long> lengths2_;
  std::vector<double> prefix_max_;
};

struct ModulusCurve {
  std::vector<double> ts;
  std::vector<double> values;
  std::size_t shift_budget = 0;
};

/// omega_Phi(f, t) for a single t.
double modulus_of_continuity(const GridFunction& f, const YoungFunction& phi, double t,
                             std::size_t shift_budget = kDefaultShiftBudget);
/// omega_Phi(f, t) for sorted positive ts (one shared table).
ModulusCurve modulus_curve(const GridFunction& f, const YoungFunction& phi, std::span<const double> ts,
                           std::size_t shift_budget = kDefaultShiftBudget);

struct BoundCheck {
  double t = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

/// omega_1(f, t) <= t TV(f), accepted with the grid slack (1 + 2h/t).
std::vector<BoundCheck> check_lemma_omega1(const GridFunction& f, std::span<const double> ts);

/// ||f(.+kh) - f||_Phi <= 2||f||_inf / Phi^{-1}(2||f||_inf / ||f(.+kh) - f||_1).
/// `t` of the result holds |k h|.
BoundCheck check_infima_bound(const GridFunction& f, const YoungFunction& phi, std::span<const std::ptrdiff_t> k);

/// Smallest N (on a log grid over [1e-6, 1e12]) with Phi(x) <= x^q for all
/// sampled x >= N; infinity when Phi(x) > x^q at the end of the grid.
double domination_threshold(const YoungFunction& phi, double q);

struct OrliczBvCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  /// max(Phi(1), N) * max(1, C).
  double constant = 0.0;
  double threshold = 0.0;
  double sobolev_constant = 0.0;
  bool pass = false;
};

/// ||f||_Phi <= max(Phi(1), N) max(1, C) (||f||_1 + TV(f)) for d >= 2, with
/// N = domination_threshold(phi, d/(d-1)) and C a Sobolev constant for the
/// grid (||g||_{d/(d-1)} <= C TV(g)).
OrliczBvCheck check_orlicz_bv_bound(const GridFunction& f, const YoungFunction& phi, double sobolev_constant);

}  // namespace bol
