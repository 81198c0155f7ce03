#pragma once

#include <cstddef>

#include "bol/grid.hpp"
#include "bol/orlicz.hpp"
#include "bol/quadrature.hpp"
#include "bol/young.hpp"

namespace bol {

/// Settings for the seminorm integral. The window defaults to
/// [h, 10 * support diameter].
struct BesovConfig {
  std::size_t nodes = 512;
  double rel_tol = 1e-2;
  std::optional<double> t_min;
  std::optional<double> t_max;
  std::size_t shift_budget = kDefaultShiftBudget;
};

struct BesovNorm {
  double orlicz_part = 0.0;
  double seminorm_part = 0.0;
  double total = 0.0;
  double t_min = 0.0;
  double t_max = 0.0;
  /// Bound on the parts of the integral that were not computed exactly.
  double tail_bound = 0.0;
  /// Upper bound on the head integral over (0, t_min).
  double head_bound = 0.0;
  /// tail_bound <= rel_tol * seminorm.
  bool converged = false;
};

/// ||f||_Phi + int_0^inf Psi(t) omega_Phi(f, t) dt / t.
///
/// The window [t_min, t_max] uses the trapezoid rule in ln t on the lattice
/// modulus. Below t_min the integral is bounded with
/// omega(t) <= 2M / Phi^{-1}(2M / (t TV)), M = ||f||_inf. Above the
/// saturation radius omega is constant, so that part of the tail is exact;
/// any gap between t_max and the saturation radius is bounded by the largest
/// tabulated value. Throws DivergenceError("head"/"tail") when Psi makes
/// either end non-integrable.
BesovNorm besov_orlicz_norm(const GridFunction& f, const YoungFunction& phi, const WeightFunction& psi,
                            const BesovConfig& config = {});

/// besov_orlicz_norm(f).total / (||f||_1 + TV(f)). Throws DomainError for the
/// zero function and ConvergenceError when the norm did not converge.
double besov_bv_ratio(const GridFunction& f, const YoungFunction& phi, const WeightFunction& psi,
                      const BesovConfig& config = {});

}  // namespace bol
