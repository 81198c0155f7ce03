#pragma once

#include <cstddef>
#include <functional>
#include <optional>

namespace bol {

/// Quadrature settings shared by the Besov norm and the condition integrals.
/// Unset window bounds fall back to per-operation defaults.
struct QuadratureConfig {
  std::size_t nodes = 2048;
  /// Truncation point of improper integrals in the log variable.
  double u_max = 60.0;
  /// Hard cap on the log variable when a slowly decaying tail forces the
  /// window to grow.
  double u_cap = 122880.0;
  double rel_tol = 1e-9;
  std::optional<double> t_min;
  std::optional<double> t_max;
};

/// Integral of exp(g(u)) over [a, b] by the trapezoid rule with `nodes`
/// points. Uses a running maximum shift so large exponents do not overflow
/// before they cancel.
double trapezoid_exp(const std::function<double(double)>& log_integrand, double a, double b, std::size_t nodes);

struct TailResult {
  /// Integral over [0, u_end] (remainder not included).
  double value = 0.0;
  /// exp(g(u_end)) / |slope|: the tail beyond u_end for an integrand that
  /// keeps decaying at its end log-slope.
  double remainder = 0.0;
  double u_end = 0.0;
  /// d g / du at u_end.
  double end_slope = 0.0;
  bool divergent = false;
};

/// Integral of exp(g(u)) over [0, infinity). Integrates [0, u_max], then
/// doubles the window (same node count per new segment) while the remainder
/// exceeds rel_tol * value, up to u_cap. A non-negative end slope, or
/// reaching u_cap unresolved, marks the result divergent; `value` then holds
/// the truncated integral.
TailResult integrate_exp_tail(const std::function<double(double)>& log_integrand, const QuadratureConfig& quad);

}  // namespace bol
