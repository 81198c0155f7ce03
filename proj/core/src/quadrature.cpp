#include "bol/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "bol/errors.hpp"

namespace bol {

double trapezoid_exp(const std::function<double(double)>& log_integrand, double a, double b, std::size_t nodes) {
  if (nodes < 2) throw DomainError("quadrature: at least two nodes are required");
  if (!(b > a)) return 0.0;
  const double du = (b - a) / static_cast<double>(nodes - 1);
  std::vector<double> g(nodes);
  double gmax = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < nodes; ++i) {
    const double u = i + 1 == nodes ? b : a + du * static_cast<double>(i);
    g[i] = log_integrand(u);
    if (std::isnan(g[i])) throw DomainError("quadrature: integrand is NaN");
    gmax = std::max(gmax, g[i]);
  }
  if (gmax == -std::numeric_limits<double>::infinity()) return 0.0;
  if (gmax == std::numeric_limits<double>::infinity()) return gmax;
  double s = 0.0;
  for (std::size_t i = 0; i < nodes; ++i) {
    const double w = (i == 0 || i + 1 == nodes) ? 0.5 : 1.0;
    s += w * std::exp(g[i] - gmax);
  }
  return s * du * std::exp(gmax);
}

TailResult integrate_exp_tail(const std::function<double(double)>& log_integrand, const QuadratureConfig& quad) {
  if (!(quad.u_max > 0.0)) throw DomainError("quadrature: u_max must be positive");
  TailResult r;
  double lo = 0.0;
  double hi = quad.u_max;
  for (;;) {
    r.value += trapezoid_exp(log_integrand, lo, hi, quad.nodes);
    r.u_end = hi;
    // Slope over the last node spacing of the segment.
    const double du = (hi - lo) / static_cast<double>(quad.nodes - 1);
    const double g_end = log_integrand(hi);
    const double g_prev = log_integrand(hi - du);
    if (g_end == -std::numeric_limits<double>::infinity()) {
      r.end_slope = -std::numeric_limits<double>::infinity();
      r.remainder = 0.0;
      return r;
    }
    r.end_slope = (g_end - g_prev) / du;
    if (!(r.end_slope < 0.0)) {
      r.divergent = true;
      r.remainder = std::numeric_limits<double>::infinity();
      return r;
    }
    r.remainder = std::exp(g_end) / -r.end_slope;
    if (r.remainder <= quad.rel_tol * r.value) return r;
    if (hi >= quad.u_cap) {
      r.divergent = true;
      return r;
    }
    lo = hi;
    hi = std::min(2.0 * hi, quad.u_cap);
  }
}

}  // namespace bol
