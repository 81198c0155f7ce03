#include "bol/besov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bol/errors.hpp"
#include "format.hpp"

namespace bol {

namespace {

// Radius beyond which the lattice modulus is constant: every overlapping
// shift and the shortest disjoint one are inside it.
double resolution_radius(const GridFunction& f) {
  const auto ext = f.support().extents();
  double full2 = 0.0;
  double min_extent = std::numeric_limits<double>::infinity();
  for (const auto e : ext) {
    const double n = static_cast<double>(e);
    full2 += (n - 1.0) * (n - 1.0);
    min_extent = std::min(min_extent, n);
  }
  return std::max(std::sqrt(full2), min_extent) * f.spacing();
}

}  // namespace

BesovNorm besov_orlicz_norm(const GridFunction& f, const YoungFunction& phi, const WeightFunction& psi,
                            const BesovConfig& config) {
  BesovNorm out;
  out.orlicz_part = luxemburg_norm(f, phi).norm;
  const double h = f.spacing();
  out.t_min = config.t_min.value_or(h);
  out.t_max = config.t_max.value_or(10.0 * f.support_diameter());
  if (out.orlicz_part == 0.0) {
    out.converged = true;
    return out;
  }
  if (!(out.t_min > 0.0) || !(out.t_max > out.t_min)) {
    throw DomainError("besov: need 0 < t_min < t_max, got [" + format_double(out.t_min) + ", " +
                      format_double(out.t_max) + "]");
  }
  if (config.nodes < 2) throw DomainError("besov: at least two nodes are required");

  // Psi(tau) ~ tau^{-zero_exponent} as tau -> infinity and
  // tau^{-infinity_exponent} as tau -> 0, while omega grows like
  // tau^{inverse exponent of Phi at infinity} near 0.
  if (!(psi.zero_exponent() > 0.0)) {
    throw DivergenceError("tail", "besov: weight does not decay at infinity (exponent " +
                                      format_double(psi.zero_exponent()) + "), the seminorm tail diverges");
  }
  if (!(phi.inverse_exponent_at_infinity() > psi.infinity_exponent())) {
    throw DivergenceError("head", "besov: weight exponent " + format_double(psi.infinity_exponent()) +
                                      " at 0 is not below the modulus order " +
                                      format_double(phi.inverse_exponent_at_infinity()) + ", the seminorm head diverges");
  }

  const double full = resolution_radius(f);
  const auto table = ModulusTable::build(f, phi, std::min(out.t_max, full), config.shift_budget);
  const double lo = std::log(out.t_min);
  const double hi = std::log(out.t_max);
  out.seminorm_part = trapezoid_exp(
      [&](double u) {
        const double w = table(std::exp(u));
        return w > 0.0 ? psi.log_eval(u) + std::log(w) : -std::numeric_limits<double>::infinity();
      },
      lo, hi, config.nodes);

  QuadratureConfig tail_quad;
  tail_quad.rel_tol = 1e-9;
  const auto weight_tail = integrate_exp_tail([&](double u) { return psi.log_eval(hi + u); }, tail_quad);
  if (weight_tail.divergent) throw DivergenceError("tail", "besov: weight integral over (t_max, inf) diverges");
  const double weight_mass = weight_tail.value + weight_tail.remainder;
  if (table.fully_resolved() && out.t_max >= full) {
    out.seminorm_part += table.max_value() * weight_tail.value;
    out.tail_bound += table.max_value() * weight_tail.remainder;
  } else {
    out.tail_bound += 2.0 * out.orlicz_part * weight_mass;
  }

  const double m = lp_norm(f, std::numeric_limits<double>::infinity());
  const double tv = total_variation(f);
  const double log_cap = std::log(2.0 * out.orlicz_part);
  const auto head = integrate_exp_tail(
      [&](double u) {
        const double bound = std::log(2.0 * m) - phi.log_inverse(std::log(2.0 * m / tv) - lo + u);
        return psi.log_eval(lo - u) + std::min(bound, log_cap);
      },
      tail_quad);
  if (head.divergent) throw DivergenceError("head", "besov: head integral over (0, t_min) diverges");
  out.head_bound = head.value + head.remainder;
  out.tail_bound += out.head_bound;

  out.total = out.orlicz_part + out.seminorm_part;
  out.converged = out.tail_bound <= config.rel_tol * out.seminorm_part;
  return out;
}

double besov_bv_ratio(const GridFunction& f, const YoungFunction& phi, const WeightFunction& psi,
                      const BesovConfig& config) {
  const double bv = lp_norm(f, 1.0) + total_variation(f);
  if (bv == 0.0) throw DomainError("besov_bv_ratio: the BV norm is zero");
  const auto norm = besov_orlicz_norm(f, phi, psi, config);
  if (!norm.converged) {
    throw ConvergenceError("besov_bv_ratio: tail bound " + format_double(norm.tail_bound) +
                           " exceeds rel_tol * seminorm " + format_double(config.rel_tol * norm.seminorm_part));
  }
  return norm.total / bv;
}

}  // namespace bol
