#include "bol/condition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bol/errors.hpp"
#include "bol/parallel.hpp"
#include "format.hpp"

namespace bol {

namespace {

constexpr double kBoundedSlope = 0.02;
constexpr double kUnboundedSlope = 0.05;

double lsq_slope(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

struct EndFit {
  double slope = 0.0;
  bool sustained = false;
};

// Log-slope of values over the decade at one end of the grid; `low` measures
// growth as s decreases.
EndFit fit_end(const std::vector<double>& s, const std::vector<double>& v, bool low) {
  const std::size_t n = s.size();
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < n; ++i) {
    const bool inside = low ? s[i] <= 10.0 * s.front() * (1.0 + 1e-12) : s[i] >= s.back() / 10.0 * (1.0 - 1e-12);
    if (inside) idx.push_back(i);
  }
  if (idx.size() < 2) idx = low ? std::vector<std::size_t>{0, 1} : std::vector<std::size_t>{n - 2, n - 1};
  std::vector<double> x, y;
  for (const auto i : idx) {
    if (!(v[i] > 0.0)) return {};
    x.push_back(std::log(s[i]));
    y.push_back(std::log(v[i]));
  }
  EndFit fit;
  fit.slope = lsq_slope(x, y);
  fit.sustained = true;
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double local = (y[i] - y[i - 1]) / (x[i] - x[i - 1]);
    if (!(low ? local < 0.0 : local > 0.0)) fit.sustained = false;
  }
  if (low) fit.slope = -fit.slope;
  return fit;
}

}  // namespace

ConditionTerms condition_terms(double s, const YoungFunction& phi, const WeightFunction& psi, int d,
                               const ConditionOptions& options) {
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("condition: s must be positive, got " + format_double(s));
  if (d < 1) throw DomainError("condition: d must be >= 1");
  const auto& quad = options.quad;
  const double L = std::log(s);
  const double dm1 = d - 1.0;
  ConditionTerms out;
  out.s = s;

  // First term, t = s e^{-u}: Psi(1/t) dt/t = Psi(e^{u - L}) du.
  const double log_prefactor = dm1 * L - phi.log_inverse(d * L);
  auto head = [&](double u) { return psi.log_eval(u - L); };
  double h_value = 0.0;
  double h_error = 0.0;
  const double a = options.head_lower_limit;
  if (a > 0.0) {
    if (s > a) {
      const double len = std::log(s / a);
      const auto nodes = std::max<std::size_t>(
          64, static_cast<std::size_t>(std::ceil(static_cast<double>(quad.nodes) * len / quad.u_max)));
      h_value = trapezoid_exp(head, 0.0, len, std::min<std::size_t>(nodes, 1u << 20));
    }
  } else {
    if (!(psi.zero_exponent() > 0.0)) {
      throw DivergenceError("head", "condition: Psi(1/t)/t is not integrable at 0 (exponent " +
                                        format_double(psi.zero_exponent()) + ")");
    }
    const auto r = integrate_exp_tail(head, quad);
    if (r.divergent) throw DivergenceError("head", "condition: first integral diverges at s=" + format_double(s));
    h_value = r.value + r.remainder;
    h_error = r.remainder;
  }
  const double scale = std::exp(log_prefactor);
  out.first = scale * h_value;
  out.error = scale * h_error;

  // Second term, t = s e^{u}.
  const auto tail = integrate_exp_tail(
      [&](double u) { return psi.log_eval(-(L + u)) + dm1 * L - phi.log_inverse(L + u + dm1 * L); }, quad);
  out.u_end = tail.u_end;
  out.divergent = tail.divergent;
  if (tail.divergent) {
    out.second = tail.value;
    out.error = std::numeric_limits<double>::infinity();
  } else {
    out.second = tail.value + tail.remainder;
    out.error += tail.remainder;
  }
  out.value = out.first + out.second;
  return out;
}

double condition_value(double s, const YoungFunction& phi, const WeightFunction& psi, int d,
                       const ConditionOptions& options) {
  const auto t = condition_terms(s, phi, psi, d, options);
  if (t.divergent) {
    throw DivergenceError("tail", "condition: second integral diverges at s=" + format_double(s) +
                                      " (end slope non-negative or window cap reached)");
  }
  return t.value;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::bounded:
      return "bounded";
    case Verdict::unbounded:
      return "unbounded";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

ConditionReport condition_sup(const YoungFunction& phi, const WeightFunction& psi, int d, const SupOptions& options) {
  if (!(options.s_min > 0.0) || !(options.s_max > options.s_min)) {
    throw DomainError("condition_sup: need 0 < s_min < s_max");
  }
  if (options.points < 16) throw DomainError("condition_sup: at least 16 points are required");
  ConditionReport rep;
  rep.s_grid = log_grid(options.s_min, options.s_max, options.points);
  const std::size_t n = rep.s_grid.size();
  std::vector<ConditionTerms> terms(n);
  parallel_for(n, [&](std::size_t i) { terms[i] = condition_terms(rep.s_grid[i], phi, psi, d, options.condition); });
  for (const auto& t : terms) {
    rep.values.push_back(t.value);
    rep.errors.push_back(t.error);
    rep.divergent.push_back(t.divergent);
    if (t.divergent && !rep.divergent_s) rep.divergent_s = t.s;
  }
  const auto it = std::max_element(rep.values.begin(), rep.values.end());
  rep.D_hat = *it;
  rep.argmax_s = rep.s_grid[static_cast<std::size_t>(it - rep.values.begin())];

  const auto high = fit_end(rep.s_grid, rep.values, false);
  const auto low = fit_end(rep.s_grid, rep.values, true);
  rep.high_slope = high.slope;
  rep.low_slope = low.slope;
  if (rep.divergent_s) {
    rep.verdict = Verdict::unbounded;
    rep.reason = "second integral diverges at s=" + format_double(*rep.divergent_s);
  } else if ((high.slope >= kUnboundedSlope && high.sustained) || (low.slope >= kUnboundedSlope && low.sustained)) {
    rep.verdict = Verdict::unbounded;
    rep.reason = "sustained growth over the end decade";
  } else if (high.slope <= kBoundedSlope && low.slope <= kBoundedSlope) {
    rep.verdict = Verdict::bounded;
    rep.reason = "both end slopes at most 0.02";
  } else {
    rep.verdict = Verdict::inconclusive;
    rep.reason = "end slope between 0.02 and 0.05 or not sustained";
  }
  return rep;
}

double power_condition_closed_form(double p, int d) {
  if (d < 2) throw DomainError("power closed form: d must be >= 2 (the second integral diverges for d = 1)");
  if (!(p > 1.0)) throw DomainError("power closed form: p must be > 1");
  const double theta = critical_theta(p, d);
  if (!(theta > 0.0)) throw DomainError("power closed form: theta(p, d) must be positive");
  return 1.0 / theta + p / ((d - 1.0) * (p - 1.0));
}

std::vector<FirstBound> section5_first_bound(double alpha, std::span<const double> s_list, std::size_t nodes_per_unit) {
  const auto phi = make_section5_young(alpha);
  const auto& params = *phi.section5();
  const double lr = params.log_r();
  std::vector<FirstBound> out;
  for (const double s : s_list) {
    if (!(s >= params.r * (1.0 - 1e-12))) {
      throw DomainError("section5 first bound: s = " + format_double(s) + " is below r");
    }
    FirstBound b;
    b.s = s;
    const double L = std::max(std::log(s), lr);
    // t = e^x: dt / (t^2 Phi^{-1}(1/t^2)) = exp(-x - ln Phi^{-1}(e^{-2x})) dx.
    const auto nodes = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil((L - lr) * nodes_per_unit)) + 1);
    const double integral =
        trapezoid_exp([&](double x) { return -x - params.log_inverse(-2.0 * x); }, lr, L, nodes);
    b.value = std::exp(L - params.log_inverse(2.0 * L)) * integral;
    const double beta = alpha / std::log(L);
    b.intermediate = (1.0 - std::exp((1.0 - beta) * (lr - L))) / (1.0 - beta);
    b.pass = b.value < 2.0;
    out.push_back(b);
  }
  return out;
}

SecondBound section5_second_bound(double alpha, double s, double u_max, std::size_t nodes) {
  const auto params = Section5Params::make(alpha);
  if (!(s >= params.r * (1.0 - 1e-12))) {
    throw DomainError("section5 second bound: s = " + format_double(s) + " is below r");
  }
  if (!(u_max > 0.0)) throw DomainError("section5 second bound: u_max must be positive");
  const double L = std::log(s);
  // t = s e^u, x = ln t.
  auto g = [&](double u) {
    const double x = L + u;
    return L - x - params.log_inverse(-2.0 * x) - params.log_inverse(x + L);
  };
  auto integrate_to = [&](double U) {
    double total = 0.0;
    double lo = 0.0;
    double hi = std::min(60.0, U);
    while (lo < U) {
      total += trapezoid_exp(g, lo, hi, nodes);
      lo = hi;
      hi = std::min(2.0 * hi, U);
    }
    return total;
  };
  const double ln2 = std::log(2.0);
  auto dominating = [&](double x) { return -alpha * x * ln2 / ((std::log(x) - ln2) * std::log(x)); };
  auto dominating_tail = [&](double X) {
    QuadratureConfig q;
    q.u_cap = 1e7;
    q.rel_tol = 1e-6;
    const auto r = integrate_exp_tail([&](double u) { return dominating(X + u); }, q);
    if (r.divergent) {
      throw DivergenceError("tail", "section5 second bound: dominating integrand is not summable (alpha = " +
                                        format_double(alpha) + ")");
    }
    return r.value + r.remainder;
  };

  SecondBound b;
  b.s = s;
  b.u_max = u_max;
  b.value = integrate_to(u_max);
  b.value_doubled = integrate_to(2.0 * u_max);
  b.relative_change = std::abs(b.value_doubled - b.value) / b.value_doubled;
  b.remainder = dominating_tail(L + u_max);
  b.remainder_doubled = dominating_tail(L + 2.0 * u_max);
  if (!(b.remainder_doubled < b.remainder)) {
    throw DivergenceError("tail", "section5 second bound: truncation remainder does not shrink");
  }
  b.converged = b.relative_change < 1e-6;
  return b;
}

}  // namespace bol
