#include "bol/young.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "bol/errors.hpp"
#include "format.hpp"

namespace bol {

namespace {

constexpr double kInverseTolerance = 1e-12;
constexpr int kMaxBisection = 200;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// l / ln l, the exponent shape used by every branch of the example.
double slow_log(double l) { return l / std::log(l); }

double table_lookup(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  const std::size_t n = xs.size();
  std::size_t seg;
  if (x <= xs.front()) {
    seg = 0;
  } else if (x >= xs.back()) {
    seg = n - 2;
  } else {
    seg = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin()) - 1;
  }
  const double slope = (ys[seg + 1] - ys[seg]) / (xs[seg + 1] - xs[seg]);
  return ys[seg] + slope * (x - xs[seg]);
}

double end_slope(const std::vector<double>& xs, const std::vector<double>& ys, bool front) {
  const std::size_t n = xs.size();
  return front ? (ys[1] - ys[0]) / (xs[1] - xs[0])
               : (ys[n - 1] - ys[n - 2]) / (xs[n - 1] - xs[n - 2]);
}

}  // namespace

// --- Section5Params --------------------------------------------------------

Section5Params Section5Params::make(double alpha) {
  const double alpha_max = std::exp(-2.0);
  if (!(alpha >= 0.0) || !(alpha < alpha_max)) {
    throw DomainError("section5: alpha must lie in [0, e^-2), got " + format_double(alpha));
  }
  Section5Params s;
  s.alpha = alpha;
  s.r = std::exp(2.0 * std::exp(2.0));
  const double half_log_r = 0.5 * std::log(s.r);
  const double shape = slow_log(half_log_r);
  const double upper = s.r * std::exp(-alpha * shape);
  const double lower = std::exp(alpha * shape) / s.r;
  s.p_lin = (upper - lower) / (s.r - 1.0 / s.r);
  s.q_lin = upper - s.p_lin * s.r;
  s.lower = lower;
  return s;
}

double Section5Params::log_r() const { return std::log(r); }

double Section5Params::log_inverse(double x) const {
  const double lr = log_r();
  if (x < -lr) return x + alpha * slow_log(-0.5 * x);
  if (x < lr) return std::log(lower + p_lin * (std::exp(x) - 1.0 / r));
  return x - alpha * slow_log(0.5 * x);
}

// --- YoungFunction ---------------------------------------------------------

YoungKind YoungFunction::kind() const noexcept {
  return std::visit(overloaded{[](const Power&) { return YoungKind::power; },
                               [](const Linear&) { return YoungKind::linear; },
                               [](const Section5Params&) { return YoungKind::section5; },
                               [](const Table&) { return YoungKind::table; }},
                    repr_);
}

double YoungFunction::operator()(double t) const {
  if (!(t >= 0.0)) throw DomainError("Young function evaluated at negative or NaN argument");
  if (t == 0.0) return 0.0;
  return std::visit(overloaded{[&](const Power& p) { return std::pow(t, p.p); },
                               [&](const Linear&) { return t; },
                               [&](const Section5Params&) { return invert_by_bisection(t); },
                               [&](const Table& tab) {
                                 return std::exp(table_lookup(tab.log_t, tab.log_phi, std::log(t)));
                               }},
                    repr_);
}

double YoungFunction::inverse(double s) const {
  if (!(s >= 0.0)) throw DomainError("inverse Young function evaluated at negative or NaN argument");
  if (s == 0.0) return 0.0;
  return std::visit(overloaded{[&](const Power& p) { return std::pow(s, 1.0 / p.p); },
                               [&](const Linear&) { return s; },
                               [&](const Section5Params& q) {
                                 if (s < 1.0 / q.r) return s * std::exp(q.alpha * slow_log(-0.5 * std::log(s)));
                                 if (s < q.r) return q.lower + q.p_lin * (s - 1.0 / q.r);
                                 return s * std::exp(-q.alpha * slow_log(0.5 * std::log(s)));
                               },
                               [&](const Table& tab) {
                                 return std::exp(table_lookup(tab.log_phi, tab.log_t, std::log(s)));
                               }},
                    repr_);
}

double YoungFunction::log_inverse(double x) const {
  return std::visit(overloaded{[&](const Power& p) { return x / p.p; },
                               [&](const Linear&) { return x; },
                               [&](const Section5Params& q) { return q.log_inverse(x); },
                               [&](const Table& tab) { return table_lookup(tab.log_phi, tab.log_t, x); }},
                    repr_);
}

double YoungFunction::inverse_exponent_at_zero() const {
  return std::visit(overloaded{[](const Power& p) { return 1.0 / p.p; },
                               [](const Linear&) { return 1.0; },
                               [](const Section5Params&) { return 1.0; },
                               [](const Table& tab) { return 1.0 / end_slope(tab.log_t, tab.log_phi, true); }},
                    repr_);
}

double YoungFunction::inverse_exponent_at_infinity() const {
  return std::visit(overloaded{[](const Power& p) { return 1.0 / p.p; },
                               [](const Linear&) { return 1.0; },
                               [](const Section5Params&) { return 1.0; },
                               [](const Table& tab) { return 1.0 / end_slope(tab.log_t, tab.log_phi, false); }},
                    repr_);
}

std::optional<double> YoungFunction::growth_exponent_hint() const {
  return std::visit(overloaded{[](const Power& p) -> std::optional<double> { return p.p; },
                               [](const Linear&) -> std::optional<double> { return 1.0; },
                               [](const Section5Params&) -> std::optional<double> { return 1.0; },
                               [](const Table& tab) -> std::optional<double> {
                                 return end_slope(tab.log_t, tab.log_phi, false);
                               }},
                    repr_);
}

const Section5Params* YoungFunction::section5() const noexcept {
  return std::get_if<Section5Params>(&repr_);
}

std::optional<double> YoungFunction::power_exponent() const noexcept {
  if (const auto* p = std::get_if<Power>(&repr_)) return p->p;
  return std::nullopt;
}

std::string YoungFunction::describe() const {
  return std::visit(overloaded{[](const Power& p) { return "power:p=" + format_double(p.p); },
                               [](const Linear&) { return std::string("linear"); },
                               [](const Section5Params& q) { return "section5:alpha=" + format_double(q.alpha); },
                               [](const Table& tab) { return "table:file=" + tab.source; }},
                    repr_);
}

// Phi(t) is the y with Phi^{-1}(y) = t. Phi^{-1} is strictly increasing, so a
// doubling bracket followed by bisection always converges.
double YoungFunction::invert_by_bisection(double t) const {
  double lo = t;
  double hi = t;
  if (inverse(t) < t) {
    while (inverse(hi) < t) {
      lo = hi;
      hi *= 2.0;
      if (!std::isfinite(hi)) throw DomainError("Young function value overflows at t=" + format_double(t));
    }
  } else {
    while (inverse(lo) > t) {
      hi = lo;
      lo *= 0.5;
      if (lo == 0.0) return 0.0;
    }
  }
  for (int it = 0; it < kMaxBisection; ++it) {
    if (hi - lo <= kInverseTolerance * hi) return 0.5 * (lo + hi);
    const double mid = 0.5 * (lo + hi);
    if (inverse(mid) < t) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  throw ConvergenceError("Young function inversion did not converge at t=" + format_double(t));
}

YoungFunction make_power_young(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw DomainError("power Young function needs p > 1, got " + format_double(p));
  }
  return YoungFunction(YoungFunction::Power{p});
}

YoungFunction make_linear_young() { return YoungFunction(YoungFunction::Linear{}); }

YoungFunction make_section5_young(double alpha) {
  if (!(alpha > 0.0)) throw DomainError("section5: alpha must be positive, got " + format_double(alpha));
  return YoungFunction(Section5Params::make(alpha));
}

YoungFunction make_table_young(std::vector<double> t, std::vector<double> phi, std::string source) {
  if (t.size() != phi.size() || t.size() < 2) {
    throw DomainError("table Young function needs at least two (t, phi) knots");
  }
  YoungFunction::Table tab;
  tab.source = std::move(source);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 0.0) || !(phi[i] > 0.0) || !std::isfinite(t[i]) || !std::isfinite(phi[i])) {
      throw DomainError("table Young function knots must be positive and finite");
    }
    if (i > 0 && !(t[i] > t[i - 1] && phi[i] > phi[i - 1])) {
      throw DomainError("table Young function columns must be strictly increasing");
    }
    tab.log_t.push_back(std::log(t[i]));
    tab.log_phi.push_back(std::log(phi[i]));
  }
  return YoungFunction(std::move(tab));
}

YoungFunction load_table_young(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open Young table " + path.string());
  std::vector<double> t, phi;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double a, b;
    if (!(row >> a >> b)) {
      if (t.empty()) continue;  // header line
      throw DomainError("malformed row in Young table " + path.string() + ": " + line);
    }
    t.push_back(a);
    phi.push_back(b);
  }
  return make_table_young(std::move(t), std::move(phi), path.string());
}

// --- WeightFunction --------------------------------------------------------

double WeightFunction::operator()(double t) const {
  if (!(t >= 0.0)) throw DomainError("weight evaluated at negative or NaN argument");
  if (kind_ == WeightKind::power) {
    if (t == 0.0) {
      if (theta_ > 0.0) throw DomainError("power weight t^-theta is unbounded at 0");
      return theta_ == 0.0 ? 1.0 : 0.0;
    }
    return std::pow(t, -theta_);
  }
  if (t < t_min_) throw DomainError("weight evaluated below its domain start t_min");
  if (t == 0.0) {
    const double order = 1.0 - 2.0 * phi_->inverse_exponent_at_zero();
    if (order > 0.0) return 0.0;
    if (order == 0.0) return (*this)(std::numeric_limits<double>::min());
    throw DomainError("derived weight t/Phi^-1(t^2) has no finite limit at 0");
  }
  const double denom = phi_->inverse(t * t);
  if (!(denom > 0.0)) throw DomainError("derived weight: Phi^-1(t^2) vanishes at t=" + format_double(t));
  return t / denom;
}

double WeightFunction::log_eval(double x) const {
  if (kind_ == WeightKind::power) return -theta_ * x;
  return x - phi_->log_inverse(2.0 * x);
}

std::string WeightFunction::describe() const {
  if (kind_ == WeightKind::power) return "powerweight:theta=" + format_double(theta_);
  if (phi_->kind() == YoungKind::section5) return phi_->describe();
  return "fromphi[" + phi_->describe() + "]";
}

WeightFunction make_power_weight(double theta) {
  if (!std::isfinite(theta)) throw DomainError("power weight needs a finite theta");
  WeightFunction w;
  w.kind_ = WeightKind::power;
  w.theta_ = theta;
  w.zero_exponent_ = theta;
  w.infinity_exponent_ = theta;
  return w;
}

WeightFunction make_derived_weight(const YoungFunction& phi, double t_min) {
  if (!(t_min >= 0.0)) throw DomainError("derived weight needs t_min >= 0");
  WeightFunction w;
  w.kind_ = WeightKind::derived;
  w.phi_ = phi;
  w.t_min_ = t_min;
  // Psi(1/t) = (1/t) / Phi^{-1}(1/t^2).
  w.zero_exponent_ = 2.0 * phi.inverse_exponent_at_infinity() - 1.0;
  w.infinity_exponent_ = 2.0 * phi.inverse_exponent_at_zero() - 1.0;
  return w;
}

WeightFunction make_section5_weight(const YoungFunction& phi, double t_min) {
  return make_derived_weight(phi, t_min);
}

// --- spec strings ------------------------------------------------------------

namespace {

// Value of "key=NUMBER" after the "kind:" prefix.
double spec_number(std::string_view spec, std::string_view body, std::string_view key) {
  if (body.substr(0, key.size()) != key || body.size() <= key.size() || body[key.size()] != '=') {
    throw DomainError("malformed function spec '" + std::string(spec) + "': expected " + std::string(key) + "=VALUE");
  }
  const auto text = body.substr(key.size() + 1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw DomainError("malformed function spec '" + std::string(spec) + "': bad number '" + std::string(text) + "'");
  }
  return v;
}

std::pair<std::string_view, std::string_view> split_kind(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) return {spec, {}};
  return {spec.substr(0, colon), spec.substr(colon + 1)};
}

}  // namespace

YoungFunction parse_young_spec(std::string_view spec) {
  const auto [kind, body] = split_kind(spec);
  if (kind == "power") return make_power_young(spec_number(spec, body, "p"));
  if (kind == "linear" && body.empty()) return make_linear_young();
  if (kind == "section5") return make_section5_young(spec_number(spec, body, "alpha"));
  if (kind == "table") {
    if (body.substr(0, 5) != "file=" || body.size() == 5) {
      throw DomainError("malformed function spec '" + std::string(spec) + "': expected file=PATH");
    }
    return load_table_young(std::filesystem::path(std::string(body.substr(5))));
  }
  throw DomainError("unknown Young function spec '" + std::string(spec) + "'");
}

WeightFunction parse_weight_spec(std::string_view spec) {
  const auto [kind, body] = split_kind(spec);
  if (kind == "powerweight") return make_power_weight(spec_number(spec, body, "theta"));
  if (kind == "section5") return make_section5_weight(make_section5_young(spec_number(spec, body, "alpha")));
  if (spec.substr(0, 8) == "fromphi[" && spec.back() == ']') {
    return make_derived_weight(parse_young_spec(spec.substr(8, spec.size() - 9)));
  }
  throw DomainError("unknown weight spec '" + std::string(spec) + "'");
}

double critical_theta(double p, int d) {
  if (d < 1) throw DomainError("dimension must be >= 1");
  return d * (1.0 / p + 1.0 / d - 1.0);
}

// --- validation ------------------------------------------------------------

bool ValidationReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const AxiomCheck& c) { return c.pass; });
}

const AxiomCheck& ValidationReport::at(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw DomainError("no validation check named " + name);
}

ValidationReport validate_young(const YoungFunction& phi, std::span<const double> grid) {
  if (grid.empty()) throw DomainError("validate_young: empty sample grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0)) throw DomainError("validate_young: grid must be strictly positive");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw DomainError("validate_young: grid must be sorted");
  }
  constexpr double slack = 1e-12;
  ValidationReport report;
  auto add = [&](std::string name, bool pass, std::string detail = {}) {
    report.checks.push_back({std::move(name), pass, std::move(detail)});
  };

  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = phi(grid[i]);

  add("zero_at_zero", phi(0.0) == 0.0);

  {
    bool ok = true;
    std::string where;
    for (std::size_t i = 1; i < grid.size() && ok; ++i) {
      if (!(values[i] > values[i - 1])) {
        ok = false;
        where = "at t=" + format_double(grid[i]);
      }
    }
    add("monotone", ok, where);
  }
  {
    bool ok = true;
    std::string where;
    for (std::size_t i = 1; i < grid.size() && ok; ++i) {
      const double a = grid[i - 1], b = grid[i];
      if (phi(0.5 * (a + b)) > 0.5 * (values[i - 1] + values[i]) * (1.0 + slack)) {
        ok = false;
        where = "on [" + format_double(a) + ", " + format_double(b) + "]";
      }
    }
    add("midpoint_convex", ok, where);
  }

  const std::size_t window = std::max<std::size_t>(3, grid.size() / 4);
  const std::size_t n = grid.size();
  {
    bool ok = n >= 2;
    const std::size_t start = n > window ? n - window : 0;
    for (std::size_t i = start + 1; i < n && ok; ++i) {
      ok = grid[i] / values[i] < (grid[i - 1] / values[i - 1]) * (1.0 - slack);
    }
    add("superlinear", ok, "t/Phi(t) strictly decreasing over the grid tail");
  }
  {
    bool ok = n >= 2;
    const std::size_t stop = std::min(n, window);
    for (std::size_t i = 1; i < stop && ok; ++i) {
      ok = values[i - 1] / grid[i - 1] < (values[i] / grid[i]) * (1.0 - slack);
    }
    add("sublinear_at_zero", ok, "Phi(t)/t strictly decreasing toward the grid head");
  }
  {
    bool ok = true;
    std::string where;
    for (std::size_t i = 0; i < n && ok; ++i) {
      const double t = grid[i];
      const double back = phi.inverse(values[i]);
      const double forth = phi(phi.inverse(t));
      if (std::abs(back - t) > 1e-8 * t || std::abs(forth - t) > 1e-8 * t) {
        ok = false;
        where = "at t=" + format_double(t);
      }
    }
    add("inverse_roundtrip", ok, where);
  }
  {
    bool ok = true;
    for (double a : {0.1, 0.5, 0.9})
      for (std::size_t i = 0; i < n && ok; ++i)
        ok = phi(a * grid[i]) <= a * values[i] * (1.0 + slack);
    add("subhomogeneous", ok, "Phi(a t) <= a Phi(t) for a in {0.1, 0.5, 0.9}");
  }
  {
    bool ok = true;
    for (double a : {2.0, 10.0, 100.0})
      for (std::size_t i = 0; i < n && ok; ++i)
        ok = phi.inverse(a * grid[i]) <= a * phi.inverse(grid[i]) * (1.0 + slack);
    add("inverse_concave", ok, "Phi^-1(a x) <= a Phi^-1(x) for a in {2, 10, 100}");
  }
  return report;
}

ValidationReport validate_weight(const WeightFunction& psi, double t_lo, double t_hi) {
  if (!(t_lo > 0.0) || !(t_hi > t_lo)) throw DomainError("validate_weight: need 0 < t_lo < t_hi");
  ValidationReport report;
  {
    bool ok = true;
    for (double t : log_grid(t_lo, t_hi, 64)) {
      const double v = psi(t);
      ok = ok && std::isfinite(v) && v >= 0.0;
    }
    report.checks.push_back({"nonnegative", ok, {}});
  }
  // slope of ln Psi(1/t) against ln t.
  auto slope = [&](double t) {
    constexpr double delta = 1e-2;
    const double x = std::log(t);
    return (psi.log_eval(-(x + delta)) - psi.log_eval(-(x - delta))) / (2.0 * delta);
  };
  const double s0 = slope(t_lo);
  const double s1 = slope(t_hi);
  report.checks.push_back({"zero_exponent", std::abs(s0 - psi.zero_exponent()) <= 0.05,
                           "measured " + format_double(s0) + " declared " + format_double(psi.zero_exponent())});
  report.checks.push_back({"infinity_exponent", std::abs(s1 - psi.infinity_exponent()) <= 0.05,
                           "measured " + format_double(s1) + " declared " +
                               format_double(psi.infinity_exponent())});
  return report;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi >= lo)) throw DomainError("log_grid: need 0 < lo <= hi");
  if (n == 0) return {};
  if (n == 1) return {lo};
  std::vector<double> out(n);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(a + (b - a) * static_cast<double>(i) / (n - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace bol
