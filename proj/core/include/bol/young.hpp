#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace bol {

enum class YoungKind { power, linear, section5, table };

/// Parameters of the three-piece example whose inverse is
///   t * exp( alpha * ln(1/sqrt t) / ln ln(1/sqrt t))   on [0, 1/r)
///   p_lin * t + q_lin                                 on [1/r, r)
///   t * exp(-alpha * ln(sqrt t)   / ln ln(sqrt t))    on [r, inf)
/// with r = exp(2 e^2) and p_lin, q_lin chosen for continuity.
struct Section5Params {
  double alpha = 0.0;
  double r = 0.0;
  double p_lin = 0.0;
  double q_lin = 0.0;
  /// Value of the inverse at 1/r. The middle piece is evaluated as
  /// lower + p_lin (t - 1/r); p_lin t + q_lin cancels badly near 1/r.
  double lower = 0.0;

  /// alpha must lie in [0, e^-2). alpha = 0 is accepted here (it degenerates
  /// the inverse to the identity) so callers can probe the limit; the Young
  /// function factory itself rejects it.
  static Section5Params make(double alpha);

  double log_r() const;
  /// ln of the inverse at e^x, valid over the whole real line.
  double log_inverse(double x) const;
};

/// A Young function Phi together with its inverse. Immutable value type;
/// safe to share between threads.
class YoungFunction {
 public:
  YoungKind kind() const noexcept;

  /// Phi(t), t >= 0.
  double operator()(double t) const;
  /// Phi^{-1}(s), s >= 0.
  double inverse(double s) const;
  /// ln Phi^{-1}(e^x). Stays finite where e^x itself would overflow.
  double log_inverse(double x) const;

  /// Asymptotic log-log slopes of Phi^{-1} at 0 and at infinity.
  double inverse_exponent_at_zero() const;
  double inverse_exponent_at_infinity() const;

  /// Asymptotic order of Phi near infinity when known.
  std::optional<double> growth_exponent_hint() const;

  /// Three-piece parameters, or nullptr for other kinds.
  const Section5Params* section5() const noexcept;
  /// Power exponent for the power kind.
  std::optional<double> power_exponent() const noexcept;

  /// Round-trippable spec string, e.g. "power:p=1.3".
  std::string describe() const;

  friend YoungFunction make_power_young(double p);
  friend YoungFunction make_linear_young();
  friend YoungFunction make_section5_young(double alpha);
  friend YoungFunction make_table_young(std::vector<double> t, std::vector<double> phi,
                                        std::string source);

 private:
  struct Power {
    double p;
  };
  struct Linear {};
  struct Table {
    std::vector<double> log_t;
    std::vector<double> log_phi;
    std::string source;
  };
  using Repr = std::variant<Power, Linear, Section5Params, Table>;

  explicit YoungFunction(Repr repr) : repr_(std::move(repr)) {}

  double invert_by_bisection(double t) const;

  Repr repr_;
};

/// Phi(t) = t^p, p > 1.
YoungFunction make_power_young(double p);
/// Phi(t) = t. Not a Young function in the strict sense (not superlinear);
/// its Luxemburg norm is the L1 norm.
YoungFunction make_linear_young();
/// The three-piece example above; Phi is obtained by bisection on Phi^{-1}.
YoungFunction make_section5_young(double alpha);
/// Knot table (t_i, Phi(t_i)), both columns strictly increasing and positive;
/// interpolated linearly in log-log coordinates and extrapolated with the end
/// slopes.
YoungFunction make_table_young(std::vector<double> t, std::vector<double> phi,
                               std::string source = "inline");
/// Reads a two-column CSV (t, Phi(t)).
YoungFunction load_table_young(const std::filesystem::path& path);

enum class WeightKind { power, derived };

/// Continuous non-negative weight Psi. The exponents describe Psi(1/t) ~
/// t^sigma as t -> 0 (zero_exponent) and as t -> infinity
/// (infinity_exponent).
class WeightFunction {
 public:
  WeightKind kind() const noexcept { return kind_; }

  double operator()(double t) const;
  /// ln Psi(e^x).
  double log_eval(double x) const;

  double zero_exponent() const noexcept { return zero_exponent_; }
  double infinity_exponent() const noexcept { return infinity_exponent_; }
  /// Smallest admissible argument (0 when Psi extends continuously to 0).
  double t_min() const noexcept { return t_min_; }

  std::string describe() const;

  friend WeightFunction make_power_weight(double theta);
  friend WeightFunction make_derived_weight(const YoungFunction& phi, double t_min);

 private:
  WeightFunction() = default;

  WeightKind kind_ = WeightKind::power;
  double theta_ = 0.0;
  std::optional<YoungFunction> phi_;
  double zero_exponent_ = 0.0;
  double infinity_exponent_ = 0.0;
  double t_min_ = 0.0;
};

/// Psi(t) = t^{-theta}.
WeightFunction make_power_weight(double theta);
/// Psi(t) = t / Phi^{-1}(t^2).
WeightFunction make_derived_weight(const YoungFunction& phi, double t_min = 0.0);
/// make_derived_weight for the three-piece function, described by its spec
/// string so reports round-trip as "section5:alpha=...".
WeightFunction make_section5_weight(const YoungFunction& phi, double t_min = 0.0);

/// Parses the spec strings produced by YoungFunction::describe():
/// "power:p=1.3", "linear", "section5:alpha=0.1", "table:file=PATH".
/// Throws DomainError for anything else.
YoungFunction parse_young_spec(std::string_view spec);

/// Parses "powerweight:theta=0.5385", "section5:alpha=0.1" (the weight
/// derived from the three-piece function) and "fromphi[PHI-SPEC]".
WeightFunction parse_weight_spec(std::string_view spec);

/// theta(p, d) = d (1/p + 1/d - 1).
double critical_theta(double p, int d);

struct AxiomCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<AxiomCheck> checks;

  bool all_pass() const;
  /// Check by name; throws DomainError if absent.
  const AxiomCheck& at(const std::string& name) const;
};

/// Checks the Young axioms on a sorted positive grid: zero_at_zero,
/// monotone, midpoint_convex, superlinear (t/Phi(t) decreasing over the grid
/// tail), sublinear_at_zero (Phi(t)/t decreasing toward 0 over the grid
/// head), inverse_roundtrip, subhomogeneous (Phi(a t) <= a Phi(t), a<=1) and
/// inverse_concave (Phi^{-1}(a x) <= a Phi^{-1}(x), a>=1).
ValidationReport validate_young(const YoungFunction& phi, std::span<const double> grid);

/// Checks non-negativity on a log grid over [t_lo, t_hi] and that declared
/// exponents match finite-difference log-slopes of Psi(1/t) at t_lo and t_hi
/// within 0.05.
ValidationReport validate_weight(const WeightFunction& psi, double t_lo, double t_hi);

/// n points log-spaced over [lo, hi], endpoints included.
std::vector<double> log_grid(double lo, double hi, std::size_t n);

}  // namespace bol
