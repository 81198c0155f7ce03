#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bol/quadrature.hpp"
#include "bol/young.hpp"

namespace bol {

/// Evaluation options for the two-integral condition
///   C(s) = s^{d-1}/Phi^{-1}(s^d) int_a^s Psi(1/t) dt/t
///        + int_s^inf Psi(1/t) s^{d-1} / (Phi^{-1}(t s^{d-1}) t) dt.
struct ConditionOptions {
  QuadratureConfig quad;
  /// Lower limit a of the first integral (0 by default).
  double head_lower_limit = 0.0;
};

struct ConditionTerms {
  double s = 0.0;
  double first = 0.0;
  double second = 0.0;
  /// first + second, including the extrapolated tail of the second.
  double value = 0.0;
  /// Estimated truncation error of `value`.
  double error = 0.0;
  /// The second integral does not converge; `second` is then the truncated
  /// integral over the final window (a lower bound).
  bool divergent = false;
  /// Truncation point of the second integral in u = ln(t/s).
  double u_end = 0.0;
};

/// All terms of C(s). Throws DivergenceError("head") when the first integral
/// diverges at 0; a divergent second integral is flagged instead of thrown.
ConditionTerms condition_terms(double s, const YoungFunction& phi, const WeightFunction& psi, int d,
                               const ConditionOptions& options = {});

/// C(s). Throws DivergenceError naming "head" or "tail" when C(s) is infinite.
double condition_value(double s, const YoungFunction& phi, const WeightFunction& psi, int d,
                       const ConditionOptions& options = {});

enum class Verdict { bounded, unbounded, inconclusive };
std::string to_string(Verdict v);

struct ConditionReport {
  std::vector<double> s_grid;
  std::vector<double> values;
  std::vector<double> errors;
  std::vector<bool> divergent;
  double D_hat = 0.0;
  double argmax_s = 0.0;
  /// Least-squares log-slope of C over the last decade of the grid.
  double high_slope = 0.0;
  /// Growth log-slope as s decreases over the first decade of the grid.
  double low_slope = 0.0;
  Verdict verdict = Verdict::inconclusive;
  /// First s where the second integral diverged.
  std::optional<double> divergent_s;
  std::string reason;
};

struct SupOptions {
  double s_min = 1e-6;
  double s_max = 1e12;
  std::size_t points = 97;
  ConditionOptions condition;
};

/// C(s) on a log grid, its maximum and a bounded/unbounded verdict: bounded
/// when both end slopes are <= 0.02, unbounded when an end slope is >= 0.05
/// and every local slope over that decade is positive, or when some C(s) is
/// infinite; otherwise inconclusive.
ConditionReport condition_sup(const YoungFunction& phi, const WeightFunction& psi, int d,
                              const SupOptions& options = {});

/// Closed form for Phi(t) = t^p, Psi(t) = t^{-theta(p,d)}:
/// 1/theta + p / ((d-1)(p-1)).
double power_condition_closed_form(double p, int d);

struct FirstBound {
  double s = 0.0;
  /// (s / Phi^{-1}(s^2)) int_r^s dt / (t^2 Phi^{-1}(1/t^2)).
  double value = 0.0;
  /// s^{beta-1} int_r^s t^{-beta} dt with beta = alpha / ln ln s.
  double intermediate = 0.0;
  bool pass = false;
};

/// First condition term of the three-piece example (d = 2, lower limit r),
/// checked against 2. Rejects s < r.
std::vector<FirstBound> section5_first_bound(double alpha, std::span<const double> s_list,
                                             std::size_t nodes_per_unit = 200);

struct SecondBound {
  double s = 0.0;
  /// int_s^{s e^U} s / (t^2 Phi^{-1}(t s) Phi^{-1}(1/t^2)) dt.
  double value = 0.0;
  /// Same with the window doubled.
  double value_doubled = 0.0;
  double relative_change = 0.0;
  double u_max = 0.0;
  /// int_X^inf of the dominating integrand exp(-alpha x ln2 / ((ln x - ln2) ln x)),
  /// X = ln s + U.
  double remainder = 0.0;
  /// The same dominating remainder at the doubled window.
  double remainder_doubled = 0.0;
  /// relative_change < 1e-6.
  bool converged = false;
};

/// Second condition term of the three-piece example (d = 2). Throws
/// DivergenceError("tail") when the dominating remainder does not shrink as
/// the window grows (alpha = 0).
SecondBound section5_second_bound(double alpha, double s, double u_max = 3840.0, std::size_t nodes = 2048);

}  // namespace bol
