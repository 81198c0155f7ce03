#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bol/grid.hpp"

namespace bol {

/// One truncation layer clamp(sign * f - a_lo, 0, a_hi - a_lo).
struct Molecule {
  GridFunction layer;
  double a_lo = 0.0;
  double a_hi = 0.0;
  /// |{sign * f > a_lo}|.
  double level_measure = 0.0;
  std::size_t level_cells = 0;
  int sign = 1;
};

struct Decomposition {
  std::vector<Molecule> molecules;
  GridFunction source;
  /// max over molecules of ||f_n||_inf^{1/d} ||f_n||_1^{(d-1)/d} / TV(f_n).
  double alpha_observed = 0.0;
};

/// Splits f into positive and negative parts and peels each into layers:
/// a_0 = 0 and a_{n+1} is the smallest cell value v > a_n with
/// 2 |{f > v}| <= |{f > a_n}|, until the level set is empty. Molecules are
/// interleaved +, -, +, - in recursion order.
Decomposition decompose(const GridFunction& f);

/// ||g||_inf^{1/d} ||g||_1^{(d-1)/d} / TV(g); 0 for the zero function.
double molecule_ratio(const GridFunction& g);

struct R1R2Report {
  /// sum of sign * layer equals the source (within recon_tol per cell).
  bool reconstruction_exact = false;
  double max_cell_error = 0.0;
  double l1_relative_error = 0.0;
  double tv_relative_error = 0.0;
  bool l1_additive = false;
  bool tv_additive = false;
  /// |A_{n+1}| <= |A_n| / 2 within each sign class.
  bool halving = false;
  /// Molecules per sign class <= 2 ceil(log2 |A_0| / h^d) + 2.
  bool count_within_bound = false;
  std::size_t positive_count = 0;
  std::size_t negative_count = 0;
  std::size_t positive_bound = 0;
  std::size_t negative_bound = 0;
  bool pass = false;
  /// First molecule involved in a failure, if any.
  std::optional<std::size_t> offending;
  std::string detail;
};

R1R2Report verify_r1_r2(const Decomposition& dec, double rel_tol = 1e-12, double recon_tol = 0.0);

/// max over all axis-aligned boxes and all discretized discs/balls that fit
/// in `shape` of |A|^{(d-1)/d} / TV(chi_A) (for d = 1 the ratio 1 / TV).
double isoperimetric_constant_grid(const std::vector<std::size_t>& shape);

struct R3Report {
  std::vector<double> ratios;
  double alpha_observed = 0.0;
  double c_iso = 0.0;
  /// 2^{2 - 1/d} c_iso unless overridden.
  double budget = 0.0;
  bool pass = false;
};

R3Report verify_r3(const Decomposition& dec, std::optional<double> alpha_budget = std::nullopt);

}  // namespace bol
