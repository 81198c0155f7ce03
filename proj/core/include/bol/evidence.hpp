#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bol/besov.hpp"
#include "bol/condition.hpp"
#include "bol/grid.hpp"
#include "bol/young.hpp"

namespace bol {

/// v as a JSON number, or the strings "inf", "-inf", "nan" when v is not
/// finite (JSON has no literal for those).
nlohmann::json json_number(double v);

/// Outcome of one experiment: what was checked, on what, with which budget.
struct ExperimentRecord {
  std::string name;
  /// The inequality being instantiated, as a formula.
  std::string inequality;
  nlohmann::json inputs = nlohmann::json::object();
  nlohmann::json measured = nlohmann::json::object();
  bool pass = false;
  double budget = 0.0;
  /// Where the budget comes from.
  std::string budget_source;
  std::vector<std::string> warnings;

  nlohmann::json to_json() const;
};

struct SufficiencyOptions {
  BesovConfig besov;
  SupOptions sup;
  /// Multiples of s_m where the large-t estimate is sampled.
  std::vector<double> big_factors{1.0, 2.0, 10.0};
  /// Fractions of s_m where the small-t estimate is sampled.
  std::vector<double> small_factors{0.1, 0.5, 1.0};
  /// Relative slack for quadrature-based comparisons.
  double tolerance = 0.05;
};

/// Decomposes f into molecules and checks, per molecule f_m with
/// s_m = (2||f_m||_inf / TV(f_m))^{1/(d-1)}:
///   large t:  omega(f_m, 1/t) <= 2M / Phi^{-1}(2tM / TV(f_m))            (t >= s_m)
///   small t:  omega(f_m, 1/t) <= (2a)^{d/(d-1)} 2M / Phi^{-1}(s_m^d)     (t <= s_m)
///   seminorm(f_m) <= ((2a)^{d/(d-1)} T1(s_m) + T2(s_m)) TV(f_m)
/// with a = max(1, observed molecule constant) and T1, T2 the two condition
/// terms, then the assembled seminorm(f) <= (2a)^{d/(d-1)} D TV(f). In d = 1
/// the per-molecule seminorm is compared with 2a K1 TV(f_m),
/// K1 = int_0^1 Psi dt/t / Phi^{-1}(1) + int_1^inf Psi(t) / Phi^{-1}(1/t) dt/t.
ExperimentRecord sufficiency_molecule_estimates(const GridFunction& f, const YoungFunction& phi,
                                                const WeightFunction& psi, const SufficiencyOptions& options = {});

enum class SymdiffModel { lemma6, exact };

struct NecessityOptions {
  SymdiffModel symdiff = SymdiffModel::lemma6;
  QuadratureConfig quad;
  /// Also evaluate the Besov norm of ball indicators on grids of this
  /// spacing (0 disables the grid cross-check).
  double grid_h = 0.0;
  BesovConfig besov;
  /// Accepted relative spread of the ratios for a bounded pair.
  double variation_budget = 0.10;
  /// Required ratio growth from the largest to the smallest radius for an
  /// unbounded pair.
  double growth_budget = 4.0;
  /// Verdict of the condition for the pair; inconclusive means "run
  /// condition_sup to find out".
  Verdict expected = Verdict::inconclusive;
  SupOptions sup;
};

/// Ball indicators chi_{B(0,r)}: BV norm V_d r^d + d V_d r^{d-1} against the
/// Besov-Orlicz norm ||chi||_Phi + int Psi(t) omega(chi, t) dt/t, where omega
/// is bounded below by the Luxemburg norm 1/Phi^{-1}(1/|Delta|) of the
/// symmetric difference Delta of the ball and its shift (|Delta| = 2 V_d r^d
/// for shifts longer than 2r, otherwise the lower bound V_d r^{d-1} c/2 or
/// the exact value for d <= 3).
ExperimentRecord necessity_ball_experiment(const YoungFunction& phi, const WeightFunction& psi, int d,
                                           const std::vector<double>& radii, const NecessityOptions& options = {});

/// Exact volume of B(0,r) xor B(x,r) with |x| = c, for d in {1, 2, 3}.
double symmetric_difference_volume(int d, double r, double c);

struct Lemma6Options {
  std::uint64_t samples = 10'000'000;
  std::uint64_t seed = 0x5EED;
};

/// |B(0,r) xor B(x,r)| >= V_d r^{d-1} a for |x| = 2a, 0 <= a < r. Exact for
/// d <= 3, Monte Carlo (with standard error) for d >= 2.
ExperimentRecord lemma6_check(int d, double r, const std::vector<double>& offsets, const Lemma6Options& options = {});

/// A function family resampled at a given spacing.
struct ShapeSampler {
  std::string name;
  std::function<GridFunction(double h)> sample;
};

/// max ||f||_{d/(d-1)} / TV(f) over the corpus; each item is refined by
/// splitting cells in two and the ratio must move by less than 5%.
ExperimentRecord sobolev_check(const std::vector<GridFunction>& corpus, int d);
/// Same with items resampled at h and h/2.
ExperimentRecord sobolev_check(const std::vector<ShapeSampler>& shapes, int d, double h);

}  // namespace bol
