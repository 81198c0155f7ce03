#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace bol {

/// Integer lattice vector (in cells).
using Shift = std::vector<std::ptrdiff_t>;

/// A finitely supported function sampled on a uniform d-dimensional grid of
/// cubic cells. Values are stored row-major (last axis fastest); the
/// function is zero outside the stored box. `origin` is the lower corner of
/// cell (0, ..., 0).
class GridFunction {
 public:
  GridFunction(std::vector<std::size_t> shape, double spacing, std::vector<double> origin,
               std::vector<double> values);

  static GridFunction zeros(std::vector<std::size_t> shape, double spacing,
                            std::vector<double> origin = {});
  /// Samples `fn` at cell centers.
  static GridFunction sample(std::vector<std::size_t> shape, double spacing, std::vector<double> origin,
                             const std::function<double(std::span<const double>)>& fn);

  int dim() const noexcept { return static_cast<int>(shape_.size()); }
  const std::vector<std::size_t>& shape() const noexcept { return shape_; }
  double spacing() const noexcept { return spacing_; }
  const std::vector<double>& origin() const noexcept { return origin_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double cell_volume() const noexcept;
  std::vector<std::size_t> strides() const;

  /// Value at a cell index; zero outside the box.
  double at(std::span<const std::ptrdiff_t> index) const;
  std::vector<double> cell_center(std::span<const std::ptrdiff_t> index) const;

  GridFunction scaled(double c) const;
  GridFunction with_values(std::vector<double> values) const;
  /// g(x) = f(x + k h). The box grows to cover both supports.
  GridFunction shifted(std::span<const std::ptrdiff_t> k) const;
  /// Restricts (or zero-extends) to the box [lo, lo + shape) in this
  /// function's index frame.
  GridFunction cropped(std::span<const std::ptrdiff_t> lo, std::span<const std::size_t> shape) const;

  /// Bounding box of the nonzero cells in this function's index frame,
  /// half-open. `empty` when the function vanishes identically.
  struct Box {
    std::vector<std::ptrdiff_t> lo;
    std::vector<std::ptrdiff_t> hi;
    bool empty = true;
    std::vector<std::size_t> extents() const;
  };
  Box support() const;
  /// Euclidean diagonal of the support box (0 for the zero function).
  double support_diameter() const;
  /// Number of nonzero cells.
  std::size_t support_cells() const;

 private:
  std::vector<std::size_t> shape_;
  double spacing_;
  std::vector<double> origin_;
  std::vector<double> values_;
};

/// a - b on the union of both boxes. Both functions must share spacing and
/// lattice.
GridFunction difference(const GridFunction& a, const GridFunction& b);
GridFunction sum(const GridFunction& a, const GridFunction& b);

/// (sum |v|^p h^d)^{1/p}; p = infinity gives max |v|. p < 1 is rejected.
double lp_norm(const GridFunction& f, double p);

/// Anisotropic discrete total variation: for every axis, the sum of |jumps|
/// between neighbouring cells (zero padding at the box boundary) times
/// h^{d-1}. Equals the sum over thresholds of the l1 perimeter of the level
/// sets, so the coarea identity holds exactly.
double total_variation(const GridFunction& f);

struct NormBundle {
  double l1 = 0.0;
  double linf = 0.0;
  double p = 2.0;
  double lp = 0.0;
  double tv = 0.0;
  double bv() const noexcept { return l1 + tv; }
};

NormBundle norms(const GridFunction& f, double p = 2.0);

/// Volume of the unit ball in R^d.
double unit_ball_volume(int d);

struct BallIndicator {
  GridFunction function;
  double radius = 0.0;
  /// V_d r^d.
  double analytic_volume = 0.0;
  /// d V_d r^{d-1} (Euclidean perimeter).
  double analytic_perimeter = 0.0;
};

/// Indicator of the closed ball B(0, radius): a cell is 1 iff its center lies
/// in the ball. Rejects radius/h > 1e4.
BallIndicator ball_indicator(int d, double radius, double h);

/// Indicator of the cells [lo, hi) of a grid with the given shape.
GridFunction box_indicator(std::vector<std::size_t> shape, double h, std::span<const std::ptrdiff_t> lo,
                           std::span<const std::ptrdiff_t> hi);

/// Splits every cell into factor^d children carrying the parent value.
GridFunction upsample(const GridFunction& f, std::size_t factor);

}  // namespace bol
