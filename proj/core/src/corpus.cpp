#include "bol/corpus.hpp"

#include <cmath>
#include <random>

#include "bol/errors.hpp"

namespace bol {

namespace {

// Bounded draws written out by hand so the corpus does not depend on the
// standard library's distribution implementations.
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) { return lo + rng() % (hi - lo + 1); }

double draw_unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

std::vector<GridFunction> random_piecewise_constant_corpus(const CorpusOptions& options) {
  if (options.min_extent < 2 || options.max_extent < options.min_extent) {
    throw DomainError("corpus: need 2 <= min_extent <= max_extent");
  }
  if (options.max_rectangles == 0) throw DomainError("corpus: max_rectangles must be positive");
  std::mt19937_64 rng(options.seed);
  std::vector<GridFunction> out;
  out.reserve(options.count);
  while (out.size() < options.count) {
    const std::size_t nx = draw(rng, options.min_extent, options.max_extent);
    const std::size_t ny = draw(rng, options.min_extent, options.max_extent);
    std::vector<double> values(nx * ny, 0.0);
    const std::size_t rects = draw(rng, 1, options.max_rectangles);
    for (std::size_t k = 0; k < rects; ++k) {
      const std::size_t x0 = draw(rng, 0, nx - 1), x1 = draw(rng, 0, nx - 1);
      const std::size_t y0 = draw(rng, 0, ny - 1), y1 = draw(rng, 0, ny - 1);
      double height = options.dyadic ? static_cast<double>(draw(rng, 1, 64)) / 16.0 : 4.0 * (1.0 - draw_unit(rng));
      if (options.allow_negative && draw(rng, 0, 9) < 3) height = -height;
      for (std::size_t i = std::min(x0, x1); i <= std::max(x0, x1); ++i) {
        for (std::size_t j = std::min(y0, y1); j <= std::max(y0, y1); ++j) values[i * ny + j] += height;
      }
    }
    GridFunction f({nx, ny}, options.spacing, {0.0, 0.0}, std::move(values));
    if (f.support_cells() == 0) continue;  // rectangles cancelled out exactly
    out.push_back(std::move(f));
  }
  return out;
}

GridFunction staircase_1d(double h) {
  if (!(h > 0.0) || h > 1.0) throw DomainError("staircase: need 0 < h <= 1");
  const auto n = static_cast<std::size_t>(std::llround(2.0 / h));
  return GridFunction::sample({n + 2}, h, {-h}, [](std::span<const double> x) {
    if (x[0] > 0.0 && x[0] <= 1.0) return 3.0;
    if (x[0] > 1.0 && x[0] <= 2.0) return 2.0;
    return 0.0;
  });
}

GridFunction square_indicator(double side, double h) {
  if (!(side > 0.0) || !(h > 0.0)) throw DomainError("square: side and h must be positive");
  const auto n = static_cast<std::ptrdiff_t>(std::llround(side / h));
  if (n < 1) throw DomainError("square: side is below one cell");
  const std::ptrdiff_t lo[] = {1, 1};
  const std::ptrdiff_t hi[] = {n + 1, n + 1};
  auto g = box_indicator({static_cast<std::size_t>(n + 2), static_cast<std::size_t>(n + 2)}, h, lo, hi);
  return GridFunction(g.shape(), h, {-h, -h}, std::vector<double>(g.values().begin(), g.values().end()));
}

}  // namespace bol
