#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bol/grid.hpp"

namespace bol {

struct CorpusOptions {
  std::size_t count = 100;
  std::uint64_t seed = 20240601;
  std::size_t min_extent = 16;
  std::size_t max_extent = 128;
  std::size_t max_rectangles = 6;
  double spacing = 1.0 / 64.0;
  bool allow_negative = true;
  /// Heights are multiples of 1/16 (sums stay exact in binary floating
  /// point); otherwise they are arbitrary reals in (0, 4].
  bool dyadic = true;
};

/// Random 2D piecewise-constant functions: each is a sum of 1..max_rectangles
/// axis-aligned rectangle indicators with random heights on a grid whose
/// extents are drawn from [min_extent, max_extent]. Deterministic in the seed.
std::vector<GridFunction> random_piecewise_constant_corpus(const CorpusOptions& options = {});

/// 3 on [0, 1] and 2 on (1, 2], sampled at spacing h.
GridFunction staircase_1d(double h = 0.01);

/// Indicator of the square [0, side]^2 (with a one-cell zero margin).
GridFunction square_indicator(double side, double h);

}  // namespace bol
