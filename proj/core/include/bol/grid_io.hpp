#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "bol/grid.hpp"

namespace bol {

/// Fallbacks for files that carry no header. Header fields always win.
struct GridReadOptions {
  std::optional<int> dim;
  double spacing = 1.0;
  std::vector<double> origin;
};

/// {"dim", "shape", "spacing", "origin"}.
nlohmann::json grid_header(const GridFunction& f);

/// CSV layout: an optional first line "# {json header}", then one row per
/// index of the leading d-1 axes holding the values along the last axis.
/// A headerless file needs options.dim (1 or 2).
GridFunction read_grid_csv(const std::filesystem::path& path, const GridReadOptions& options = {});
void write_grid_csv(const std::filesystem::path& path, const GridFunction& f);

/// Binary layout: magic "BOLGRID1", little-endian u64 header length, the JSON
/// header, then the values as little-endian f64.
GridFunction read_grid_binary(const std::filesystem::path& path);
void write_grid_binary(const std::filesystem::path& path, const GridFunction& f);

/// Dispatches on the file contents (binary magic) when reading and on the
/// extension (".bolg" for binary) when writing.
GridFunction read_grid(const std::filesystem::path& path, const GridReadOptions& options = {});
void write_grid(const std::filesystem::path& path, const GridFunction& f);

}  // namespace bol
