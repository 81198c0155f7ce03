#include "bol/grid_io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "bol/errors.hpp"
#include "format.hpp"

namespace bol {

namespace {

constexpr char kMagic[8] = {'B', 'O', 'L', 'G', 'R', 'I', 'D', '1'};

static_assert(std::endian::native == std::endian::little, "binary grid IO assumes a little-endian host");

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<double> parse_row(const std::string& line, std::size_t line_no) {
  std::vector<double> row;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    auto next = line.find(',', pos);
    if (next == std::string::npos) next = line.size();
    const auto cell = trim(std::string_view(line).substr(pos, next - pos));
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
      throw DomainError("grid csv: line " + std::to_string(line_no) + ": cannot parse '" + cell + "'");
    }
    row.push_back(v);
    pos = next + 1;
  }
  return row;
}

GridFunction from_header(const nlohmann::json& header, std::vector<double> values) {
  try {
    const auto dim = header.at("dim").get<int>();
    auto shape = header.at("shape").get<std::vector<std::size_t>>();
    const auto spacing = header.at("spacing").get<double>();
    auto origin = header.value("origin", std::vector<double>{});
    if (static_cast<int>(shape.size()) != dim) throw DomainError("grid header: shape does not match dim");
    return GridFunction(std::move(shape), spacing, std::move(origin), std::move(values));
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("grid header: ") + e.what());
  }
}

}  // namespace

nlohmann::json grid_header(const GridFunction& f) {
  return {{"dim", f.dim()}, {"shape", f.shape()}, {"spacing", f.spacing()}, {"origin", f.origin()}};
}

GridFunction read_grid_csv(const std::filesystem::path& path, const GridReadOptions& options) {
  std::ifstream in(path);
  if (!in) throw DomainError("grid csv: cannot open " + path.string());
  std::optional<nlohmann::json> header;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '#') {
      if (line_no == 1) {
        try {
          header = nlohmann::json::parse(t.substr(1));
        } catch (const nlohmann::json::exception& e) {
          throw DomainError(std::string("grid csv: malformed header: ") + e.what());
        }
      }
      continue;
    }
    rows.push_back(parse_row(t, line_no));
  }
  std::vector<double> values;
  for (const auto& r : rows) values.insert(values.end(), r.begin(), r.end());
  if (header) return from_header(*header, std::move(values));

  if (!options.dim) throw DomainError("grid csv: " + path.string() + " has no header; the dimension is required");
  if (rows.empty()) throw DomainError("grid csv: " + path.string() + " is empty");
  std::vector<std::size_t> shape;
  if (*options.dim == 1) {
    shape = {values.size()};
  } else if (*options.dim == 2) {
    for (const auto& r : rows) {
      if (r.size() != rows.front().size()) throw DomainError("grid csv: ragged rows");
    }
    shape = {rows.size(), rows.front().size()};
  } else {
    throw DomainError("grid csv: headerless files support dim 1 or 2 only");
  }
  return GridFunction(std::move(shape), options.spacing, options.origin, std::move(values));
}

void write_grid_csv(const std::filesystem::path& path, const GridFunction& f) {
  std::ofstream out(path);
  if (!out) throw DomainError("grid csv: cannot write " + path.string());
  out << "# " << grid_header(f).dump() << '\n';
  const std::size_t row = f.shape().back();
  const auto v = f.values();
  for (std::size_t i = 0; i < v.size(); i += row) {
    for (std::size_t j = 0; j < row; ++j) {
      if (j) out << ',';
      out << format_double(v[i + j]);
    }
    out << '\n';
  }
}

GridFunction read_grid_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("grid binary: cannot open " + path.string());
  char magic[8];
  std::uint64_t len = 0;
  if (!in.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) {
    throw DomainError("grid binary: bad magic in " + path.string());
  }
  if (!in.read(reinterpret_cast<char*>(&len), sizeof len) || len > (1u << 20)) {
    throw DomainError("grid binary: bad header length");
  }
  std::string text(len, '\0');
  if (!in.read(text.data(), static_cast<std::streamsize>(len))) throw DomainError("grid binary: truncated header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("grid binary: malformed header: ") + e.what());
  }
  std::size_t n = 1;
  for (const auto e : header.value("shape", std::vector<std::size_t>{})) n *= e;
  std::vector<double> values(n);
  if (!in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(n * sizeof(double)))) {
    throw DomainError("grid binary: truncated values");
  }
  return from_header(header, std::move(values));
}

void write_grid_binary(const std::filesystem::path& path, const GridFunction& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("grid binary: cannot write " + path.string());
  const auto text = grid_header(f).dump();
  const std::uint64_t len = text.size();
  out.write(kMagic, 8);
  out.write(reinterpret_cast<const char*>(&len), sizeof len);
  out.write(text.data(), static_cast<std::streamsize>(len));
  out.write(reinterpret_cast<const char*>(f.values().data()),
            static_cast<std::streamsize>(f.size() * sizeof(double)));
}

GridFunction read_grid(const std::filesystem::path& path, const GridReadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("grid: cannot open " + path.string());
  char magic[8] = {};
  in.read(magic, 8);
  if (in.gcount() == 8 && std::memcmp(magic, kMagic, 8) == 0) return read_grid_binary(path);
  return read_grid_csv(path, options);
}

void write_grid(const std::filesystem::path& path, const GridFunction& f) {
  if (path.extension() == ".bolg") {
    write_grid_binary(path, f);
  } else {
    write_grid_csv(path, f);
  }
}

}  // namespace bol
