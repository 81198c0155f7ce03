#include "bol/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "bol/errors.hpp"
#include "format.hpp"

namespace bol {

namespace {

constexpr std::size_t kMaxCells = std::size_t{1} << 28;

std::size_t product(std::span<const std::size_t> extents) {
  std::size_t n = 1;
  for (const auto e : extents) n *= e;
  return n;
}

// Advances a row-major multi-index; returns false after the last index.
bool advance(std::vector<std::ptrdiff_t>& idx, std::span<const std::ptrdiff_t> lo,
             std::span<const std::ptrdiff_t> hi) {
  for (std::size_t a = idx.size(); a-- > 0;) {
    if (++idx[a] < hi[a]) return true;
    idx[a] = lo[a];
  }
  return false;
}

// Offset (in cells) of b's lattice relative to a's.
std::vector<std::ptrdiff_t> lattice_offset(const GridFunction& a, const GridFunction& b) {
  if (a.dim() != b.dim()) throw DomainError("grid: dimension mismatch");
  const double h = a.spacing();
  if (std::abs(a.spacing() - b.spacing()) > 1e-12 * h) throw DomainError("grid: spacing mismatch");
  std::vector<std::ptrdiff_t> off(a.dim());
  for (int i = 0; i < a.dim(); ++i) {
    const double cells = (b.origin()[i] - a.origin()[i]) / h;
    const double rounded = std::round(cells);
    if (std::abs(cells - rounded) > 1e-9) throw DomainError("grid: lattices are not aligned");
    off[i] = static_cast<std::ptrdiff_t>(rounded);
  }
  return off;
}

// c = a + sign * b on the union box.
GridFunction combine(const GridFunction& a, const GridFunction& b, double sign) {
  const auto off = lattice_offset(a, b);
  const int d = a.dim();
  std::vector<std::ptrdiff_t> lo(d), hi(d);
  std::vector<std::size_t> shape(d);
  std::vector<double> origin(d);
  for (int i = 0; i < d; ++i) {
    lo[i] = std::min<std::ptrdiff_t>(0, off[i]);
    hi[i] = std::max<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(a.shape()[i]),
                                     off[i] + static_cast<std::ptrdiff_t>(b.shape()[i]));
    shape[i] = static_cast<std::size_t>(hi[i] - lo[i]);
    origin[i] = a.origin()[i] + static_cast<double>(lo[i]) * a.spacing();
  }
  auto out = a.cropped(lo, shape);
  std::vector<double> values(out.values().begin(), out.values().end());
  const auto strides = out.strides();
  std::vector<std::ptrdiff_t> idx(d, 0);
  std::vector<std::ptrdiff_t> zero(d, 0), bhi(d);
  for (int i = 0; i < d; ++i) bhi[i] = static_cast<std::ptrdiff_t>(b.shape()[i]);
  const auto bv = b.values();
  std::size_t flat = 0;
  do {
    std::size_t pos = 0;
    for (int i = 0; i < d; ++i) pos += static_cast<std::size_t>(idx[i] + off[i] - lo[i]) * strides[i];
    values[pos] += sign * bv[flat++];
  } while (advance(idx, zero, bhi));
  return GridFunction(shape, a.spacing(), origin, std::move(values));
}

}  // namespace

std::vector<std::size_t> GridFunction::Box::extents() const {
  std::vector<std::size_t> e(lo.size(), 0);
  if (empty) return e;
  for (std::size_t i = 0; i < lo.size(); ++i) e[i] = static_cast<std::size_t>(hi[i] - lo[i]);
  return e;
}

GridFunction::GridFunction(std::vector<std::size_t> shape, double spacing, std::vector<double> origin,
                           std::vector<double> values)
    : shape_(std::move(shape)), spacing_(spacing), origin_(std::move(origin)), values_(std::move(values)) {
  if (shape_.empty()) throw DomainError("grid: dimension must be at least 1");
  for (const auto e : shape_) {
    if (e == 0) throw DomainError("grid: extents must be at least 1");
  }
  if (!(spacing_ > 0.0) || !std::isfinite(spacing_)) {
    throw DomainError("grid: spacing must be positive, got " + format_double(spacing_));
  }
  if (origin_.empty()) origin_.assign(shape_.size(), 0.0);
  if (origin_.size() != shape_.size()) throw DomainError("grid: origin has the wrong dimension");
  if (values_.size() != product(shape_)) {
    throw DomainError("grid: expected " + std::to_string(product(shape_)) + " values, got " +
                      std::to_string(values_.size()));
  }
  for (const double v : values_) {
    if (!std::isfinite(v)) throw DomainError("grid: values must be finite");
  }
}

GridFunction GridFunction::zeros(std::vector<std::size_t> shape, double spacing, std::vector<double> origin) {
  const std::size_t n = product(shape);
  if (n > kMaxCells) throw ResourceGuardError("grid_cells", "grid: too many cells (" + std::to_string(n) + ")");
  return GridFunction(std::move(shape), spacing, std::move(origin), std::vector<double>(n, 0.0));
}

GridFunction GridFunction::sample(std::vector<std::size_t> shape, double spacing, std::vector<double> origin,
                                  const std::function<double(std::span<const double>)>& fn) {
  auto g = zeros(std::move(shape), spacing, std::move(origin));
  const int d = g.dim();
  std::vector<std::ptrdiff_t> idx(d, 0), lo(d, 0), hi(d);
  for (int i = 0; i < d; ++i) hi[i] = static_cast<std::ptrdiff_t>(g.shape_[i]);
  std::size_t flat = 0;
  do {
    const auto x = g.cell_center(idx);
    g.values_[flat++] = fn(x);
  } while (advance(idx, lo, hi));
  for (const double v : g.values_) {
    if (!std::isfinite(v)) throw DomainError("grid: sampled values must be finite");
  }
  return g;
}

double GridFunction::cell_volume() const noexcept { return std::pow(spacing_, dim()); }

std::vector<std::size_t> GridFunction::strides() const {
  std::vector<std::size_t> s(shape_.size(), 1);
  for (std::size_t a = shape_.size() - 1; a-- > 0;) s[a] = s[a + 1] * shape_[a + 1];
  return s;
}

double GridFunction::at(std::span<const std::ptrdiff_t> index) const {
  if (index.size() != shape_.size()) throw DomainError("grid: index has the wrong dimension");
  std::size_t pos = 0;
  const auto s = strides();
  for (std::size_t i = 0; i < shape_.size(); ++i) {
    if (index[i] < 0 || index[i] >= static_cast<std::ptrdiff_t>(shape_[i])) return 0.0;
    pos += static_cast<std::size_t>(index[i]) * s[i];
  }
  return values_[pos];
}

std::vector<double> GridFunction::cell_center(std::span<const std::ptrdiff_t> index) const {
  std::vector<double> x(shape_.size());
  for (std::size_t i = 0; i < shape_.size(); ++i) {
    x[i] = origin_[i] + (static_cast<double>(index[i]) + 0.5) * spacing_;
  }
  return x;
}

GridFunction GridFunction::scaled(double c) const {
  std::vector<double> v(values_);
  for (auto& x : v) x *= c;
  return with_values(std::move(v));
}

GridFunction GridFunction::with_values(std::vector<double> values) const {
  return GridFunction(shape_, spacing_, origin_, std::move(values));
}

GridFunction GridFunction::shifted(std::span<const std::ptrdiff_t> k) const {
  if (k.size() != shape_.size()) throw DomainError("grid: shift has the wrong dimension");
  const int d = dim();
  std::vector<std::ptrdiff_t> lo(d);
  std::vector<std::size_t> shape(d);
  for (int i = 0; i < d; ++i) {
    const auto n = static_cast<std::ptrdiff_t>(shape_[i]);
    lo[i] = std::min<std::ptrdiff_t>(0, -k[i]);
    shape[i] = static_cast<std::size_t>(std::max(n, n - k[i]) - lo[i]);
  }
  // g at index j (in this frame) is f(j + k): crop the window moved by k and
  // relabel it onto the window starting at lo.
  std::vector<std::ptrdiff_t> src_lo(d);
  for (int i = 0; i < d; ++i) src_lo[i] = lo[i] + k[i];
  auto moved = cropped(src_lo, shape);
  std::vector<double> origin(d);
  for (int i = 0; i < d; ++i) origin[i] = origin_[i] + static_cast<double>(lo[i]) * spacing_;
  return GridFunction(std::move(shape), spacing_, std::move(origin),
                      std::vector<double>(moved.values().begin(), moved.values().end()));
}

GridFunction GridFunction::cropped(std::span<const std::ptrdiff_t> lo, std::span<const std::size_t> shape) const {
  const int d = dim();
  if (lo.size() != shape_.size() || shape.size() != shape_.size()) {
    throw DomainError("grid: crop box has the wrong dimension");
  }
  std::vector<double> origin(d);
  for (int i = 0; i < d; ++i) origin[i] = origin_[i] + static_cast<double>(lo[i]) * spacing_;
  auto out = zeros(std::vector<std::size_t>(shape.begin(), shape.end()), spacing_, std::move(origin));
  // Intersection of the crop box with the stored box, in this frame.
  std::vector<std::ptrdiff_t> ilo(d), ihi(d);
  for (int i = 0; i < d; ++i) {
    ilo[i] = std::max<std::ptrdiff_t>(lo[i], 0);
    ihi[i] = std::min<std::ptrdiff_t>(lo[i] + static_cast<std::ptrdiff_t>(shape[i]),
                                      static_cast<std::ptrdiff_t>(shape_[i]));
    if (ilo[i] >= ihi[i]) return out;
  }
  const auto src = strides();
  const auto dst = out.strides();
  const auto run = static_cast<std::size_t>(ihi[d - 1] - ilo[d - 1]);
  std::vector<std::ptrdiff_t> idx(ilo);
  std::vector<std::ptrdiff_t> outer_hi(ihi);
  outer_hi[d - 1] = ilo[d - 1] + 1;
  do {
    std::size_t sp = 0, dp = 0;
    for (int i = 0; i < d; ++i) {
      sp += static_cast<std::size_t>(idx[i]) * src[i];
      dp += static_cast<std::size_t>(idx[i] - lo[i]) * dst[i];
    }
    std::copy_n(values_.begin() + static_cast<std::ptrdiff_t>(sp), run,
                out.values_.begin() + static_cast<std::ptrdiff_t>(dp));
  } while (advance(idx, ilo, outer_hi));
  return out;
}

GridFunction::Box GridFunction::support() const {
  const int d = dim();
  Box box;
  box.lo.assign(d, std::numeric_limits<std::ptrdiff_t>::max());
  box.hi.assign(d, std::numeric_limits<std::ptrdiff_t>::min());
  std::vector<std::ptrdiff_t> idx(d, 0), lo(d, 0), hi(d);
  for (int i = 0; i < d; ++i) hi[i] = static_cast<std::ptrdiff_t>(shape_[i]);
  std::size_t flat = 0;
  do {
    if (values_[flat++] != 0.0) {
      box.empty = false;
      for (int i = 0; i < d; ++i) {
        box.lo[i] = std::min(box.lo[i], idx[i]);
        box.hi[i] = std::max(box.hi[i], idx[i] + 1);
      }
    }
  } while (advance(idx, lo, hi));
  if (box.empty) {
    box.lo.assign(d, 0);
    box.hi.assign(d, 0);
  }
  return box;
}

double GridFunction::support_diameter() const {
  const auto box = support();
  if (box.empty) return 0.0;
  double s = 0.0;
  for (const auto e : box.extents()) s += static_cast<double>(e) * static_cast<double>(e);
  return std::sqrt(s) * spacing_;
}

std::size_t GridFunction::support_cells() const {
  return static_cast<std::size_t>(std::count_if(values_.begin(), values_.end(), [](double v) { return v != 0.0; }));
}

GridFunction difference(const GridFunction& a, const GridFunction& b) { return combine(a, b, -1.0); }

GridFunction sum(const GridFunction& a, const GridFunction& b) { return combine(a, b, 1.0); }

double lp_norm(const GridFunction& f, double p) {
  if (!(p >= 1.0)) throw DomainError("lp_norm: p must be >= 1, got " + format_double(p));
  double m = 0.0;
  for (const double v : f.values()) m = std::max(m, std::abs(v));
  if (std::isinf(p) || m == 0.0) return m;
  double s = 0.0;
  if (p == 1.0) {
    for (const double v : f.values()) s += std::abs(v);
    return s * f.cell_volume();
  }
  for (const double v : f.values()) {
    if (v != 0.0) s += std::pow(std::abs(v) / m, p);
  }
  return m * std::pow(s * f.cell_volume(), 1.0 / p);
}

double total_variation(const GridFunction& f) {
  const int d = f.dim();
  const auto& shape = f.shape();
  const auto strides = f.strides();
  const auto v = f.values();
  double total = 0.0;
  for (int a = 0; a < d; ++a) {
    const std::size_t n = shape[a];
    const std::size_t s = strides[a];
    const std::size_t outer = f.size() / (n * s);
    double axis = 0.0;
    // Lines along axis a: base = o * n * s + inner, inner in [0, s).
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t inner = 0; inner < s; ++inner) {
        const std::size_t base = o * n * s + inner;
        double prev = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double cur = v[base + i * s];
          axis += std::abs(cur - prev);
          prev = cur;
        }
        axis += std::abs(prev);
      }
    }
    total += axis;
  }
  return total * std::pow(f.spacing(), d - 1);
}

NormBundle norms(const GridFunction& f, double p) {
  NormBundle b;
  b.l1 = lp_norm(f, 1.0);
  b.linf = lp_norm(f, std::numeric_limits<double>::infinity());
  b.p = p;
  b.lp = lp_norm(f, p);
  b.tv = total_variation(f);
  return b;
}

double unit_ball_volume(int d) {
  if (d < 1) throw DomainError("unit_ball_volume: d must be >= 1");
  const double half = 0.5 * d;
  return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

BallIndicator ball_indicator(int d, double radius, double h) {
  if (d < 1) throw DomainError("ball_indicator: d must be >= 1");
  if (!(radius > 0.0) || !(h > 0.0)) throw DomainError("ball_indicator: radius and h must be positive");
  if (radius / h > 1e4) {
    throw ResourceGuardError("ball_resolution", "ball_indicator: radius/h = " + format_double(radius / h) +
                                                    " exceeds 1e4");
  }
  const auto half = static_cast<std::size_t>(std::ceil(radius / h)) + 1;
  std::vector<std::size_t> shape(d, 2 * half);
  std::vector<double> origin(d, -static_cast<double>(half) * h);
  const std::size_t cells = product(shape);
  if (cells > kMaxCells) {
    throw ResourceGuardError("grid_cells", "ball_indicator: " + std::to_string(cells) + " cells");
  }
  // Squared distance of a cell center in units of h: sum (i + 0.5 - half)^2.
  // Exact ties with the sphere get the radius nudged outward.
  const double r_cells = radius / h;
  double r2 = r_cells * r_cells;
  std::vector<double> offsets(2 * half);
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    const double c = static_cast<double>(i) + 0.5 - static_cast<double>(half);
    offsets[i] = c * c;
  }
  auto mark = [&](double bound) {
    std::vector<double> values(cells, 0.0);
    bool tie = false;
    std::vector<std::ptrdiff_t> idx(d, 0), lo(d, 0), hi(d, static_cast<std::ptrdiff_t>(2 * half));
    std::size_t flat = 0;
    do {
      double q = 0.0;
      for (int i = 0; i < d; ++i) q += offsets[static_cast<std::size_t>(idx[i])];
      if (q == bound) tie = true;
      values[flat++] = q <= bound ? 1.0 : 0.0;
    } while (advance(idx, lo, hi));
    return std::pair{std::move(values), tie};
  };
  auto [values, tie] = mark(r2);
  if (tie) {
    const double nudged = r_cells * (1.0 + 1e-9);
    r2 = nudged * nudged;
    values = mark(r2).first;
  }
  const double vd = unit_ball_volume(d);
  BallIndicator out{GridFunction(std::move(shape), h, std::move(origin), std::move(values)), radius,
                    vd * std::pow(radius, d), d * vd * std::pow(radius, d - 1)};
  return out;
}

GridFunction box_indicator(std::vector<std::size_t> shape, double h, std::span<const std::ptrdiff_t> lo,
                           std::span<const std::ptrdiff_t> hi) {
  auto g = GridFunction::zeros(std::move(shape), h);
  const int d = g.dim();
  if (lo.size() != static_cast<std::size_t>(d) || hi.size() != static_cast<std::size_t>(d)) {
    throw DomainError("box_indicator: corner has the wrong dimension");
  }
  std::vector<double> values(g.size(), 0.0);
  std::vector<std::ptrdiff_t> clo(d), chi(d);
  for (int i = 0; i < d; ++i) {
    clo[i] = std::max<std::ptrdiff_t>(lo[i], 0);
    chi[i] = std::min<std::ptrdiff_t>(hi[i], static_cast<std::ptrdiff_t>(g.shape()[i]));
    if (clo[i] >= chi[i]) return g;
  }
  const auto strides = g.strides();
  std::vector<std::ptrdiff_t> idx(clo);
  do {
    std::size_t pos = 0;
    for (int i = 0; i < d; ++i) pos += static_cast<std::size_t>(idx[i]) * strides[i];
    values[pos] = 1.0;
  } while (advance(idx, clo, chi));
  return g.with_values(std::move(values));
}

GridFunction upsample(const GridFunction& f, std::size_t factor) {
  if (factor == 0) throw DomainError("upsample: factor must be positive");
  const int d = f.dim();
  std::vector<std::size_t> shape(f.shape());
  for (auto& e : shape) e *= factor;
  auto g = GridFunction::zeros(shape, f.spacing() / static_cast<double>(factor), f.origin());
  std::vector<double> values(g.size());
  const auto fs = f.strides();
  std::vector<std::ptrdiff_t> idx(d, 0), lo(d, 0), hi(d);
  for (int i = 0; i < d; ++i) hi[i] = static_cast<std::ptrdiff_t>(shape[i]);
  const auto fv = f.values();
  const auto step = static_cast<std::ptrdiff_t>(factor);
  std::size_t flat = 0;
  do {
    std::size_t pos = 0;
    for (int i = 0; i < d; ++i) pos += static_cast<std::size_t>(idx[i] / step) * fs[i];
    values[flat++] = fv[pos];
  } while (advance(idx, lo, hi));
  return g.with_values(std::move(values));
}

}  // namespace bol
