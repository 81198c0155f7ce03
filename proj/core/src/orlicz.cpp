#include "bol/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bol/errors.hpp"
#include "bol/parallel.hpp"
#include "format.hpp"

namespace bol {

namespace {

constexpr int kMaxBisection = 200;
constexpr double kResidualTolerance = 1e-8;
constexpr std::size_t kSmallTable = 64;
constexpr double kRadiusSlack = 1e-12;

// Distinct magnitudes with counts. Piecewise-constant functions produce very
// few distinct shift differences, so a short linear table handles the common
// case and a sort takes over when it overflows.
class Histogram {
 public:
  void add(double v) {
    v = std::abs(v);
    if (v == 0.0) return;
    if (!spill_.empty()) {
      spill_.push_back(v);
      return;
    }
    if (last_ < mags_.size() && mags_[last_] == v) {
      counts_[last_] += 1.0;
      return;
    }
    for (std::size_t i = 0; i < mags_.size(); ++i) {
      if (mags_[i] == v) {
        counts_[i] += 1.0;
        last_ = i;
        return;
      }
    }
    if (mags_.size() < kSmallTable) {
      mags_.push_back(v);
      counts_.push_back(1.0);
      last_ = mags_.size() - 1;
      return;
    }
    spill_.push_back(v);
  }

  void finish() {
    if (spill_.empty()) return;
    std::sort(spill_.begin(), spill_.end());
    std::vector<double> mags, counts;
    std::size_t i = 0;
    while (i < spill_.size()) {
      std::size_t j = i;
      while (j < spill_.size() && spill_[j] == spill_[i]) ++j;
      mags.push_back(spill_[i]);
      counts.push_back(static_cast<double>(j - i));
      i = j;
    }
    for (std::size_t k = 0; k < mags_.size(); ++k) {
      const auto it = std::lower_bound(mags.begin(), mags.end(), mags_[k]);
      const auto pos = static_cast<std::size_t>(it - mags.begin());
      if (it != mags.end() && *it == mags_[k]) {
        counts[pos] += counts_[k];
      } else {
        mags.insert(it, mags_[k]);
        counts.insert(counts.begin() + static_cast<std::ptrdiff_t>(pos), counts_[k]);
      }
    }
    mags_ = std::move(mags);
    counts_ = std::move(counts);
    spill_.clear();
  }

  const std::vector<double>& magnitudes() const { return mags_; }
  const std::vector<double>& counts() const { return counts_; }

 private:
  std::vector<double> mags_;
  std::vector<double> counts_;
  std::vector<double> spill_;
  std::size_t last_ = 0;
};

// f cropped to its support box and embedded in zeros, `pad[i]` cells on both
// sides of axis i, so every shift with |k_i| <= pad[i] reads valid memory.
struct Padded {
  int d = 0;
  std::vector<std::ptrdiff_t> n;
  std::vector<std::ptrdiff_t> pad;
  std::vector<std::ptrdiff_t> stride;
  std::vector<double> data;
};

Padded make_padded(const GridFunction& f, const GridFunction::Box& box, std::span<const std::ptrdiff_t> pad) {
  Padded p;
  p.d = f.dim();
  p.n.resize(p.d);
  p.pad.assign(pad.begin(), pad.end());
  std::vector<std::ptrdiff_t> lo(p.d);
  std::vector<std::size_t> ext(p.d);
  for (int i = 0; i < p.d; ++i) {
    p.n[i] = box.hi[i] - box.lo[i];
    lo[i] = box.lo[i] - pad[i];
    ext[i] = static_cast<std::size_t>(p.n[i] + 2 * pad[i]);
  }
  const auto g = f.cropped(lo, ext);
  const auto s = g.strides();
  p.stride.assign(s.begin(), s.end());
  p.data.assign(g.values().begin(), g.values().end());
  return p;
}

// Calls row(shifted, base, len) for every line along the last axis of the
// region where f(. + k) - f can be nonzero.
template <class Row>
void for_each_row(const Padded& p, std::span<const std::ptrdiff_t> k, Row&& row) {
  const int d = p.d;
  std::vector<std::ptrdiff_t> lo(d), hi(d);
  std::ptrdiff_t offset = 0;
  for (int i = 0; i < d; ++i) {
    lo[i] = std::min<std::ptrdiff_t>(0, -k[i]);
    hi[i] = std::max(p.n[i], p.n[i] - k[i]);
    offset += k[i] * p.stride[i];
  }
  const auto len = static_cast<std::size_t>(hi[d - 1] - lo[d - 1]);
  std::vector<std::ptrdiff_t> idx(lo.begin(), lo.end() - 1);
  for (;;) {
    std::ptrdiff_t pos = lo[d - 1] + p.pad[d - 1];
    for (int i = 0; i + 1 < d; ++i) pos += (idx[i] + p.pad[i]) * p.stride[i];
    const double* base = p.data.data() + pos;
    row(base + offset, base, len);
    int a = d - 2;
    for (; a >= 0; --a) {
      if (++idx[a] < hi[a]) break;
      idx[a] = lo[a];
    }
    if (a < 0) break;
  }
}

double shift_difference_norm(const Padded& p, std::span<const std::ptrdiff_t> k, const YoungFunction& phi,
                             double vol) {
  if (phi.kind() == YoungKind::linear) {
    double s = 0.0;
    for_each_row(p, k, [&](const double* a, const double* b, std::size_t len) {
      double row = 0.0;
      for (std::size_t i = 0; i < len; ++i) row += std::abs(a[i] - b[i]);
      s += row;
    });
    return s * vol;
  }
  Histogram hist;
  for_each_row(p, k, [&](const double* a, const double* b, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) hist.add(a[i] - b[i]);
  });
  hist.finish();
  return luxemburg_norm(hist.magnitudes(), hist.counts(), vol, phi).norm;
}

Histogram histogram_of(std::span<const double> values) {
  Histogram h;
  for (const double v : values) h.add(v);
  h.finish();
  return h;
}

}  // namespace

LuxemburgResult luxemburg_norm(std::span<const double> magnitudes, std::span<const double> counts,
                               double cell_volume, const YoungFunction& phi) {
  if (magnitudes.size() != counts.size()) throw DomainError("luxemburg: magnitudes and counts differ in length");
  double m = 0.0;
  for (const double v : magnitudes) m = std::max(m, std::abs(v));
  LuxemburgResult out;
  if (m == 0.0) return out;
  auto J = [&](double lambda) {
    double s = 0.0;
    for (std::size_t i = 0; i < magnitudes.size(); ++i) {
      if (magnitudes[i] != 0.0) s += counts[i] * phi(std::abs(magnitudes[i]) / lambda);
    }
    return s * cell_volume;
  };
  // The largest value alone already forces J >= 1 at m / Phi^{-1}(1/h^d).
  double lo = m / phi.inverse(1.0 / cell_volume);
  double jlo = J(lo);
  if (!std::isfinite(jlo) || !(lo > 0.0)) {
    throw DomainError("luxemburg: non-finite modular at the initial bracket (mis-scaled input)");
  }
  int guard = 0;
  while (jlo < 1.0) {
    lo *= 0.5;
    jlo = J(lo);
    if (++guard > 2000 || !std::isfinite(jlo)) throw ConvergenceError("luxemburg: cannot bracket from below");
  }
  double hi = lo;
  double jhi = jlo;
  guard = 0;
  while (jhi > 1.0) {
    hi *= 2.0;
    jhi = J(hi);
    if (++guard > 2000) throw ConvergenceError("luxemburg: cannot bracket from above");
  }
  if (jhi == 1.0) {
    out.norm = hi;
    return out;
  }
  if (lo == hi) lo = hi * 0.5;
  int it = 0;
  while (hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi) {
    if (++it > kMaxBisection) throw ConvergenceError("luxemburg: bisection did not converge in 200 iterations");
    const double mid = std::sqrt(lo * hi);
    if (mid <= lo || mid >= hi) break;
    const double jm = J(mid);
    if (jm > 1.0) {
      lo = mid;
    } else {
      hi = mid;
      jhi = jm;
    }
  }
  out.norm = hi;
  out.iterations = it;
  out.residual = std::abs(jhi - 1.0);
  if (out.residual > kResidualTolerance) {
    // J can jump only if Phi does; report rather than hide it.
    throw ConvergenceError("luxemburg: residual " + format_double(out.residual) + " above tolerance");
  }
  return out;
}

LuxemburgResult luxemburg_norm(std::span<const double> values, double cell_volume, const YoungFunction& phi) {
  const auto h = histogram_of(values);
  return luxemburg_norm(h.magnitudes(), h.counts(), cell_volume, phi);
}

LuxemburgResult luxemburg_norm(const GridFunction& f, const YoungFunction& phi) {
  return luxemburg_norm(f.values(), f.cell_volume(), phi);
}

ModulusTable ModulusTable::build(const GridFunction& f, const YoungFunction& phi, double t_max,
                                 std::size_t shift_budget) {
  if (!(t_max > 0.0)) throw DomainError("modulus: t must be positive");
  ModulusTable table;
  table.h_ = f.spacing();
  table.t_max_ = std::max(t_max, f.spacing());
  const auto box = f.support();
  if (box.empty) {
    table.fully_resolved_ = true;
    return table;
  }
  table.zero_ = false;
  const int d = f.dim();
  const auto ext = box.extents();
  const double radius = table.t_max_ / table.h_ * (1.0 + kRadiusSlack);
  const double radius2 = radius * radius;
  const auto r_cells = static_cast<std::ptrdiff_t>(std::floor(radius));

  // Overlapping shifts have |k_i| < n_i on every axis; the table keeps one of
  // each pair {k, -k} (first nonzero component positive).
  std::vector<std::ptrdiff_t> reach(d);
  long long full2 = 0;
  std::ptrdiff_t min_extent = std::numeric_limits<std::ptrdiff_t>::max();
  for (int i = 0; i < d; ++i) {
    const auto n = static_cast<std::ptrdiff_t>(ext[i]);
    reach[i] = std::min(r_cells, n - 1);
    full2 += static_cast<long long>(n - 1) * (n - 1);
    min_extent = std::min(min_extent, n);
  }
  table.saturation_radius_ = static_cast<double>(min_extent) * table.h_;

  std::vector<Shift> vectors;
  std::vector<long long> len2;
  Shift k(d);
  for (int i = 0; i < d; ++i) k[i] = -reach[i];
  for (;;) {
    long long q = 0;
    int first = 0;
    for (int i = 0; i < d; ++i) {
      q += static_cast<long long>(k[i]) * k[i];
      if (first == 0 && k[i] != 0) first = k[i] > 0 ? 1 : -1;
    }
    if (first > 0 && static_cast<double>(q) <= radius2) {
      if (vectors.size() >= shift_budget) {
        throw ResourceGuardError("shift_budget", "modulus: more than " + std::to_string(shift_budget) +
                                                     " lattice vectors needed; coarsen the grid or lower t");
      }
      vectors.push_back(k);
      len2.push_back(q);
    }
    int a = d - 1;
    for (; a >= 0; --a) {
      if (++k[a] <= reach[a]) break;
      k[a] = -reach[a];
    }
    if (a < 0) break;
  }

  std::vector<std::ptrdiff_t> pad(reach.begin(), reach.end());
  const auto padded = make_padded(f, box, pad);
  const double vol = f.cell_volume();
  std::vector<double> values(vectors.size());
  parallel_for(vectors.size(), [&](std::size_t i) { values[i] = shift_difference_norm(padded, vectors[i], phi, vol); });

  // Disjoint shifts: the difference is f and -f side by side.
  {
    auto hist = histogram_of(f.values());
    auto counts = hist.counts();
    for (auto& c : counts) c *= 2.0;
    table.saturated_ = phi.kind() == YoungKind::linear ? 2.0 * lp_norm(f, 1.0)
                                                       : luxemburg_norm(hist.magnitudes(), counts, vol, phi).norm;
  }
  const bool reaches_disjoint = radius >= static_cast<double>(min_extent);
  if (reaches_disjoint) {
    vectors.emplace_back();
    len2.push_back(static_cast<long long>(min_extent) * min_extent);
    values.push_back(table.saturated_);
  }
  table.fully_resolved_ = reaches_disjoint && radius2 >= static_cast<double>(full2);

  std::vector<std::size_t> order(len2.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return len2[a] < len2[b]; });
  table.lengths2_.reserve(order.size());
  table.prefix_max_.reserve(order.size());
  double running = 0.0;
  for (const auto i : order) {
    running = std::max(running, values[i]);
    table.lengths2_.push_back(len2[i]);
    table.prefix_max_.push_back(running);
  }
  return table;
}

double ModulusTable::max_value() const { return prefix_max_.empty() ? 0.0 : prefix_max_.back(); }

double ModulusTable::operator()(double t) const {
  if (!(t > 0.0)) throw DomainError("modulus: t must be positive");
  if (zero_) return 0.0;
  if (t < h_) return (t / h_) * (*this)(h_);
  if (t > t_max_ * (1.0 + kRadiusSlack)) {
    if (fully_resolved_) return max_value();
    throw DomainError("modulus: t = " + format_double(t) + " beyond the tabulated radius " + format_double(t_max_));
  }
  const double r = t / h_ * (1.0 + kRadiusSlack);
  const double r2 = r * r;
  const auto it = std::upper_bound(lengths2_.begin(), lengths2_.end(), r2,
                                   [](double x, long long v) { return x < static_cast<double>(v); });
  if (it == lengths2_.begin()) return 0.0;
  return prefix_max_[static_cast<std::size_t>(it - lengths2_.begin()) - 1];
}

double modulus_of_continuity(const GridFunction& f, const YoungFunction& phi, double t, std::size_t shift_budget) {
  return ModulusTable::build(f, phi, t, shift_budget)(t);
}

ModulusCurve modulus_curve(const GridFunction& f, const YoungFunction& phi, std::span<const double> ts,
                           std::size_t shift_budget) {
  ModulusCurve curve;
  if (ts.empty()) return curve;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!(ts[i] > 0.0)) throw DomainError("modulus: t must be positive");
    if (i && ts[i] < ts[i - 1]) throw DomainError("modulus: ts must be sorted");
  }
  const auto table = ModulusTable::build(f, phi, ts.back(), shift_budget);
  curve.ts.assign(ts.begin(), ts.end());
  for (const double t : ts) curve.values.push_back(table(t));
  curve.shift_budget = table.lattice_vectors();
  return curve;
}

std::vector<BoundCheck> check_lemma_omega1(const GridFunction& f, std::span<const double> ts) {
  std::vector<BoundCheck> out;
  if (ts.empty()) return out;
  for (const double t : ts) {
    if (!(t > 0.0)) throw DomainError("lemma omega1: t must be positive");
  }
  const double tmax = *std::max_element(ts.begin(), ts.end());
  const auto table = ModulusTable::build(f, make_linear_young(), tmax);
  const double tv = total_variation(f);
  const double h = f.spacing();
  for (const double t : ts) {
    BoundCheck c;
    c.t = t;
    c.lhs = table(t);
    c.rhs = t * tv;
    c.pass = c.lhs <= c.rhs * (1.0 + 2.0 * h / t) * (1.0 + 1e-12);
    out.push_back(c);
  }
  return out;
}

BoundCheck check_infima_bound(const GridFunction& f, const YoungFunction& phi, std::span<const std::ptrdiff_t> k) {
  BoundCheck c;
  double len2 = 0.0;
  for (const auto ki : k) len2 += static_cast<double>(ki) * static_cast<double>(ki);
  c.t = std::sqrt(len2) * f.spacing();
  const auto diff = difference(f.shifted(k), f);
  const double l1 = lp_norm(diff, 1.0);
  if (l1 == 0.0) {
    c.pass = true;
    return c;
  }
  const double m = lp_norm(f, std::numeric_limits<double>::infinity());
  c.lhs = luxemburg_norm(diff, phi).norm;
  c.rhs = 2.0 * m / phi.inverse(2.0 * m / l1);
  c.pass = c.lhs <= c.rhs * (1.0 + 1e-8);
  return c;
}

double domination_threshold(const YoungFunction& phi, double q) {
  const auto grid = log_grid(1e-6, 1e12, 1081);
  double n = grid.front();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    if (phi(x) > std::pow(x, q) * (1.0 + 1e-12)) {
      n = i + 1 < grid.size() ? grid[i + 1] : std::numeric_limits<double>::infinity();
    }
  }
  return n;
}

OrliczBvCheck check_orlicz_bv_bound(const GridFunction& f, const YoungFunction& phi, double sobolev_constant) {
  const int d = f.dim();
  if (d < 2) throw DomainError("orlicz-bv bound: d must be >= 2");
  OrliczBvCheck c;
  const double q = static_cast<double>(d) / (d - 1);
  c.threshold = domination_threshold(phi, q);
  c.sobolev_constant = sobolev_constant;
  c.constant = std::max(phi(1.0), c.threshold) * std::max(1.0, sobolev_constant);
  c.lhs = luxemburg_norm(f, phi).norm;
  c.rhs = c.constant * (lp_norm(f, 1.0) + total_variation(f));
  c.pass = c.lhs <= c.rhs * (1.0 + 1e-12);
  return c;
}

}  // namespace bol
