#include "bol/molecules.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "bol/errors.hpp"
#include "bol/parallel.hpp"

namespace bol {

namespace {

std::size_t count_bound(std::size_t cells) {
  if (cells == 0) return 0;
  const auto log2 = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(cells))));
  return 2 * log2 + 2;
}

std::vector<Molecule> peel(const GridFunction& f, int sign) {
  std::vector<double> part(f.size());
  const auto v = f.values();
  for (std::size_t i = 0; i < part.size(); ++i) part[i] = std::max(sign * v[i], 0.0);

  // count_above[j] = #{cells > values[j]} over the sorted distinct values.
  std::map<double, std::size_t> hist;
  for (const double x : part) {
    if (x > 0.0) ++hist[x];
  }
  std::vector<double> values;
  std::vector<std::size_t> above;
  std::size_t total = 0;
  for (const auto& [x, c] : hist) total += c;
  std::size_t running = total;
  for (const auto& [x, c] : hist) {
    running -= c;
    values.push_back(x);
    above.push_back(running);
  }

  std::vector<Molecule> out;
  const double vol = f.cell_volume();
  double a = 0.0;
  std::size_t level = total;
  std::size_t j = 0;
  while (level > 0) {
    while (j < values.size() && (values[j] <= a || 2 * above[j] > level)) ++j;
    const double next = values[j];
    std::vector<double> layer(part.size());
    for (std::size_t i = 0; i < part.size(); ++i) layer[i] = std::clamp(part[i] - a, 0.0, next - a);
    Molecule m{f.with_values(std::move(layer)), a, next, static_cast<double>(level) * vol, level, sign};
    out.push_back(std::move(m));
    a = next;
    level = above[j];
  }
  return out;
}

}  // namespace

double molecule_ratio(const GridFunction& g) {
  const double tv = total_variation(g);
  const double linf = lp_norm(g, std::numeric_limits<double>::infinity());
  if (linf == 0.0) return 0.0;
  if (tv == 0.0) throw DomainError("molecule ratio: nonzero layer with zero total variation");
  const double d = g.dim();
  return std::pow(linf, 1.0 / d) * std::pow(lp_norm(g, 1.0), (d - 1.0) / d) / tv;
}

Decomposition decompose(const GridFunction& f) {
  Decomposition dec{{}, f, 0.0};
  auto pos = peel(f, 1);
  auto neg = peel(f, -1);
  for (std::size_t i = 0; i < std::max(pos.size(), neg.size()); ++i) {
    if (i < pos.size()) dec.molecules.push_back(std::move(pos[i]));
    if (i < neg.size()) dec.molecules.push_back(std::move(neg[i]));
  }
  for (const auto& m : dec.molecules) dec.alpha_observed = std::max(dec.alpha_observed, molecule_ratio(m.layer));
  return dec;
}

R1R2Report verify_r1_r2(const Decomposition& dec, double rel_tol, double recon_tol) {
  R1R2Report rep;
  const auto& f = dec.source;
  const auto n = f.size();
  std::vector<double> sum(n, 0.0);
  for (const auto& m : dec.molecules) {
    const auto v = m.layer.values();
    for (std::size_t i = 0; i < n; ++i) sum[i] += m.sign * v[i];
  }
  const auto fv = f.values();
  for (std::size_t i = 0; i < n; ++i) rep.max_cell_error = std::max(rep.max_cell_error, std::abs(sum[i] - fv[i]));
  rep.reconstruction_exact = rep.max_cell_error <= recon_tol;
  if (!rep.reconstruction_exact) rep.detail += "reconstruction differs from the source; ";

  std::vector<double> l1(dec.molecules.size()), tv(dec.molecules.size());
  parallel_for(dec.molecules.size(), [&](std::size_t i) {
    l1[i] = lp_norm(dec.molecules[i].layer, 1.0);
    tv[i] = total_variation(dec.molecules[i].layer);
  });
  double l1_sum = 0.0, tv_sum = 0.0;
  for (std::size_t i = 0; i < l1.size(); ++i) {
    l1_sum += l1[i];
    tv_sum += tv[i];
  }
  const double l1_f = lp_norm(f, 1.0);
  const double tv_f = total_variation(f);
  rep.l1_relative_error = l1_f > 0.0 ? std::abs(l1_sum - l1_f) / l1_f : l1_sum;
  rep.tv_relative_error = tv_f > 0.0 ? std::abs(tv_sum - tv_f) / tv_f : tv_sum;
  rep.l1_additive = rep.l1_relative_error <= rel_tol;
  rep.tv_additive = rep.tv_relative_error <= rel_tol;
  if (!rep.l1_additive) rep.detail += "L1 norms are not additive; ";
  if (!rep.tv_additive) rep.detail += "total variations are not additive; ";

  rep.halving = true;
  std::optional<std::size_t> last[2];
  std::size_t first_cells[2] = {0, 0};
  for (std::size_t i = 0; i < dec.molecules.size(); ++i) {
    const auto& m = dec.molecules[i];
    const int c = m.sign > 0 ? 0 : 1;
    if (last[c]) {
      if (2 * m.level_cells > dec.molecules[*last[c]].level_cells) {
        rep.halving = false;
        if (!rep.offending) rep.offending = i;
      }
    } else {
      first_cells[c] = m.level_cells;
    }
    last[c] = i;
    (c == 0 ? rep.positive_count : rep.negative_count) += 1;
  }
  if (!rep.halving) rep.detail += "level measures do not halve; ";
  rep.positive_bound = count_bound(first_cells[0]);
  rep.negative_bound = count_bound(first_cells[1]);
  rep.count_within_bound = rep.positive_count <= rep.positive_bound && rep.negative_count <= rep.negative_bound;
  if (!rep.count_within_bound) rep.detail += "too many molecules; ";
  rep.pass = rep.reconstruction_exact && rep.l1_additive && rep.tv_additive && rep.halving && rep.count_within_bound;
  return rep;
}

double isoperimetric_constant_grid(const std::vector<std::size_t>& shape) {
  const int d = static_cast<int>(shape.size());
  if (d < 1) throw DomainError("isoperimetric constant: empty shape");
  if (d == 1) return 0.5;
  const double q = (d - 1.0) / d;
  double best = 0.0;

  // Boxes with cell extents w: |A|^{q} / (2 sum_i prod_{j != i} w_j), scale free.
  std::vector<std::size_t> w(d, 1);
  for (;;) {
    double vol = 1.0;
    for (const auto x : w) vol *= static_cast<double>(x);
    double per = 0.0;
    for (int i = 0; i < d; ++i) per += vol / static_cast<double>(w[i]);
    best = std::max(best, std::pow(vol, q) / (2.0 * per));
    int a = d - 1;
    for (; a >= 0; --a) {
      if (++w[a] <= shape[a]) break;
      w[a] = 1;
    }
    if (a < 0) break;
  }

  // Discretized balls whose bounding box fits the grid, radii in half-cell steps.
  const auto min_extent = *std::min_element(shape.begin(), shape.end());
  for (std::size_t k = 1; k + 1 < min_extent; ++k) {
    const auto ball = ball_indicator(d, 0.5 * static_cast<double>(k), 1.0);
    const auto cells = static_cast<double>(ball.function.support_cells());
    const auto ext = ball.function.support().extents();
    if (*std::max_element(ext.begin(), ext.end()) > min_extent) break;
    best = std::max(best, std::pow(cells, q) / total_variation(ball.function));
  }
  return best;
}

R3Report verify_r3(const Decomposition& dec, std::optional<double> alpha_budget) {
  if (dec.molecules.empty()) throw DomainError("verify_r3: the decomposition has no molecules");
  R3Report rep;
  rep.ratios.resize(dec.molecules.size());
  parallel_for(dec.molecules.size(), [&](std::size_t i) { rep.ratios[i] = molecule_ratio(dec.molecules[i].layer); });
  rep.alpha_observed = *std::max_element(rep.ratios.begin(), rep.ratios.end());
  const int d = dec.source.dim();
  rep.c_iso = isoperimetric_constant_grid(dec.source.shape());
  rep.budget = alpha_budget.value_or(std::pow(2.0, 2.0 - 1.0 / d) * rep.c_iso);
  rep.pass = rep.alpha_observed <= rep.budget;
  return rep;
}

}  // namespace bol
