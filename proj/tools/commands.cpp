#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "bol/besov.hpp"
#include "bol/condition.hpp"
#include "bol/corpus.hpp"
#include "bol/errors.hpp"
#include "bol/evidence.hpp"
#include "bol/grid.hpp"
#include "bol/grid_io.hpp"
#include "bol/molecules.hpp"
#include "bol/orlicz.hpp"
#include "bol/parallel.hpp"
#include "bol/young.hpp"
#include "cli.hpp"

namespace bol::cli {

namespace {

using nlohmann::json;

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Plain text table for the summary on stderr.
class Table {
 public:
  explicit Table(std::vector<std::string> headers) : headers_(std::move(headers)) {}
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
  void print(std::ostream& os) const {
    std::vector<std::size_t> width(headers_.size());
    for (std::size_t i = 0; i < headers_.size(); ++i) width[i] = headers_[i].size();
    for (const auto& r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    }
    auto line = [&](const std::vector<std::string>& r) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "  " : "") << std::setw(static_cast<int>(width[i])) << r[i];
      os << "\n";
    };
    line(headers_);
    for (const auto& r : rows_) line(r);
  }

 private:
  std::vector<std::string> headers_;
  std::vector<std::vector<std::string>> rows_;
};

class Csv {
 public:
  explicit Csv(std::vector<std::string> headers) : headers_(std::move(headers)) {}
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
  void write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot write " + path);
    auto line = [&](const std::vector<std::string>& r) {
      for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
      out << "\n";
    };
    line(headers_);
    for (const auto& r : rows_) line(r);
  }

 private:
  std::vector<std::string> headers_;
  std::vector<std::vector<std::string>> rows_;
};

struct Outcome {
  json result = json::object();
  bool pass = true;
  std::optional<Csv> csv;
  std::optional<Table> summary;
  std::vector<std::string> notes;
};

std::string cell(const json& row, const char* key) {
  if (!row.contains(key)) return "";
  const auto& v = row.at(key);
  if (v.is_number()) return num(v.get<double>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

int dimension(const RunConfig& cfg) {
  const auto d = cfg.integer("dim");
  if (d < 1 || d > 16) throw UsageError(kInvalidInput, "--dim must lie in [1, 16]");
  return static_cast<int>(d);
}

GridFunction load_grid(const RunConfig& cfg) {
  GridReadOptions opt;
  if (cfg.has("dim")) opt.dim = dimension(cfg);
  opt.spacing = cfg.number("spacing");
  const auto path = cfg.text("input");
  if (!std::filesystem::exists(path)) throw UsageError(kInvalidInput, "input file " + path + " does not exist");
  auto f = read_grid(path, opt);
  if (opt.dim && f.dim() != *opt.dim) {
    throw UsageError(kConflict, "--dim " + std::to_string(*opt.dim) + " contradicts the file header (dim " +
                                    std::to_string(f.dim()) + ")");
  }
  return f;
}

BesovConfig besov_config(const RunConfig& cfg) {
  BesovConfig b;
  const auto nodes = cfg.integer("nodes");
  if (nodes < 2) throw UsageError(kInvalidInput, "--nodes must be >= 2");
  b.nodes = static_cast<std::size_t>(nodes);
  b.rel_tol = cfg.number("rel-tol");
  if (!(b.rel_tol > 0.0)) throw UsageError(kInvalidInput, "--rel-tol must be positive");
  if (cfg.has("tmin")) b.t_min = cfg.number("tmin");
  if (cfg.has("tmax")) b.t_max = cfg.number("tmax");
  if (b.t_min && b.t_max && !(*b.t_min < *b.t_max)) throw UsageError(kInvalidInput, "--tmin must be below --tmax");
  return b;
}

json besov_json(const BesovNorm& n) {
  return {{"orlicz_part", n.orlicz_part}, {"seminorm_part", n.seminorm_part}, {"total", n.total},
          {"t_min", n.t_min},             {"t_max", n.t_max},                 {"tail_bound", n.tail_bound},
          {"head_bound", n.head_bound},   {"converged", n.converged}};
}

Outcome check_condition(const RunConfig& cfg) {
  const auto phi = parse_young_spec(cfg.text("phi"));
  const auto psi = parse_weight_spec(cfg.text("psi"));
  const int d = dimension(cfg);
  SupOptions opt;
  opt.s_min = cfg.number("smin");
  opt.s_max = cfg.number("smax");
  const auto points = cfg.integer("points");
  if (points < 2) throw UsageError(kInvalidInput, "--points must be >= 2");
  opt.points = static_cast<std::size_t>(points);
  const auto nodes = cfg.integer("quad-nodes");
  if (nodes < 2) throw UsageError(kInvalidInput, "--quad-nodes must be >= 2");
  opt.condition.quad.nodes = static_cast<std::size_t>(nodes);
  opt.condition.quad.u_max = cfg.number("u-max");
  opt.condition.quad.rel_tol = cfg.number("rel-tol");
  opt.condition.head_lower_limit = cfg.number("lower-limit");
  if (!(opt.s_min > 0.0) || !(opt.s_max > opt.s_min)) throw UsageError(kInvalidInput, "need 0 < smin < smax");

  const auto rep = condition_sup(phi, psi, d, opt);
  Outcome out;
  out.result = {{"verdict", to_string(rep.verdict)},
                {"D_hat", json_number(rep.D_hat)},
                {"argmax_s", rep.argmax_s},
                {"high_slope", json_number(rep.high_slope)},
                {"low_slope", json_number(rep.low_slope)},
                {"divergent_s", rep.divergent_s ? json(*rep.divergent_s) : json(nullptr)},
                {"reason", rep.reason},
                {"s", rep.s_grid},
                {"values", json::array()},
                {"errors", json::array()},
                {"divergent", rep.divergent}};
  Csv csv({"s", "value", "error", "divergent"});
  for (std::size_t i = 0; i < rep.s_grid.size(); ++i) {
    out.result["values"].push_back(json_number(rep.values[i]));
    out.result["errors"].push_back(json_number(rep.errors[i]));
    csv.add({num(rep.s_grid[i]), num(rep.values[i]), num(rep.errors[i]), rep.divergent[i] ? "1" : "0"});
  }
  out.csv = csv;
  Table t({"verdict", "D_hat", "argmax_s", "low_slope", "high_slope"});
  t.add({to_string(rep.verdict), num(rep.D_hat), num(rep.argmax_s), num(rep.low_slope), num(rep.high_slope)});
  out.summary = t;
  out.notes.push_back(rep.reason);
  // A verdict, bounded or not, is a finding rather than a failure.
  out.pass = true;
  return out;
}

Outcome decompose_command(const RunConfig& cfg) {
  const auto f = load_grid(cfg);
  if (f.support_cells() == 0) throw UsageError(kInvalidInput, "the input function is identically zero");
  const auto dec = decompose(f);
  const auto r12 = verify_r1_r2(dec);
  std::optional<double> budget;
  if (cfg.has("alpha-budget")) budget = cfg.number("alpha-budget");
  const auto r3 = verify_r3(dec, budget);

  Outcome out;
  json molecules = json::array();
  Csv csv({"index", "sign", "a_lo", "a_hi", "level_cells", "l1", "tv", "ratio"});
  Table table({"index", "sign", "a_lo", "a_hi", "level_cells", "ratio"});
  for (std::size_t i = 0; i < dec.molecules.size(); ++i) {
    const auto& m = dec.molecules[i];
    const double l1 = lp_norm(m.layer, 1.0);
    const double tv = total_variation(m.layer);
    molecules.push_back({{"index", i},
                         {"sign", m.sign},
                         {"a_lo", m.a_lo},
                         {"a_hi", m.a_hi},
                         {"level_cells", m.level_cells},
                         {"level_measure", m.level_measure},
                         {"l1", l1},
                         {"tv", tv},
                         {"ratio", r3.ratios[i]}});
    csv.add({std::to_string(i), std::to_string(m.sign), num(m.a_lo), num(m.a_hi), std::to_string(m.level_cells),
             num(l1), num(tv), num(r3.ratios[i])});
    table.add({std::to_string(i), m.sign > 0 ? "+" : "-", num(m.a_lo), num(m.a_hi), std::to_string(m.level_cells),
               num(r3.ratios[i])});
  }
  out.result["source"] = grid_header(f);
  out.result["molecules"] = molecules;
  out.result["r1_r2"] = {{"pass", r12.pass},
                         {"reconstruction_exact", r12.reconstruction_exact},
                         {"max_cell_error", r12.max_cell_error},
                         {"l1_relative_error", r12.l1_relative_error},
                         {"tv_relative_error", r12.tv_relative_error},
                         {"l1_additive", r12.l1_additive},
                         {"tv_additive", r12.tv_additive},
                         {"halving", r12.halving},
                         {"count_within_bound", r12.count_within_bound},
                         {"positive_count", r12.positive_count},
                         {"negative_count", r12.negative_count},
                         {"positive_bound", r12.positive_bound},
                         {"negative_bound", r12.negative_bound},
                         {"offending", r12.offending ? json(*r12.offending) : json(nullptr)},
                         {"detail", r12.detail}};
  out.result["r3"] = {{"pass", r3.pass},
                      {"alpha_observed", r3.alpha_observed},
                      {"c_iso", r3.c_iso},
                      {"budget", r3.budget}};
  out.pass = r12.pass && r3.pass;

  if (cfg.flag("estimates")) {
    if (!cfg.has("phi") || !cfg.has("psi")) throw UsageError(kInvalidInput, "--estimates needs --phi and --psi");
    SufficiencyOptions opt;
    opt.besov = besov_config(cfg);
    const auto rec = sufficiency_molecule_estimates(f, parse_young_spec(cfg.text("phi")),
                                                    parse_weight_spec(cfg.text("psi")), opt);
    out.result["estimates"] = rec.to_json();
    out.pass = out.pass && rec.pass;
  } else if (cfg.has("phi") || cfg.has("psi")) {
    throw UsageError(kConflict, "--phi/--psi only apply together with --estimates");
  }

  const auto dir = cfg.text("export");
  if (!dir.empty()) {
    const auto format = cfg.text("export-format");
    if (format != "csv" && format != "bolg") throw UsageError(kInvalidInput, "--export-format must be csv or bolg");
    std::filesystem::create_directories(dir);
    json manifest = {{"schema", kSchema}, {"source", grid_header(f)}, {"molecules", json::array()}};
    for (std::size_t i = 0; i < dec.molecules.size(); ++i) {
      const auto& m = dec.molecules[i];
      std::ostringstream name;
      name << "molecule_" << std::setw(3) << std::setfill('0') << i << "." << format;
      write_grid(std::filesystem::path(dir) / name.str(), m.layer);
      manifest["molecules"].push_back({{"index", i},
                                       {"file", name.str()},
                                       {"sign", m.sign},
                                       {"a_lo", m.a_lo},
                                       {"a_hi", m.a_hi},
                                       {"level_cells", m.level_cells}});
    }
    std::ofstream mf(std::filesystem::path(dir) / "manifest.json");
    mf << manifest.dump(2) << "\n";
  }

  out.csv = csv;
  out.summary = table;
  out.notes.push_back("r1/r2 " + std::string(r12.pass ? "pass" : "fail: " + r12.detail) + ", r3 alpha_observed " +
                      num(r3.alpha_observed) + " vs budget " + num(r3.budget));
  return out;
}

Outcome norms_command(const RunConfig& cfg) {
  const auto f = load_grid(cfg);
  const auto nb = norms(f, cfg.number("p"));
  Outcome out;
  out.result = {{"grid", grid_header(f)}, {"l1", nb.l1}, {"linf", nb.linf}, {"p", nb.p},
                {"lp", nb.lp},            {"tv", nb.tv}, {"bv", nb.bv()}};
  Table table({"norm", "value"});
  table.add({"L1", num(nb.l1)});
  table.add({"Linf", num(nb.linf)});
  table.add({"L" + num(nb.p), num(nb.lp)});
  table.add({"TV", num(nb.tv)});
  table.add({"BV", num(nb.bv())});

  if (cfg.has("psi") && !cfg.has("phi")) throw UsageError(kInvalidInput, "--psi needs --phi");
  if (cfg.has("phi")) {
    const auto phi = parse_young_spec(cfg.text("phi"));
    const auto lux = luxemburg_norm(f, phi);
    out.result["luxemburg"] = {{"phi", phi.describe()},
                               {"norm", lux.norm},
                               {"iterations", lux.iterations},
                               {"residual", lux.residual}};
    table.add({"Luxemburg", num(lux.norm)});

    if (f.support_cells() > 0) {
      const auto points = cfg.integer("curve-points");
      if (points < 2) throw UsageError(kInvalidInput, "--curve-points must be >= 2");
      const double h = f.spacing();
      const double hi = std::max(2.0 * f.support_diameter(), 2.0 * h);
      const auto ts = log_grid(h, hi, static_cast<std::size_t>(points));
      const auto curve = modulus_curve(f, phi, ts);
      out.result["modulus"] = {{"t", curve.ts}, {"omega", curve.values}};
      Csv csv({"t", "omega"});
      for (std::size_t i = 0; i < curve.ts.size(); ++i) csv.add({num(curve.ts[i]), num(curve.values[i])});
      out.csv = csv;
    }

    if (cfg.has("psi")) {
      const auto psi = parse_weight_spec(cfg.text("psi"));
      const auto b = besov_orlicz_norm(f, phi, psi, besov_config(cfg));
      out.result["besov"] = besov_json(b);
      out.result["besov"]["psi"] = psi.describe();
      if (nb.bv() > 0.0) out.result["besov"]["ratio_to_bv"] = b.total / nb.bv();
      out.pass = b.converged;
      table.add({"Besov-Orlicz", num(b.total)});
      if (!b.converged) out.notes.push_back("Besov-Orlicz integral did not converge within --rel-tol");
    }
  }
  out.summary = table;
  return out;
}

Outcome example5_command(const RunConfig& cfg) {
  const double alpha = cfg.number("alpha");
  const double limit = std::exp(-2.0);
  if (!(alpha > 0.0) || !(alpha < limit)) {
    throw UsageError(kInvalidInput, "--alpha must satisfy 0 < alpha < e^-2 = " + num(limit) + ", got " + num(alpha));
  }
  const auto params = Section5Params::make(alpha);
  std::vector<double> s;
  if (cfg.has("s-list")) {
    s = cfg.numbers("s-list");
    for (const double v : s) {
      if (!(v >= params.r)) throw UsageError(kInvalidInput, "--s-list values must be >= r = " + num(params.r));
    }
  } else {
    const auto points = cfg.integer("s-points");
    const double factor = cfg.number("s-max-factor");
    if (points < 2) throw UsageError(kInvalidInput, "--s-points must be >= 2");
    if (!(factor > 1.0)) throw UsageError(kInvalidInput, "--s-max-factor must exceed 1");
    s = log_grid(params.r, factor * params.r, static_cast<std::size_t>(points));
  }
  const auto nodes = cfg.integer("quad-nodes");
  if (nodes < 2) throw UsageError(kInvalidInput, "--quad-nodes must be >= 2");
  const double u_max = cfg.number("u-max");
  if (!(u_max > 0.0)) throw UsageError(kInvalidInput, "--u-max must be positive");

  const auto first = section5_first_bound(alpha, s);
  const auto second = section5_second_bound(alpha, params.r, u_max, static_cast<std::size_t>(nodes));

  Outcome out;
  json rows = json::array();
  Csv csv({"s", "first_bound", "intermediate"});
  Table table({"s/r", "first_bound", "intermediate", "< 2"});
  double max_first = 0.0;
  bool first_pass = true;
  for (const auto& b : first) {
    rows.push_back({{"s", b.s}, {"value", b.value}, {"intermediate", b.intermediate}, {"pass", b.pass}});
    csv.add({num(b.s), num(b.value), num(b.intermediate)});
    table.add({num(b.s / params.r), num(b.value), num(b.intermediate), b.pass ? "yes" : "no"});
    max_first = std::max(max_first, b.value);
    first_pass = first_pass && b.pass;
  }
  out.result = {{"alpha", alpha},
                {"r", params.r},
                {"first", rows},
                {"max_first", max_first},
                {"second",
                 {{"s", second.s},
                  {"value", second.value},
                  {"value_doubled", second.value_doubled},
                  {"relative_change", second.relative_change},
                  {"u_max", second.u_max},
                  {"remainder", second.remainder},
                  {"remainder_doubled", second.remainder_doubled},
                  {"converged", second.converged}}}};
  out.pass = first_pass && second.converged;
  out.csv = csv;
  out.summary = table;
  out.notes.push_back("second term at s = r: " + num(second.value) + " (relative change " +
                      num(second.relative_change) + " when the window doubles)");
  return out;
}

Outcome record_outcome(const ExperimentRecord& rec) {
  Outcome out;
  out.result = rec.to_json();
  out.pass = rec.pass;
  for (const auto& w : rec.warnings) out.notes.push_back("warning: " + w);
  return out;
}

Outcome necessity_command(const RunConfig& cfg) {
  const auto phi = parse_young_spec(cfg.text("phi"));
  const auto psi = parse_weight_spec(cfg.text("psi"));
  NecessityOptions opt;
  const auto symdiff = cfg.text("symdiff");
  if (symdiff == "lemma6") {
    opt.symdiff = SymdiffModel::lemma6;
  } else if (symdiff == "exact") {
    opt.symdiff = SymdiffModel::exact;
  } else {
    throw UsageError(kInvalidInput, "--symdiff must be lemma6 or exact");
  }
  const auto expected = cfg.text("expected");
  if (expected == "auto") {
    opt.expected = Verdict::inconclusive;
  } else if (expected == "bounded") {
    opt.expected = Verdict::bounded;
  } else if (expected == "unbounded") {
    opt.expected = Verdict::unbounded;
  } else {
    throw UsageError(kInvalidInput, "--expected must be auto, bounded or unbounded");
  }
  opt.grid_h = cfg.number("grid-h");
  opt.variation_budget = cfg.number("variation-budget");
  opt.growth_budget = cfg.number("growth-budget");
  const auto rec = necessity_ball_experiment(phi, psi, dimension(cfg), cfg.numbers("radii"), opt);

  auto out = record_outcome(rec);
  Csv csv({"r", "bv", "besov_lower", "ratio", "divergent"});
  Table table({"r", "bv", "besov_lower", "ratio", "divergent"});
  for (const auto& row : rec.measured.at("rows")) {
    std::vector<std::string> cells{cell(row, "r"), cell(row, "bv"), cell(row, "besov_lower"), cell(row, "ratio"),
                                   cell(row, "divergent")};
    csv.add(cells);
    table.add(cells);
  }
  out.csv = csv;
  out.summary = table;
  out.notes.push_back("spread " + cell(rec.measured, "spread") + ", growth " + cell(rec.measured, "growth") +
                      ", condition verdict " + cell(rec.measured, "condition_verdict"));
  return out;
}

Outcome lemma6_command(const RunConfig& cfg) {
  Lemma6Options opt;
  const auto samples = cfg.integer("samples");
  if (samples < 0) throw UsageError(kInvalidInput, "--samples must be >= 0");
  opt.samples = cfg.flag("exact-only") ? 0 : static_cast<std::uint64_t>(samples);
  opt.seed = static_cast<std::uint64_t>(cfg.integer("seed"));
  const auto rec = lemma6_check(dimension(cfg), cfg.number("r"), cfg.numbers("offsets"), opt);

  auto out = record_outcome(rec);
  const std::vector<std::string> cols{"offset", "bound", "exact", "monte_carlo", "standard_error"};
  Csv csv(cols);
  Table table(cols);
  for (const auto& row : rec.measured.at("rows")) {
    std::vector<std::string> cells;
    for (const auto& c : cols) cells.push_back(cell(row, c.c_str()));
    csv.add(cells);
    table.add(cells);
  }
  out.csv = csv;
  out.summary = table;
  return out;
}

Outcome sobolev_command(const RunConfig& cfg) {
  const int d = dimension(cfg);
  std::vector<GridFunction> corpus;
  if (cfg.has("input")) {
    for (const auto& path : cfg.texts("input")) {
      if (!std::filesystem::exists(path)) throw UsageError(kInvalidInput, "input file " + path + " does not exist");
      auto f = read_grid(path);
      if (f.dim() != d) throw UsageError(kConflict, path + " has dim " + std::to_string(f.dim()) + ", not --dim");
      corpus.push_back(std::move(f));
    }
  } else {
    if (d != 2) throw UsageError(kInvalidInput, "the built-in corpus is two-dimensional; pass --input for d != 2");
    CorpusOptions opt;
    const auto count = cfg.integer("count");
    const auto extent = cfg.integer("max-extent");
    if (count < 1) throw UsageError(kInvalidInput, "--count must be >= 1");
    if (extent < 2) throw UsageError(kInvalidInput, "--max-extent must be >= 2");
    opt.count = static_cast<std::size_t>(count);
    opt.seed = static_cast<std::uint64_t>(cfg.integer("seed"));
    opt.max_extent = static_cast<std::size_t>(extent);
    opt.min_extent = std::min<std::size_t>(opt.min_extent, opt.max_extent);
    corpus = random_piecewise_constant_corpus(opt);
  }
  const auto rec = sobolev_check(corpus, d);
  auto out = record_outcome(rec);
  Csv csv({"name", "ratio", "ratio_refined", "change"});
  for (const auto& row : rec.measured.at("rows")) {
    csv.add({cell(row, "name"), cell(row, "ratio"), cell(row, "ratio_refined"), cell(row, "change")});
  }
  out.csv = csv;
  Table table({"items", "C_grid", "worst_change", "budget"});
  table.add({std::to_string(corpus.size()), cell(rec.measured, "C_grid"), cell(rec.measured, "worst_change"),
             num(rec.budget)});
  out.summary = table;
  return out;
}

Outcome report_command(const RunConfig& cfg) {
  Outcome out;
  json rows = json::array();
  Table table({"file", "schema", "command", "pass"});
  Csv csv({"file", "command", "pass"});
  for (const auto& path : cfg.texts("input")) {
    std::ifstream in(path);
    if (!in) throw UsageError(kInvalidInput, "cannot open report " + path);
    json r;
    try {
      r = json::parse(in);
    } catch (const json::parse_error& e) {
      throw UsageError(kInvalidInput, path + " is not valid JSON: " + e.what());
    }
    if (!r.is_object() || !r.contains("schema") || r["schema"] != kSchema || !r.contains("command") ||
        !r.contains("pass") || !r["pass"].is_boolean()) {
      throw UsageError(kInvalidInput, path + " is not a " + std::string(kSchema) + " report");
    }
    const bool pass = r["pass"].get<bool>();
    const auto command = r["command"].get<std::string>();
    rows.push_back({{"file", path}, {"command", command}, {"pass", pass}});
    table.add({path, kSchema, command, pass ? "pass" : "FAIL"});
    csv.add({path, command, pass ? "1" : "0"});
    out.pass = out.pass && pass;
  }
  out.result = {{"reports", rows}, {"all_pass", out.pass}};
  out.summary = table;
  out.csv = csv;
  return out;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto jobs = cfg.has("jobs") ? cfg.integer("jobs") : 0;
  set_jobs(jobs > 0 ? static_cast<std::size_t>(jobs) : std::max(1u, std::thread::hardware_concurrency()));

  Outcome o;
  if (cfg.command == "check-condition") {
    o = check_condition(cfg);
  } else if (cfg.command == "decompose") {
    o = decompose_command(cfg);
  } else if (cfg.command == "norms") {
    o = norms_command(cfg);
  } else if (cfg.command == "example5") {
    o = example5_command(cfg);
  } else if (cfg.command == "necessity") {
    o = necessity_command(cfg);
  } else if (cfg.command == "lemma6") {
    o = lemma6_command(cfg);
  } else if (cfg.command == "sobolev") {
    o = sobolev_command(cfg);
  } else if (cfg.command == "report") {
    o = report_command(cfg);
  } else {
    throw UsageError(kUsage, "unknown command '" + cfg.command + "'");
  }

  const json report = {
      {"schema", kSchema}, {"command", cfg.command}, {"config", cfg.provenance()}, {"result", o.result}, {"pass", o.pass}};
  const auto text = report.dump(2) + "\n";
  const auto output = cfg.text("output");
  if (output.empty()) {
    out << text;
  } else {
    std::ofstream f(output, std::ios::binary);
    if (!f) throw UsageError(kInvalidInput, "cannot write " + output);
    f << text;
  }
  const auto csv_path = cfg.text("csv");
  if (!csv_path.empty()) {
    if (!o.csv) throw UsageError(kInvalidInput, cfg.command + " has no CSV side table");
    o.csv->write(csv_path);
  }
  if (!cfg.flag("quiet")) {
    err << cfg.command << ": " << (o.pass ? "pass" : "FAIL") << "\n";
    if (o.summary) o.summary->print(err);
    for (const auto& n : o.notes) err << n << "\n";
  }
  return o.pass ? kPass : kAssertionFailed;
}

}  // namespace bol::cli
