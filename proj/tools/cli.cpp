#include "cli.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>

#include <CLI11.hpp>

#include "bol/errors.hpp"

namespace bol::cli {

namespace {

using nlohmann::json;

enum class Type { text, path, integer, number, numbers, texts, flag };

struct OptionSpec {
  std::string name;
  Type type;
  json fallback;  // null: no default
  std::string help;
  bool provenance = true;
};

struct CommandSpec {
  std::string name;
  std::string help;
  std::vector<OptionSpec> options;
  std::vector<std::string> required;
  std::vector<std::pair<std::string, std::string>> conflicts;
};

std::vector<OptionSpec> global_options() {
  return {
      {"config", Type::path, nullptr, "JSON config file (lowest precedence)", false},
      {"output", Type::path, "", "write the JSON report here instead of stdout", false},
      {"csv", Type::path, "", "write the side table as CSV", false},
      {"jobs", Type::integer, 0, "worker threads (0: available parallelism)", false},
      {"quiet", Type::flag, false, "no summary table on stderr", false},
  };
}

std::vector<OptionSpec> quadrature_options(double rel_tol, std::size_t nodes) {
  return {
      {"tmin", Type::number, nullptr, "lower end of the integration window (default: grid spacing)"},
      {"tmax", Type::number, nullptr, "upper end of the integration window (default: 10 x support diameter)"},
      {"nodes", Type::integer, static_cast<long long>(nodes), "quadrature nodes"},
      {"rel-tol", Type::number, rel_tol, "accepted relative size of the unresolved tails"},
  };
}

std::vector<CommandSpec> build_commands() {
  std::vector<CommandSpec> out;

  out.push_back({"check-condition",
                 "evaluate the two-integral condition on a log grid of s and classify it",
                 {
                     {"phi", Type::text, nullptr, "Young function spec, e.g. power:p=1.3"},
                     {"psi", Type::text, nullptr, "weight spec, e.g. powerweight:theta=0.5385"},
                     {"dim", Type::integer, nullptr, "dimension d"},
                     {"smin", Type::number, 1e-6, "smallest s"},
                     {"smax", Type::number, 1e12, "largest s"},
                     {"points", Type::integer, 97, "number of log-spaced s values"},
                     {"quad-nodes", Type::integer, 2048, "trapezoid nodes per window"},
                     {"u-max", Type::number, 60.0, "initial truncation of the improper integral in ln(t/s)"},
                     {"rel-tol", Type::number, 1e-9, "accepted relative size of the tail remainder"},
                     {"lower-limit", Type::number, 0.0, "lower limit of the first integral"},
                 },
                 {"phi", "psi", "dim"},
                 {}});

  CommandSpec dec{"decompose",
                  "split a grid function into molecules and verify the decomposition properties",
                  {
                      {"input", Type::path, nullptr, "grid file (CSV or .bolg)"},
                      {"dim", Type::integer, nullptr, "dimension of a headerless CSV"},
                      {"spacing", Type::number, 1.0, "cell size of a headerless CSV"},
                      {"export", Type::path, "", "directory for the molecules and manifest.json", false},
                      {"export-format", Type::text, "csv", "molecule file format: csv or bolg"},
                      {"alpha-budget", Type::number, nullptr, "override the molecule constant budget"},
                      {"estimates", Type::flag, false, "also check the per-molecule modulus estimates"},
                      {"phi", Type::text, nullptr, "Young function spec (with --estimates)"},
                      {"psi", Type::text, nullptr, "weight spec (with --estimates)"},
                  },
                  {"input"},
                  {}};
  for (auto& o : quadrature_options(1e-2, 512)) dec.options.push_back(o);
  out.push_back(dec);

  CommandSpec norms{"norms",
                    "Lp, BV, Luxemburg and Besov-Orlicz norms of a grid function",
                    {
                        {"input", Type::path, nullptr, "grid file (CSV or .bolg)"},
                        {"dim", Type::integer, nullptr, "dimension of a headerless CSV"},
                        {"spacing", Type::number, 1.0, "cell size of a headerless CSV"},
                        {"p", Type::number, 2.0, "exponent of the reported Lp norm"},
                        {"phi", Type::text, nullptr, "Young function spec"},
                        {"psi", Type::text, nullptr, "weight spec (needs --phi)"},
                        {"curve-points", Type::integer, 33, "points of the modulus table"},
                    },
                    {"input"},
                    {}};
  for (auto& o : quadrature_options(1e-2, 512)) norms.options.push_back(o);
  out.push_back(norms);

  out.push_back({"example5",
                 "both condition terms for the three-piece Young function",
                 {
                     {"alpha", Type::number, 0.1, "shape parameter, 0 < alpha < e^-2"},
                     {"s-points", Type::integer, 20, "log-spaced s values in [r, s-max-factor r]"},
                     {"s-max-factor", Type::number, 1e3, "largest s as a multiple of r"},
                     {"s-list", Type::numbers, nullptr, "explicit s values (each >= r)"},
                     {"u-max", Type::number, 3840.0, "window of the second integral in ln(t/s)"},
                     {"quad-nodes", Type::integer, 2048, "trapezoid nodes per window"},
                 },
                 {},
                 {{"s-list", "s-points"}, {"s-list", "s-max-factor"}}});

  out.push_back({"necessity",
                 "Besov-Orlicz versus BV norms of ball indicators",
                 {
                     {"phi", Type::text, nullptr, "Young function spec"},
                     {"psi", Type::text, nullptr, "weight spec"},
                     {"dim", Type::integer, nullptr, "dimension d"},
                     {"radii", Type::numbers, json::array({1.0, 0.5, 0.25, 0.125}), "strictly descending radii"},
                     {"symdiff", Type::text, "lemma6", "symmetric difference model: lemma6 or exact"},
                     {"grid-h", Type::number, 0.0, "grid spacing of the cross-check (0: off)"},
                     {"expected", Type::text, "auto", "condition verdict: auto, bounded or unbounded"},
                     {"variation-budget", Type::number, 0.10, "accepted ratio spread for a bounded pair"},
                     {"growth-budget", Type::number, 4.0, "required ratio growth for an unbounded pair"},
                 },
                 {"phi", "psi", "dim"},
                 {}});

  out.push_back({"lemma6",
                 "volume of the symmetric difference of two shifted balls",
                 {
                     {"dim", Type::integer, nullptr, "dimension d"},
                     {"r", Type::number, 1.0, "ball radius"},
                     {"offsets", Type::numbers, json::array({0.1, 0.5, 0.9}), "offsets a (centres 2a apart)"},
                     {"samples", Type::integer, 10'000'000, "Monte Carlo samples per offset"},
                     {"seed", Type::integer, 0x5EED, "Monte Carlo seed"},
                     {"exact-only", Type::flag, false, "skip Monte Carlo"},
                 },
                 {"dim"},
                 {{"exact-only", "samples"}}});

  out.push_back({"sobolev",
                 "max ||f||_{d/(d-1)} / TV(f) and its stability under refinement",
                 {
                     {"dim", Type::integer, 2, "dimension d"},
                     {"input", Type::texts, nullptr, "grid files (default: the seeded random corpus)"},
                     {"count", Type::integer, 100, "corpus size"},
                     {"seed", Type::integer, 20240601, "corpus seed"},
                     {"max-extent", Type::integer, 128, "largest grid extent of the corpus"},
                 },
                 {},
                 {{"input", "count"}, {"input", "seed"}, {"input", "max-extent"}}});

  out.push_back({"report",
                 "summarize report files and check that they all passed",
                 {
                     {"input", Type::texts, nullptr, "report files"},
                 },
                 {"input"},
                 {}});

  for (auto& c : out) {
    for (auto& o : global_options()) c.options.push_back(o);
  }
  return out;
}

const std::vector<CommandSpec>& command_specs() {
  static const auto specs = build_commands();
  return specs;
}

const CommandSpec* find_command(const std::string& name) {
  for (const auto& c : command_specs()) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

[[noreturn]] void invalid(const std::string& what) { throw UsageError(kInvalidInput, what); }

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = s.find(',', start);
    out.push_back(trim(s.substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_number(const std::string& key, const std::string& text) {
  const auto t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
    invalid("--" + key + ": '" + text + "' is not a finite number");
  }
  return v;
}

long long parse_integer(const std::string& key, const std::string& text) {
  auto t = trim(text);
  int base = 10;
  if (t.size() > 2 && t[0] == '0' && (t[1] == 'x' || t[1] == 'X')) {
    t = t.substr(2);
    base = 16;
  }
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v, base);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    invalid("--" + key + ": '" + text + "' is not an integer");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  std::string t = trim(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
  if (t == "0" || t == "false" || t == "no" || t == "off") return false;
  invalid("--" + key + ": '" + text + "' is not a boolean");
}

// Typed value from a command-line or environment string.
json from_text(const OptionSpec& o, const std::string& text) {
  switch (o.type) {
    case Type::text:
    case Type::path:
      if (text.empty()) invalid("--" + o.name + " needs a value");
      return text;
    case Type::integer:
      return parse_integer(o.name, text);
    case Type::number:
      return parse_number(o.name, text);
    case Type::numbers: {
      json arr = json::array();
      for (const auto& item : split_commas(text)) arr.push_back(parse_number(o.name, item));
      return arr;
    }
    case Type::texts: {
      json arr = json::array();
      for (const auto& item : split_commas(text)) {
        if (item.empty()) invalid("--" + o.name + ": empty list item");
        arr.push_back(item);
      }
      return arr;
    }
    case Type::flag:
      return parse_bool(o.name, text);
  }
  return nullptr;
}

// Typed value from a config file entry.
json from_json(const OptionSpec& o, const json& v) {
  if (v.is_string()) return from_text(o, v.get<std::string>());
  switch (o.type) {
    case Type::text:
    case Type::path:
      break;
    case Type::integer:
      if (v.is_number_integer()) return v.get<long long>();
      break;
    case Type::number:
      if (v.is_number() && std::isfinite(v.get<double>())) return v.get<double>();
      break;
    case Type::numbers:
      if (v.is_number()) return json::array({v.get<double>()});
      if (v.is_array() && !v.empty()) {
        json arr = json::array();
        for (const auto& x : v) {
          if (!x.is_number()) invalid("config key '" + o.name + "': expected a list of numbers");
          arr.push_back(x.get<double>());
        }
        return arr;
      }
      break;
    case Type::texts:
      if (v.is_array() && !v.empty()) {
        json arr = json::array();
        for (const auto& x : v) {
          if (!x.is_string()) invalid("config key '" + o.name + "': expected a list of strings");
          arr.push_back(x);
        }
        return arr;
      }
      break;
    case Type::flag:
      if (v.is_boolean()) return v.get<bool>();
      break;
  }
  invalid("config key '" + o.name + "' has the wrong type");
}

std::string env_name(const std::string& key) {
  std::string out = "BOL_";
  for (const char c : key) out += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

json read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot open config file " + path);
  try {
    auto j = json::parse(in);
    if (!j.is_object()) invalid("config file " + path + " must hold a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    invalid("config file " + path + " is not valid JSON: " + e.what());
  }
}

std::string usage_text(const CLI::App& app) {
  for (const auto* sub : app.get_subcommands()) return sub->help();
  return app.help();
}

}  // namespace

EnvLookup process_env() {
  return [](const std::string& name) -> std::optional<std::string> {
    if (const char* v = std::getenv(name.c_str())) return std::string(v);
    return std::nullopt;
  };
}

const std::vector<std::string>& commands() {
  static const auto names = [] {
    std::vector<std::string> out;
    for (const auto& c : command_specs()) out.push_back(c.name);
    return out;
  }();
  return names;
}

bool RunConfig::has(const std::string& key) const { return values.contains(key) && !values.at(key).is_null(); }

double RunConfig::number(const std::string& key) const { return values.at(key).get<double>(); }

long long RunConfig::integer(const std::string& key) const { return values.at(key).get<long long>(); }

std::string RunConfig::text(const std::string& key) const { return values.at(key).get<std::string>(); }

bool RunConfig::flag(const std::string& key) const { return values.at(key).get<bool>(); }

std::vector<double> RunConfig::numbers(const std::string& key) const {
  return values.at(key).get<std::vector<double>>();
}

std::vector<std::string> RunConfig::texts(const std::string& key) const {
  return values.at(key).get<std::vector<std::string>>();
}

nlohmann::json RunConfig::provenance() const {
  json out = json::object();
  const auto* spec = find_command(command);
  for (const auto& o : spec->options) {
    if (o.provenance && has(o.name)) out[o.name] = values.at(o.name);
  }
  return out;
}

std::optional<RunConfig> parse_args(const std::vector<std::string>& args, const EnvLookup& env, std::ostream& out) {
  CLI::App app{"Besov-Orlicz and BV embedding experiments", "bol"};
  app.require_subcommand(0, 1);

  // Raw flag values per command; only the selected command's are read.
  std::map<std::string, std::map<std::string, std::string>> raw;
  std::map<std::string, std::map<std::string, std::vector<std::string>>> raw_lists;
  std::map<std::string, std::map<std::string, bool>> raw_flags;
  std::map<std::string, std::map<std::string, CLI::Option*>> handles;

  for (const auto& c : command_specs()) {
    auto* sub = app.add_subcommand(c.name, c.help);
    for (const auto& o : c.options) {
      CLI::Option* h = nullptr;
      const std::string flag = "--" + o.name;
      switch (o.type) {
        case Type::flag:
          h = sub->add_flag(flag, raw_flags[c.name][o.name], o.help);
          break;
        case Type::texts:
          h = sub->add_option(flag, raw_lists[c.name][o.name], o.help);
          break;
        default:
          h = sub->add_option(flag, raw[c.name][o.name], o.help);
          break;
      }
      handles[c.name][o.name] = h;
    }
  }

  if (args.size() < 2) {
    out << app.help();
    throw UsageError(kUsage, "no command given; expected one of: check-condition, decompose, norms, example5, "
                             "necessity, lemma6, sobolev, report");
  }
  const auto& first = args[1];
  if (first != "-h" && first != "--help" && !find_command(first)) {
    throw UsageError(kUsage, "unknown command '" + first + "'");
  }

  std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << usage_text(app);
    return std::nullopt;
  } catch (const CLI::ExtrasError& e) {
    throw UsageError(kUsage, e.what());
  } catch (const CLI::ParseError& e) {
    throw UsageError(kInvalidInput, e.what());
  }

  const auto* spec = find_command(first);
  RunConfig cfg;
  cfg.command = spec->name;
  const auto& h = handles[spec->name];

  // Layer 1: defaults.
  for (const auto& o : spec->options) {
    if (!o.fallback.is_null()) {
      cfg.values[o.name] = o.fallback;
      cfg.sources[o.name] = "default";
    }
  }

  // Layer 2: config file. The path itself may come from a flag or BOL_CONFIG.
  std::optional<std::string> config_path;
  if (h.at("config")->count()) {
    config_path = raw[spec->name]["config"];
  } else if (auto e = env(env_name("config"))) {
    config_path = *e;
  }
  if (config_path) {
    const auto file = read_config_file(*config_path);
    for (const auto& [key, value] : file.items()) {
      if (key == "command") {
        if (!value.is_string() || value.get<std::string>() != spec->name) {
          throw UsageError(kConflict, "config file is for command '" + value.dump() + "', not '" + spec->name + "'");
        }
        continue;
      }
      const auto it = std::find_if(spec->options.begin(), spec->options.end(),
                                   [&](const OptionSpec& o) { return o.name == key; });
      if (it == spec->options.end() || key == "config") {
        invalid("unknown config key '" + key + "' for command " + spec->name);
      }
      cfg.values[key] = from_json(*it, value);
      cfg.sources[key] = "config";
    }
    cfg.values["config"] = *config_path;
    cfg.sources["config"] = "flag";
  }

  // Layer 3: environment.
  for (const auto& o : spec->options) {
    if (o.name == "config") continue;
    if (auto e = env(env_name(o.name))) {
      cfg.values[o.name] = from_text(o, *e);
      cfg.sources[o.name] = "env";
    }
  }

  // Layer 4: flags.
  for (const auto& o : spec->options) {
    if (o.name == "config" || !h.at(o.name)->count()) continue;
    if (o.type == Type::flag) {
      cfg.values[o.name] = raw_flags[spec->name][o.name];
    } else if (o.type == Type::texts) {
      json arr = json::array();
      for (const auto& item : raw_lists[spec->name][o.name]) {
        for (const auto& part : split_commas(item)) {
          if (part.empty()) invalid("--" + o.name + ": empty list item");
          arr.push_back(part);
        }
      }
      cfg.values[o.name] = arr;
    } else {
      cfg.values[o.name] = from_text(o, raw[spec->name][o.name]);
    }
    cfg.sources[o.name] = "flag";
  }

  // Options the user set (anything but a default) that exclude each other.
  auto user_set = [&](const std::string& key) { return cfg.sources.count(key) && cfg.sources.at(key) != "default"; };
  for (const auto& [a, b] : spec->conflicts) {
    if (user_set(a) && user_set(b)) {
      throw UsageError(kConflict, "--" + a + " and --" + b + " cannot be combined");
    }
  }
  for (const auto& key : spec->required) {
    if (!cfg.has(key)) invalid(spec->name + ": missing required option --" + key);
  }
  if (cfg.has("jobs") && cfg.integer("jobs") < 0) invalid("--jobs must be >= 0");
  return cfg;
}

int main(const std::vector<std::string>& args, const EnvLookup& env, std::ostream& out, std::ostream& err) {
  try {
    const auto cfg = parse_args(args, env, out);
    if (!cfg) return kPass;
    return run(*cfg, out, err);
  } catch (const UsageError& e) {
    err << "bol: " << e.what() << "\n";
    return e.code();
  } catch (const ResourceGuardError& e) {
    err << "bol: resource guard '" << e.guard() << "' exceeded: " << e.what() << "\n";
    return kResourceGuard;
  } catch (const DomainError& e) {
    err << "bol: invalid input: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const DivergenceError& e) {
    err << "bol: integral diverges at the " << e.end() << ": " << e.what() << "\n";
    return kAssertionFailed;
  } catch (const std::exception& e) {
    err << "bol: " << e.what() << "\n";
    return kAssertionFailed;
  }
}

}  // namespace bol::cli
