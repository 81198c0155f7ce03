#pragma once

#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace bol::cli {

enum ExitCode : int {
  kPass = 0,
  kAssertionFailed = 1,
  kUsage = 2,
  kInvalidInput = 3,
  kConflict = 4,
  kResourceGuard = 5,
};

inline constexpr const char* kSchema = "bol/1";

/// Looks up an environment variable; the default reads the process
/// environment.
using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;
EnvLookup process_env();

/// A fully resolved command line. `values` holds every option of the command
/// with its type applied (numbers, strings, lists, booleans); options with no
/// default that were not given are absent. `sources` records where each value
/// came from: "default", "config", "env" or "flag".
struct RunConfig {
  std::string command;
  nlohmann::json values = nlohmann::json::object();
  std::map<std::string, std::string> sources;

  bool has(const std::string& key) const;
  double number(const std::string& key) const;
  long long integer(const std::string& key) const;
  std::string text(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::vector<double> numbers(const std::string& key) const;
  std::vector<std::string> texts(const std::string& key) const;
  /// The values that describe the computation (no output paths, job count
  /// or verbosity), as embedded in reports.
  nlohmann::json provenance() const;
};

/// Raised for usage errors; carries the exit code.
class UsageError : public std::runtime_error {
 public:
  UsageError(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
  int code() const noexcept { return code_; }

 private:
  int code_;
};

const std::vector<std::string>& commands();

/// Parses argv (argv[0] is the program name) and merges config file <
/// environment (BOL_<KEY>) < flags. Throws UsageError. Returns nullopt when
/// help was requested (and printed to `out`).
std::optional<RunConfig> parse_args(const std::vector<std::string>& args, const EnvLookup& env, std::ostream& out);

/// Executes a parsed config: writes the JSON report (to the --output file or
/// `out`), CSV side tables and the summary table (to `err` unless --quiet).
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args + run with every error mapped to its exit code.
int main(const std::vector<std::string>& args, const EnvLookup& env, std::ostream& out, std::ostream& err);

}  // namespace bol::cli
