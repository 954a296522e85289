#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "wlab/checker.hpp"

namespace wlab::cli {

/// Schema violation; the message starts with a JSON pointer.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Check { Main, Sharper, Conjecture, Monotonicity, Center };

struct CaseConfig {
  Problem problem;
  std::vector<Check> checks;
};

struct RunConfig {
  std::vector<CaseConfig> cases;
};

struct SweepParameter {
  std::string path;  // e.g. "domain.aspect" or "weight.params[1]"
  std::vector<double> values;
};

struct SweepMember {
  std::vector<double> values;  // one per parameter
  CaseConfig config;
};

struct SweepConfig {
  std::vector<SweepParameter> parameters;
  std::vector<SweepMember> members;
};

/// Relative paths (mesh files) resolve against base_dir.
RunConfig parse_run_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);
SweepConfig parse_sweep_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);
/// One case object; pointer prefixes error messages.
CaseConfig parse_case(const nlohmann::json& doc, const std::string& pointer,
                      const std::filesystem::path& base_dir);

struct CaseOutcome {
  InequalityReport report;
  std::optional<RadialSolution> ball;  // for profile output
};

/// Never throws for solver failures; they are recorded in the report.
CaseOutcome run_case(const CaseConfig& config);

/// Runs cases on `jobs` worker threads; results sorted by case id.
std::vector<CaseOutcome> run_cases(const std::vector<CaseConfig>& cases, int jobs,
                                   std::ostream* log);

nlohmann::ordered_json report_to_json(const InequalityReport& report);

/// reports.jsonl, summary.csv and profile_<id>.csv.
void write_run_outputs(const std::filesystem::path& out_dir,
                       const std::vector<CaseOutcome>& outcomes);

/// 0 all pass, 2 any fail, 1 any error.
int exit_code(const std::vector<CaseOutcome>& outcomes);

struct CommandOptions {
  std::filesystem::path config;
  std::filesystem::path out_dir = ".";
  int jobs = 1;
  bool verbose = false;
};

/// The `run` and `sweep` subcommands. Configuration problems are reported on
/// err and give exit code 1.
int run_command(const CommandOptions& opts, std::ostream& log, std::ostream& err);
int sweep_command(const CommandOptions& opts, std::ostream& log, std::ostream& err);

}  // namespace wlab::cli
