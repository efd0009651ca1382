#pragma once

// Config-driven verification runs and their JSON reports.

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "wittdeform/cohomlab.hpp"

namespace wd {

inline constexpr int kConfigVersion = 1;
inline constexpr int kReportVersion = 1;

/// Check ids a scenario may list, in report order.
const std::vector<std::string>& check_ids();

struct SuiteConfig {
  std::uint64_t seed = 0;
  std::string cache_dir;
  Budgets budgets;
  double time_seconds = 0;  // 0: unlimited
  std::map<unsigned, unsigned> max_witt_length;
  std::string output = "json";
  std::vector<ScenarioSpec> scenarios;
  nlohmann::json echo;  // the parsed file, for the report
};

/// Parses and shape-checks a config. MalformedSpec / ParseError / Io.
SuiteConfig parse_config(const nlohmann::json& j);
SuiteConfig load_config(const std::string& path);

/// Applies max_witt_length and the cache directory (the environment variable
/// wins over the config).
void apply_settings(const SuiteConfig& cfg);

/// Builds a scenario; ring "cyclotomic" goes through cyclotomic_scenario.
Scenario build_scenario(const ScenarioSpec& s);

/// Builds every scenario before running anything; the first error is
/// rethrown with the scenario id prepended.
std::vector<Scenario> validate(const SuiteConfig& cfg);

/// Runs one check. BudgetExceeded becomes inconclusive; other errors fail.
Verdict run_check(const std::string& id, const Scenario& scn, const Budgets& b);

struct RunOptions {
  std::vector<std::string> only;  // empty: every listed check
  bool timings = false;           // timings make the report run-dependent
};

/// Report object; byte-identical across runs unless timings are requested.
nlohmann::json run_suite(const SuiteConfig& cfg, const std::vector<Scenario>& scenarios, const RunOptions& opt);

std::string report_markdown(const nlohmann::json& report);

/// Number of fail verdicts in a report.
std::size_t report_failures(const nlohmann::json& report);

}  // namespace wd
