#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "nsledger/dynamics.hpp"
#include "nsledger/energy_ledger.hpp"
#include "nsledger/synthetic_fields.hpp"

namespace nsledger {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitResolutionError = 3;

inline constexpr const char* kScenarioSchema = "nsledger-scenario/1";

struct ScenarioConfig {
  std::string name = "scenario";
  FieldSpec field;
  // Initial data read from a snapshot file instead of a synthetic family.
  std::string snapshot_path;
  TrajectoryConfig trajectory;
  std::vector<std::string> checks;  // empty means every known check
  CheckOptions check_options;
  std::string out_dir = ".";

  // Throws ConfigError when any module precondition cannot hold.
  void validate() const;
};

// Flat "key = value" text; '#' starts a comment. See README for the key list.
ScenarioConfig parse_scenario(std::istream& is);
ScenarioConfig load_scenario(const std::string& path);
// Accepts plain numbers plus "pi", "<x>pi" and "<x>*pi".
double parse_length(const std::string& text);

struct ScenarioOutcome {
  int exit_code = kExitPass;
  std::string message;
  std::vector<CheckSummary> checks;
  std::vector<EnergyRecord> records;
};

// Writes <out_dir>/<name>_energy.csv, <name>_report.json and <name>_summary.txt.
ScenarioOutcome run_scenario(const ScenarioConfig& cfg, std::ostream& log);

struct SuiteOptions {
  std::uint64_t seed = 0;  // base seed; runs use seed, seed + 1, ...
  std::string out_dir = ".";
  double tolerance_scale = 1.0;
  // 0 reads NSLEDGER_THREADS, falling back to the hardware concurrency.
  int threads = 0;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  std::map<std::string, double> metrics;
  double seconds = 0.0;
};

const std::vector<std::string>& suite_names();
std::vector<int> suite_criteria(const std::string& suite);

class SuiteContext;

// Runs acceptance criteria 1..11; shared trajectories are computed once per context.
class CriteriaRunner {
 public:
  explicit CriteriaRunner(SuiteOptions opts);
  ~CriteriaRunner();
  CriteriaRunner(const CriteriaRunner&) = delete;
  CriteriaRunner& operator=(const CriteriaRunner&) = delete;

  CriterionResult run(int id);

 private:
  SuiteContext* ctx_;
};

// Runs a named group, logs one line per criterion and writes <out_dir>/suite_<name>.json.
int run_suite(const std::string& name, const SuiteOptions& opts, std::ostream& log);

std::string format_criterion(const CriterionResult& r);
int resolve_threads(int requested);

}  // namespace nsledger
