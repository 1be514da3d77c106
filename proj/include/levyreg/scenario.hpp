#pragma once

#include "levyreg/config.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include "json.hpp"
#include <stdexcept>
#include <string>
#include <vector>

namespace levyreg {

inline constexpr const char* kVersion = "0.1.0";

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct RunSummary {
  std::string scenario;
  std::uint64_t seed = 0;
  std::int64_t replicas = 0;
  std::int64_t failures = 0;
  std::vector<std::int64_t> failed_replicas;
  double wall_time = 0.0;  // seconds
  std::string version = kVersion;
  // Per-diagnostic statistics and boolean verdicts, keyed by diagnostic name.
  nlohmann::json diagnostics = nlohmann::json::object();

  double failure_fraction() const;
  bool operator==(const RunSummary&) const = default;
};

void to_json(nlohmann::json& j, const RunSummary& s);
void from_json(const nlohmann::json& j, RunSummary& s);

// One row of samples.csv plus scenario-specific metrics.
struct ReplicaResult {
  double terminal_x = 0.0;
  double terminal_z = 0.0;
  bool failed = false;
  std::string error;
  std::vector<double> metrics;
};

// Evaluates work(i) for i in [0, count) on a pool of `threads` workers and
// returns the results in index order.
std::vector<ReplicaResult> run_parallel(std::int64_t count, int threads,
                                        const std::function<ReplicaResult(std::int64_t)>& work);

struct RunOutput {
  RunSummary summary;
  std::vector<ReplicaResult> replicas;
};

// Runs the scenario pipeline in memory; nothing is written.
RunOutput execute_scenario(const ScenarioConfig& config, int threads);

// execute_scenario, then writes samples.csv, summary.json, kde.csv and
// plots/*.gp under config.output_dir. Throws IoError with the offending path.
RunSummary run_scenario(const ScenarioConfig& config, int threads);

void write_samples_csv(const std::vector<ReplicaResult>& rows, std::ostream& os);

// "S1  <description>  [<anchor>]" per line, in catalogue order.
std::string list_scenarios();

}  // namespace levyreg
