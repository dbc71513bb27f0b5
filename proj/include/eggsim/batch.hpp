#pragma once

// Runs independent scenario files concurrently.

#include <string>
#include <vector>

namespace eggsim {

struct ScenarioResult {
  std::string config_path;
  int exit_code = 0; // 0 ok, 2 config error, 3 numerical abort, 4 output error
  std::string message;
  std::string summary;
};

/// Worker count from EGG_SIM_THREADS (positive integer), otherwise the OpenMP default.
int scenario_thread_cap();

/// Loads, validates, simulates and writes the trajectory of one scenario.
ScenarioResult run_scenario(const std::string& config_path);

/// Results are returned in input order whatever the scheduling.
std::vector<ScenarioResult> run_scenarios(const std::vector<std::string>& config_paths, int threads);

} // namespace eggsim
