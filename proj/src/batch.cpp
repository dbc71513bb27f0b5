#include "eggsim/batch.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "eggsim/config.hpp"

namespace eggsim {

namespace {

std::string summarize(const std::string& path, const ScenarioConfig& cfg, const TrajectoryLog& log) {
  const SimState& last = log.records.back().state;
  double max_slip = 0.0;
  int switches = 0;
  for (std::size_t i = 0; i < log.records.size(); ++i) {
    max_slip = std::max(max_slip, std::abs(log.records[i].state.slip.gamma_slip_rate));
    if (i > 0 && log.records[i].torques.friction_mode != log.records[i - 1].torques.friction_mode) {
      ++switches;
    }
  }
  std::ostringstream s;
  s << path << ": " << log.records.size() << " rows -> " << cfg.output << '\n'
    << "  t_final=" << format_double(last.time) << " alpha_v=" << format_double(last.attitude.alpha_v)
    << " beta_v=" << format_double(last.attitude.beta_v) << " gamma_v=" << format_double(last.attitude.gamma_v)
    << '\n'
    << "  x_p=" << format_double(last.track.x_p) << " y_p=" << format_double(last.track.y_p)
    << " max|gamma_slip_rate|=" << format_double(max_slip) << " mode_changes=" << switches
    << " final_mode=" << to_string(log.records.back().torques.friction_mode) << '\n';
  return s.str();
}

} // namespace

int scenario_thread_cap() {
  if (const char* env = std::getenv("EGG_SIM_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) {
      return static_cast<int>(std::min<long>(n, 1024));
    }
  }
  return std::max(1, omp_get_max_threads());
}

ScenarioResult run_scenario(const std::string& config_path) {
  ScenarioResult r;
  r.config_path = config_path;
  ScenarioConfig cfg;
  try {
    cfg = ScenarioConfig::load(config_path);
  } catch (const ConfigError& e) {
    r.exit_code = 2;
    r.message = config_path + ": config error in " + e.what();
    return r;
  }
  TrajectoryLog log;
  try {
    const SimModel model = cfg.model();
    log = simulate(cfg.initial_state(), model, cfg.run);
  } catch (const ConfigError& e) {
    r.exit_code = 2;
    r.message = config_path + ": config error in " + e.what();
    return r;
  } catch (const std::invalid_argument& e) {
    r.exit_code = 2;
    r.message = config_path + ": invalid scenario: " + e.what();
    return r;
  } catch (const std::exception& e) {
    r.exit_code = 3;
    r.message = config_path + ": numerical abort: " + e.what();
    return r;
  }
  std::ofstream out(cfg.output);
  if (out) {
    log.write_csv(out);
  }
  if (!out) {
    r.exit_code = 4;
    r.message = config_path + ": cannot write " + cfg.output;
    return r;
  }
  r.summary = summarize(config_path, cfg, log);
  return r;
}

std::vector<ScenarioResult> run_scenarios(const std::vector<std::string>& config_paths, int threads) {
  std::vector<ScenarioResult> results(config_paths.size());
  const int n = static_cast<int>(config_paths.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(1, threads))
  for (int i = 0; i < n; ++i) {
    results[i] = run_scenario(config_paths[i]);
  }
  return results;
}

} // namespace eggsim
