#pragma once

// Self-checks shared by `egg_sim validate` and the acceptance suite.

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "eggsim/dynamics.hpp"

namespace eggsim::oracles {

struct CheckResult {
  std::string name;
  bool passed = false;
  double max_error = 0.0; // relative unless the detail says otherwise
  double tolerance = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  bool passed() const;
  std::vector<std::string> failed_names() const;
  std::string to_json() const;
  std::string to_text() const;
};

/// Directory holding appendix_a.txt and appendix_b.txt in the source tree.
std::filesystem::path default_golden_dir();

RobotParams random_params(std::mt19937_64& rng);
/// Inertias satisfying the gimbal symmetry condition.
RobotParams symmetric_params(std::mt19937_64& rng);
ChainState random_chain_state(std::mt19937_64& rng);

/// ||a - b|| / ||b|| (absolute when ||b|| is zero).
double relative_error(const Vector3& a, const Vector3& b);

CheckResult check_appendix_a_structure(const std::filesystem::path& golden_dir);
CheckResult check_appendix_a_numeric(int states, std::uint64_t seed);
CheckResult check_appendix_b_structure(const std::filesystem::path& golden_dir);
CheckResult check_appendix_b_numeric(int states, std::uint64_t seed);
CheckResult check_tmec_structure();
CheckResult check_factorization_linearity(int states, std::uint64_t seed);
CheckResult check_theta_com_symmetry(int poses, std::uint64_t seed);
/// Free rotation with gravity, friction and actuators off; world-frame L drift.
CheckResult check_conservation(double t_end, double dt);
CheckResult check_contact_oracle(const std::vector<double>& ratios, int samples);
CheckResult check_euler_rates_fd(int trajectories, std::uint64_t seed);

struct ValidationOptions {
  std::filesystem::path golden_dir = default_golden_dir();
  int states = 1000;
  std::uint64_t seed = 20240611;
  double conservation_t_end = 10.0;
  double conservation_dt = 1e-4;
};

ValidationReport run_validation(const ValidationOptions& options = {});

} // namespace eggsim::oracles
