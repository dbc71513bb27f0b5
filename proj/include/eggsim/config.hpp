#pragma once

// Scenario files: flat `section.key = value` lines, `#` starts a comment.
// Angles are degrees in the file and radians everywhere else.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "eggsim/integrator.hpp"

namespace eggsim {

class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

private:
  std::string field_;
};

struct InitialConditions {
  double alpha_v_deg = 0.0;
  double beta_v_deg = 0.0;
  double gamma_v_deg = 0.0;
  Vector3 omega = Vector3::Zero(); // rad/s, shell frame
  double gamma_slip_rate = 0.0;    // rad/s
  double rho_deg = 0.0;
  double x_p = 0.0;
  double y_p = 0.0;
};

struct ScenarioConfig {
  RobotParams robot;
  InitialConditions initial;
  TimeFunction mu1_deg = TimeFunction::constant(0.0);
  TimeFunction mu2_deg = TimeFunction::constant(0.0);
  TimeFunction rho_rate = TimeFunction::constant(0.0); // rad/s
  ExternalTorque external;
  bool gravity = true;
  bool friction = true;
  RunControls run;
  std::string output;

  /// Throws ConfigError naming the offending key.
  static ScenarioConfig parse(std::string_view text);
  static ScenarioConfig load(const std::filesystem::path& path);
  std::string serialize() const;

  /// Throws ConfigError naming the offending key.
  void validate() const;

  SimModel model() const;
  /// Initial state completed by prepare_initial_state.
  SimState initial_state() const;

  bool operator==(const ScenarioConfig& other) const { return serialize() == other.serialize(); }
};

} // namespace eggsim
