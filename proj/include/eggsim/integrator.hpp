#pragma once

// Fixed-step RK4 integration of attitude, body rate, twist slip, ground track
// and gyro angle under the explicit dynamics.

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "eggsim/dynamics.hpp"
#include "eggsim/profile.hpp"

namespace eggsim {

class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct SimState {
  double time = 0.0;
  AttitudeState attitude;
  Vector3 omega = Vector3::Zero(); // shell frame
  SlipState slip;
  GroundTrack track;
  ChainState chain;
  FrictionMode friction_mode = FrictionMode::Stiction;
  double gamma_roll = 0.0; // heading accumulated from the rolling constraint alone
};

struct ModelOptions {
  bool gravity = true;
  bool friction = true;
  ExternalTorque external;
};

class SimModel {
public:
  SimModel(RobotParams params, ActuatorProfile profile, ModelOptions options = {});

  const RobotParams& params() const { return params_; }
  const EllipsoidShape& shape() const { return shape_; }
  const FrameChain& chain() const { return chain_; }
  const ActuatorProfile& profile() const { return profile_; }
  const ModelOptions& options() const { return options_; }

private:
  RobotParams params_;
  EllipsoidShape shape_;
  FrameChain chain_;
  ActuatorProfile profile_;
  ModelOptions options_;
};

struct StateDerivative {
  double alpha_v = 0.0, beta_v = 0.0, gamma_v = 0.0;
  Vector3 omega = Vector3::Zero();
  double gamma_slip = 0.0;
  double x_p = 0.0, y_p = 0.0;
  Vector3 center = Vector3::Zero();
  double rho = 0.0;
  double gamma_roll = 0.0;
};

/// Time derivative of the integrated state with the friction mode held at state.friction_mode.
StateDerivative derivative(const SimState& state, const SimModel& model);

/// Fills the actuator-driven chain entries, attitude rates and the torque
/// breakdown for a state whose integrated quantities are set.
TorqueBreakdown observe(SimState& state, const SimModel& model);

/// Effective inertia of the shell about the contact vertical, used by the slip closure.
double twist_inertia(const SimState& state, const SimModel& model, const Matrix3& theta_com);

/// Friction mode a state should start in.
FrictionMode initial_friction_mode(const SimState& state, const SimModel& model);

/// Completes a user-supplied initial state: chain angles from the profile, the
/// center from the contact track, attitude rates and the starting friction mode.
SimState prepare_initial_state(SimState state, const SimModel& model);

/// One RK4 step; the friction mode is frozen within the step and updated afterwards.
SimState step_rk4(const SimState& state, const SimModel& model, double dt);

struct LogRecord {
  SimState state;
  TorqueBreakdown torques;
};

struct TrajectoryLog {
  std::vector<LogRecord> records;

  static const std::vector<std::string>& columns();
  void write_csv(std::ostream& out) const;
};

struct RunControls {
  double t_end = 0.0;
  double dt = 1e-4;
  int sample_every = 1;
};

/// Samples step 0, every sample_every-th step, and the final step.
/// Throws NumericalError when the state becomes non-finite.
TrajectoryLog simulate(const SimState& initial, const SimModel& model, const RunControls& controls);

} // namespace eggsim
