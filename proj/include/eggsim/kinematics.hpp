#pragma once

// Rolling-contact kinematics of the shell and gimbal motor mixing.

#include "eggsim/geometry.hpp"

namespace eggsim {

/// Shell attitude relative to the world. alpha_v spins the shell about its
/// long axis, beta_v is the inclination from the vertical, gamma_v the heading.
struct AttitudeState {
  double alpha_v = 0.0;
  double beta_v = 0.0;
  double gamma_v = 0.0;
  double alpha_rate = 0.0;
  double beta_rate = 0.0;
  double gamma_rate = 0.0;
};

struct SlipState {
  double gamma_slip_rate = 0.0; // twist slip about the contact vertical (rad/s)
};

struct GroundTrack {
  double x_p = 0.0;
  double y_p = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  double cz = 0.0; // height of the center above ground
};

/// Body-to-world rotation R_z(-gamma_v) R_x(beta_v) R_z(alpha_v); world z points toward the ground.
/// With this convention the no-twist condition is exactly gamma_rate = alpha_rate * cos(beta_v)
/// and the tilt axis in body coordinates is R_z(-alpha_v) e_x.
Matrix3 body_to_world(const AttitudeState& att);

struct RollingRates {
  double gamma_v_rate = 0.0;
  double x_p_rate = 0.0;
  double y_p_rate = 0.0;
};

RollingRates rolling_rates(const AttitudeState& att, const SlipState& slip, const EllipsoidShape& shape);

/// Contact-to-center vector R_z(-gamma_v) R_x(beta_v - beta_p - pi/2) (0, -|r(beta_p)|, 0), in the
/// horizontal frame of body_to_world: the center sits opposite the lower end of the long axis.
/// Its third component equals center_height(beta_v).
Vector3 center_offset(const AttitudeState& att, const EllipsoidShape& shape);

/// Velocity of the shell center: contact-point velocity plus the analytic time
/// derivative of center_offset (gamma_v advances at rates.gamma_v_rate).
Vector3 center_velocity(const AttitudeState& att, const RollingRates& rates, const EllipsoidShape& shape);

struct GimbalAngles {
  double phi = 0.0;
  double psi = 0.0;
};

struct MotorAngles {
  double mu1 = 0.0;
  double mu2 = 0.0;
};

/// phi = mu1 + mu2, psi = mu1 - mu2. Also valid for rates and accelerations.
GimbalAngles gimbal_angles(double mu1, double mu2);
MotorAngles motor_angles(double phi, double psi);

} // namespace eggsim
