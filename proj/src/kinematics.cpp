#include "eggsim/kinematics.hpp"

#include <cmath>

namespace eggsim {

Matrix3 body_to_world(const AttitudeState& att) {
  return rot_z(-att.gamma_v) * rot_x(att.beta_v) * rot_z(att.alpha_v);
}

RollingRates rolling_rates(const AttitudeState& att, const SlipState& slip, const EllipsoidShape& shape) {
  const ContactPoint cp = contact_point(att.beta_v, shape);
  const double ring = ring_radius_of_beta(cp.beta_p, shape);
  const double cg = std::cos(att.gamma_v);
  const double sg = std::sin(att.gamma_v);

  RollingRates out;
  out.gamma_v_rate = att.alpha_rate * std::cos(att.beta_v) + slip.gamma_slip_rate;
  out.x_p_rate = cp.radial_distance * cg * att.beta_rate + ring * att.alpha_rate * sg;
  out.y_p_rate = -cp.radial_distance * sg * att.beta_rate + ring * att.alpha_rate * cg;
  return out;
}

namespace {

// Elevation of the contact-to-center direction above the ground plane.
double elevation(double beta_v, double beta_p) { return 0.5 * kPi - beta_v + beta_p; }

} // namespace

Vector3 center_offset(const AttitudeState& att, const EllipsoidShape& shape) {
  const ContactPoint cp = contact_point(att.beta_v, shape);
  return rot_z(-att.gamma_v) * rot_x(-elevation(att.beta_v, cp.beta_p)) * Vector3(0.0, -cp.radial_distance, 0.0);
}

Vector3 center_velocity(const AttitudeState& att, const RollingRates& rates, const EllipsoidShape& shape) {
  const ContactPoint cp = contact_point(att.beta_v, shape);
  const double beta_p_rate = contact_angle_derivative(att.beta_v, shape) * att.beta_rate;
  const double theta = elevation(att.beta_v, cp.beta_p);
  const double theta_rate = beta_p_rate - att.beta_rate;
  const double r_rate = radial_distance_derivative(cp.beta_p, shape) * beta_p_rate;

  const Vector3 arm(0.0, -cp.radial_distance, 0.0);
  const Vector3 arm_rate(0.0, -r_rate, 0.0);
  const Matrix3 rz = rot_z(-att.gamma_v);
  const Matrix3 rx = rot_x(-theta);

  const Vector3 offset_rate = rot_z_dot(-att.gamma_v, -rates.gamma_v_rate) * rx * arm +
                              rz * rot_x_dot(-theta, -theta_rate) * arm + rz * rx * arm_rate;
  return Vector3(rates.x_p_rate, rates.y_p_rate, 0.0) + offset_rate;
}

GimbalAngles gimbal_angles(double mu1, double mu2) { return {mu1 + mu2, mu1 - mu2}; }

MotorAngles motor_angles(double phi, double psi) { return {0.5 * (phi + psi), 0.5 * (phi - psi)}; }

} // namespace eggsim
