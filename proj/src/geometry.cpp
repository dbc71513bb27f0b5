#include "eggsim/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace eggsim {

Matrix3 rot_x(double a) {
  const double c = std::cos(a);
  const double s = std::sin(a);
  Matrix3 r;
  r << 1.0, 0.0, 0.0,
       0.0, c, -s,
       0.0, s, c;
  return r;
}

Matrix3 rot_z(double b) {
  const double c = std::cos(b);
  const double s = std::sin(b);
  Matrix3 r;
  r << c, -s, 0.0,
       s, c, 0.0,
       0.0, 0.0, 1.0;
  return r;
}

Matrix3 skew(const Vector3& v) {
  Matrix3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return m;
}

Matrix3 rot_x_dot(double a, double a_rate) {
  return a_rate * skew(Vector3::UnitX()) * rot_x(a);
}

Matrix3 rot_z_dot(double b, double b_rate) {
  return b_rate * skew(Vector3::UnitZ()) * rot_z(b);
}

Matrix3 local_from_global(double alpha, double beta, double gamma) {
  return rot_z(alpha) * rot_x(beta) * rot_z(gamma);
}

Matrix3 global_from_local(double alpha, double beta, double gamma) {
  return rot_z(-gamma) * rot_x(-beta) * rot_z(-alpha);
}

double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * kPi);
  if (w <= -kPi) {
    w += 2.0 * kPi;
  }
  return w;
}

EllipsoidShape::EllipsoidShape(double r_long, double r_short) : r_long_(r_long), r_short_(r_short) {
  if (!(r_short > 0.0) || !(r_long >= r_short) || !std::isfinite(r_long)) {
    throw std::invalid_argument("ellipsoid requires r_long >= r_short > 0 (got r_long=" +
                                std::to_string(r_long) + ", r_short=" + std::to_string(r_short) + ")");
  }
}

double radial_distance(double beta, const EllipsoidShape& shape) {
  const double r1 = shape.r_long();
  const double r2 = shape.r_short();
  const double s = std::sin(beta);
  const double c = std::cos(beta);
  return r1 * r2 / std::sqrt(r1 * r1 * s * s + r2 * r2 * c * c);
}

double radial_distance_derivative(double beta, const EllipsoidShape& shape) {
  const double r1 = shape.r_long();
  const double r2 = shape.r_short();
  const double s = std::sin(beta);
  const double c = std::cos(beta);
  const double d = r1 * r1 * s * s + r2 * r2 * c * c;
  return -r1 * r2 * (r1 * r1 - r2 * r2) * s * c / (d * std::sqrt(d));
}

double ring_radius_of_z(double z, const EllipsoidShape& shape) {
  const double r1 = shape.r_long();
  const double r2 = shape.r_short();
  if (!(std::abs(z) <= r1)) {
    throw DomainError("ring_radius_of_z: |z| = " + std::to_string(std::abs(z)) +
                      " exceeds the long semi-axis " + std::to_string(r1));
  }
  return std::sqrt(std::max(0.0, r2 * r2 - r2 * r2 * z * z / (r1 * r1)));
}

double ring_radius_of_beta(double beta, const EllipsoidShape& shape) {
  const double r1 = shape.r_long();
  const double r2 = shape.r_short();
  const double r = radial_distance(beta, shape);
  const double c = std::cos(beta);
  return std::sqrt(std::max(0.0, r2 * r2 - r2 * r2 * r * r * c * c / (r1 * r1)));
}

Vector3 surface_point(double alpha_s, double beta_s, const EllipsoidShape& shape) {
  const double r = radial_distance(beta_s, shape);
  return r * Vector3(std::cos(alpha_s), std::sin(beta_s) * std::sin(alpha_s),
                     -std::cos(beta_s) * std::sin(alpha_s));
}

ContactPoint contact_point(double beta_v, const EllipsoidShape& shape) {
  if (!(beta_v >= 0.0 && beta_v <= kPi)) {
    throw DomainError("contact_point: inclination must lie in [0, pi], got " + std::to_string(beta_v));
  }
  const double r1 = shape.r_long();
  const double c = std::cos(beta_v);
  const double s = std::sin(beta_v);
  const double q = shape.flattening_ratio();

  ContactPoint cp;
  cp.z_p = std::clamp(r1 * c / std::sqrt(c * c + q * s * s), -r1, r1);
  cp.ring_radius = ring_radius_of_z(cp.z_p, shape);
  cp.beta_p = std::atan2(cp.ring_radius, cp.z_p);
  cp.radial_distance = std::hypot(cp.z_p, cp.ring_radius);
  return cp;
}

double contact_angle_derivative(double beta_v, const EllipsoidShape& shape) {
  // beta_p = atan2(q sin(beta_v), cos(beta_v))
  const double q = shape.flattening_ratio();
  const double c = std::cos(beta_v);
  const double s = std::sin(beta_v);
  return q / (c * c + q * q * s * s);
}

double center_height(double beta_v, const EllipsoidShape& shape) {
  const ContactPoint cp = contact_point(beta_v, shape);
  return std::cos(beta_v) * cp.z_p + std::sin(beta_v) * cp.ring_radius;
}

} // namespace eggsim
