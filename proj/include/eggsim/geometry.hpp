#pragma once

// Rotation conventions, prolate ellipsoid shell geometry and the
// inclination-to-contact-point map.

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace eggsim {

using Vector3 = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;

inline constexpr double kPi = 3.14159265358979323846;

/// Raised when an argument lies outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// Active rotations about x and z.
Matrix3 rot_x(double a);
Matrix3 rot_z(double b);

// Time derivatives of rot_x(a(t)) / rot_z(b(t)) given the angle rate.
Matrix3 rot_x_dot(double a, double a_rate);
Matrix3 rot_z_dot(double b, double b_rate);

/// Cross-product matrix: skew(v) * u == v.cross(u).
Matrix3 skew(const Vector3& v);

/// R_z(alpha) R_x(beta) R_z(gamma), mapping global coordinates to local ones.
Matrix3 local_from_global(double alpha, double beta, double gamma);
/// R_z(-gamma) R_x(-beta) R_z(-alpha), the inverse of local_from_global.
Matrix3 global_from_local(double alpha, double beta, double gamma);

/// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

/// Rotationally symmetric prolate shell. The long semi-axis lies on the local z' axis.
class EllipsoidShape {
public:
  /// Throws std::invalid_argument unless r_long >= r_short > 0.
  EllipsoidShape(double r_long, double r_short);

  double r_long() const { return r_long_; }
  double r_short() const { return r_short_; }
  bool is_sphere() const { return r_long_ == r_short_; }

  /// (r_short / r_long)^2; tan(beta_p) = q * tan(beta_v).
  double flattening_ratio() const { return (r_short_ * r_short_) / (r_long_ * r_long_); }

  bool operator==(const EllipsoidShape&) const = default;

private:
  double r_long_;
  double r_short_;
};

/// Center-to-surface distance at angle beta from the long axis.
double radial_distance(double beta, const EllipsoidShape& shape);
/// d radial_distance / d beta.
double radial_distance_derivative(double beta, const EllipsoidShape& shape);

/// Radius of the circular cross section at axial coordinate z. Throws DomainError if |z| > r_long.
double ring_radius_of_z(double z, const EllipsoidShape& shape);
/// Same cross-section radius, parameterized by beta.
double ring_radius_of_beta(double beta, const EllipsoidShape& shape);

/// Shell point for the surface parameters (alpha_s, beta_s), local frame.
Vector3 surface_point(double alpha_s, double beta_s, const EllipsoidShape& shape);

struct ContactPoint {
  double z_p = 0.0;             // axial coordinate of the contact point (m)
  double beta_p = 0.0;          // angle from the long axis to the contact direction (rad)
  double radial_distance = 0.0; // |r(beta_p)| (m)
  double ring_radius = 0.0;     // r_alpha(beta_p) (m)
};

/// Lowest shell point for inclination beta_v in [0, pi]. Throws DomainError otherwise.
ContactPoint contact_point(double beta_v, const EllipsoidShape& shape);

/// d beta_p / d beta_v, analytic.
double contact_angle_derivative(double beta_v, const EllipsoidShape& shape);

/// Height of the center above ground at inclination beta_v (support distance).
double center_height(double beta_v, const EllipsoidShape& shape);

} // namespace eggsim
