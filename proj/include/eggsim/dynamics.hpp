#pragma once

// Four-body angular-momentum chain (shell, outer gimbal, inner gimbal, gyro),
// its time derivative, the torque models and the explicit equation for the
// body angular acceleration. All torques are taken about the contact point and
// expressed in the shell frame unless stated otherwise.

#include <array>
#include <optional>
#include <stdexcept>
#include <string_view>

#include "eggsim/geometry.hpp"
#include "eggsim/kinematics.hpp"

namespace eggsim {

inline constexpr double kGravity = 9.81;

class DegenerateInertiaError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class GimbalLockError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct RobotParams {
  double theta_xy = 0.0;    // shell inertia about the short axes
  double theta_z = 0.0;     // shell inertia about the long axis
  double mass = 0.0;
  double r_long = 0.0;
  double r_short = 0.0;
  double theta_phi_x = 0.0; // outer gimbal
  double theta_phi_y = 0.0;
  double theta_phi_z = 0.0;
  double theta_psi_x = 0.0; // inner gimbal
  double theta_psi_z = 0.0;
  double theta_g_x = 0.0;   // gyro; theta_g_z is the spin-axis inertia
  double theta_g_z = 0.0;
  double tau_fcrit = 0.0;   // stiction threshold (N m)
  double rho_f = 0.0;       // Stokes coefficient (N m s)

  /// Throws std::invalid_argument naming the first violated field.
  void validate() const;
  EllipsoidShape shape() const { return EllipsoidShape(r_long, r_short); }
};

enum class JointAxis { None, X, Z };
enum class AngleSource { None, Phi, Psi, Rho };

struct FrameEntry {
  JointAxis axis = JointAxis::None;
  AngleSource source = AngleSource::None;
  Vector3 inertia_diag = Vector3::Zero();

  Matrix3 inertia() const { return inertia_diag.asDiagonal(); }
};

/// Shell -> outer gimbal (z, phi) -> inner gimbal (x, psi) -> gyro (z, rho).
struct FrameChain {
  std::array<FrameEntry, 4> frames;

  static FrameChain from_params(const RobotParams& params);
  void validate() const;
};

struct ChainState {
  double phi = 0.0, psi = 0.0, rho = 0.0;
  double phi_rate = 0.0, psi_rate = 0.0, rho_rate = 0.0;
  double phi_acc = 0.0, psi_acc = 0.0, rho_acc = 0.0;
  Vector3 omega = Vector3::Zero();     // shell angular velocity, shell frame
  Vector3 omega_dot = Vector3::Zero(); // its time derivative
};

/// Relative rotation data of each frame against its predecessor. Index 0 is
/// the shell and carries identity/zero entries.
struct RelativeKinematics {
  std::array<Matrix3, 4> rot;          // R_n^r
  std::array<Matrix3, 4> rot_inv;      // R_n^{r-}
  std::array<Matrix3, 4> rot_dot;      // d/dt R_n^r
  std::array<Matrix3, 4> rot_inv_dot;  // d/dt R_n^{r-}
  std::array<Vector3, 4> rate;         // omega_n^r
  std::array<Vector3, 4> rate_dot;     // d/dt omega_n^r
};

RelativeKinematics relative_kinematics(const FrameChain& chain, const ChainState& state);

/// omega_1 = omega, omega_n = omega_n^r + R_n^r omega_{n-1}.
std::array<Vector3, 4> chain_omegas(const FrameChain& chain, const ChainState& state);

/// L = L_1 via L_4 = Theta_4 omega_4, L_{n-1} = R_n^{r-} L_n + Theta_{n-1} omega_{n-1}.
Vector3 total_angular_momentum(const FrameChain& chain, const ChainState& state);

/// T_mec = dL_1/dt from the differentiated recursion (uses state.omega_dot).
Vector3 mechanical_torque(const FrameChain& chain, const ChainState& state);

struct TmecFactors {
  Matrix3 theta_com = Matrix3::Zero();
  Vector3 b = Vector3::Zero();
};

/// Nested combined inertia R2- (R3- (R4- Th4 R4 + Th3) R3 + Th2) R2 + Th1.
Matrix3 combined_inertia(const FrameChain& chain, const ChainState& state);

/// T_mec(omega_dot) = theta_com * omega_dot + b. Throws DegenerateInertiaError if theta_com is singular.
TmecFactors factorize_tmec(const FrameChain& chain, const ChainState& state);

/// Gravity torque about the contact point, shell frame.
Vector3 gravity_torque(const AttitudeState& att, const EllipsoidShape& shape, double mass);

/// omega x L.
Vector3 virtual_torque(const Vector3& omega, const Vector3& angular_momentum);

enum class FrictionMode { Stiction, Stokes, Off };

std::string_view to_string(FrictionMode mode);

/// Below this slip rate the contact may re-enter stiction.
inline constexpr double kSlipRestThreshold = 1e-8;

/// World-z component of the world image of a shell-frame torque.
double twist_torque(const Vector3& total_local_torque, const AttitudeState& att);

struct FrictionResult {
  Vector3 torque = Vector3::Zero(); // shell frame
  double t_f = 0.0;
  FrictionMode mode = FrictionMode::Stiction;
};

/// Friction from the instantaneous rule: stiction when |t_f| <= tau_fcrit and the
/// contact is not slipping, Stokes otherwise.
FrictionResult friction_torque(const Vector3& total_local_torque, const AttitudeState& att,
                               const SlipState& slip, const RobotParams& params);

/// Friction for a mode fixed by the caller (the integrator freezes it per step).
FrictionResult friction_torque_in_mode(const Vector3& total_local_torque, const AttitudeState& att,
                                       const SlipState& slip, const RobotParams& params, FrictionMode mode);

/// Mode hysteresis: stiction -> Stokes when |t_f| > tau_fcrit; Stokes -> stiction
/// only when |t_f| <= tau_fcrit and |slip| < kSlipRestThreshold. Off stays Off.
FrictionMode next_friction_mode(FrictionMode current, double t_f, const SlipState& slip, const RobotParams& params);

struct TorqueBreakdown {
  Vector3 t_mec = Vector3::Zero();
  Vector3 t_gravity = Vector3::Zero();
  Vector3 t_virtual = Vector3::Zero();
  Vector3 t_friction = Vector3::Zero();
  Vector3 t_external = Vector3::Zero();
  double t_f_scalar = 0.0;
  FrictionMode friction_mode = FrictionMode::Stiction;
};

struct TorqueOptions {
  bool gravity = true;
  bool friction = true;
  Vector3 external_local = Vector3::Zero();
  /// Frozen friction mode; when unset the instantaneous rule decides.
  std::optional<FrictionMode> mode;
};

struct DynamicsResult {
  Vector3 omega_dot = Vector3::Zero();
  Vector3 angular_momentum = Vector3::Zero();
  TmecFactors factors;
  TorqueBreakdown torques;
};

/// Solves theta_com * omega_dot + b = T_G + T_frict + T_ext - omega x L.
/// state.omega_dot is ignored on input.
DynamicsResult evaluate_dynamics(const ChainState& state, const AttitudeState& att, const SlipState& slip,
                                 const FrameChain& chain, const RobotParams& params, const EllipsoidShape& shape,
                                 const TorqueOptions& options = {});

Vector3 angular_acceleration(const ChainState& state, const AttitudeState& att, const SlipState& slip,
                             const FrameChain& chain, const RobotParams& params, const EllipsoidShape& shape);

/// Angle rates of R = R_z(alpha) R_x(beta) R_z(gamma) for the body angular
/// velocity omega, i.e. dR/dt = R skew(omega).
struct EulerRates {
  double alpha_rate = 0.0;
  double beta_rate = 0.0;
  double gamma_rate = 0.0;
};

inline constexpr double kGimbalLockSine = 1e-6;

/// Throws GimbalLockError when |sin(beta)| < kGimbalLockSine.
EulerRates euler_rates(const Vector3& omega, double beta, double gamma);

/// As euler_rates, with sin(beta) replaced by sign(sin beta) * kGimbalLockSine near the lock.
EulerRates euler_rates_regularized(const Vector3& omega, double beta, double gamma);

/// Rate matrix without the 1/sin(beta) factor. It is not the inverse of the
/// body-rate map; kept for comparison only.
EulerRates euler_rates_as_printed(const Vector3& omega, double beta, double gamma);

} // namespace eggsim
