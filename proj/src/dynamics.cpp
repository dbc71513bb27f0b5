#include "eggsim/dynamics.hpp"

#include <cmath>
#include <string>

namespace eggsim {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument(std::string(name) + " must be positive and finite");
  }
}

void require_non_negative(double value, const char* name) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument(std::string(name) + " must be non-negative and finite");
  }
}

double source_value(AngleSource source, double phi, double psi, double rho) {
  switch (source) {
  case AngleSource::Phi: return phi;
  case AngleSource::Psi: return psi;
  case AngleSource::Rho: return rho;
  case AngleSource::None: break;
  }
  return 0.0;
}

} // namespace

void RobotParams::validate() const {
  require_positive(theta_xy, "theta_xy");
  require_positive(theta_z, "theta_z");
  require_positive(mass, "mass");
  require_positive(r_long, "r_long");
  require_positive(r_short, "r_short");
  require_positive(theta_phi_x, "theta_phi_x");
  require_positive(theta_phi_y, "theta_phi_y");
  require_positive(theta_phi_z, "theta_phi_z");
  require_positive(theta_psi_x, "theta_psi_x");
  require_positive(theta_psi_z, "theta_psi_z");
  require_positive(theta_g_x, "theta_g_x");
  require_positive(theta_g_z, "theta_g_z");
  require_non_negative(tau_fcrit, "tau_fcrit");
  require_non_negative(rho_f, "rho_f");
  if (r_long < r_short) {
    throw std::invalid_argument("r_long must not be smaller than r_short");
  }
}

FrameChain FrameChain::from_params(const RobotParams& p) {
  FrameChain chain;
  chain.frames[0] = {JointAxis::None, AngleSource::None, Vector3(p.theta_xy, p.theta_xy, p.theta_z)};
  chain.frames[1] = {JointAxis::Z, AngleSource::Phi, Vector3(p.theta_phi_x, p.theta_phi_y, p.theta_phi_z)};
  chain.frames[2] = {JointAxis::X, AngleSource::Psi, Vector3(p.theta_psi_x, p.theta_psi_x, p.theta_psi_z)};
  chain.frames[3] = {JointAxis::Z, AngleSource::Rho, Vector3(p.theta_g_x, p.theta_g_x, p.theta_g_z)};
  chain.validate();
  return chain;
}

void FrameChain::validate() const {
  static constexpr std::array<JointAxis, 4> axes{JointAxis::None, JointAxis::Z, JointAxis::X, JointAxis::Z};
  static constexpr std::array<AngleSource, 4> sources{AngleSource::None, AngleSource::Phi, AngleSource::Psi,
                                                      AngleSource::Rho};
  for (std::size_t n = 0; n < frames.size(); ++n) {
    if (frames[n].axis != axes[n] || frames[n].source != sources[n]) {
      throw std::invalid_argument("frame " + std::to_string(n + 1) + " does not match the gimbal chain layout");
    }
    if (!(frames[n].inertia_diag.minCoeff() > 0.0)) {
      throw std::invalid_argument("frame " + std::to_string(n + 1) + " inertia must be positive");
    }
  }
}

RelativeKinematics relative_kinematics(const FrameChain& chain, const ChainState& s) {
  RelativeKinematics k;
  for (std::size_t n = 0; n < 4; ++n) {
    const FrameEntry& f = chain.frames[n];
    const double a = source_value(f.source, s.phi, s.psi, s.rho);
    const double a_rate = source_value(f.source, s.phi_rate, s.psi_rate, s.rho_rate);
    const double a_acc = source_value(f.source, s.phi_acc, s.psi_acc, s.rho_acc);
    switch (f.axis) {
    case JointAxis::None:
      k.rot[n] = Matrix3::Identity();
      k.rot_inv[n] = Matrix3::Identity();
      k.rot_dot[n] = Matrix3::Zero();
      k.rot_inv_dot[n] = Matrix3::Zero();
      k.rate[n] = Vector3::Zero();
      k.rate_dot[n] = Vector3::Zero();
      break;
    case JointAxis::X:
      k.rot[n] = rot_x(a);
      k.rot_inv[n] = rot_x(-a);
      k.rot_dot[n] = rot_x_dot(a, a_rate);
      k.rot_inv_dot[n] = rot_x_dot(-a, -a_rate);
      k.rate[n] = Vector3::UnitX() * a_rate;
      k.rate_dot[n] = Vector3::UnitX() * a_acc;
      break;
    case JointAxis::Z:
      k.rot[n] = rot_z(a);
      k.rot_inv[n] = rot_z(-a);
      k.rot_dot[n] = rot_z_dot(a, a_rate);
      k.rot_inv_dot[n] = rot_z_dot(-a, -a_rate);
      k.rate[n] = Vector3::UnitZ() * a_rate;
      k.rate_dot[n] = Vector3::UnitZ() * a_acc;
      break;
    }
  }
  return k;
}

namespace {

struct ChainSweep {
  std::array<Vector3, 4> omega;
  std::array<Vector3, 4> omega_dot;
  std::array<Vector3, 4> momentum;
  std::array<Vector3, 4> momentum_dot;
};

// Outward pass for the angular velocities, inward pass for the momenta.
ChainSweep sweep(const FrameChain& chain, const ChainState& state) {
  const RelativeKinematics k = relative_kinematics(chain, state);
  ChainSweep s;
  s.omega[0] = state.omega;
  s.omega_dot[0] = state.omega_dot;
  for (std::size_t n = 1; n < 4; ++n) {
    s.omega[n] = k.rate[n] + k.rot[n] * s.omega[n - 1];
    s.omega_dot[n] = k.rate_dot[n] + k.rot_dot[n] * s.omega[n - 1] + k.rot[n] * s.omega_dot[n - 1];
  }
  s.momentum[3] = chain.frames[3].inertia() * s.omega[3];
  s.momentum_dot[3] = chain.frames[3].inertia() * s.omega_dot[3];
  for (std::size_t n = 3; n >= 1; --n) {
    const Matrix3 inertia = chain.frames[n - 1].inertia();
    s.momentum[n - 1] = k.rot_inv[n] * s.momentum[n] + inertia * s.omega[n - 1];
    s.momentum_dot[n - 1] =
        k.rot_inv_dot[n] * s.momentum[n] + k.rot_inv[n] * s.momentum_dot[n] + inertia * s.omega_dot[n - 1];
  }
  return s;
}

} // namespace

std::array<Vector3, 4> chain_omegas(const FrameChain& chain, const ChainState& state) {
  return sweep(chain, state).omega;
}

Vector3 total_angular_momentum(const FrameChain& chain, const ChainState& state) {
  return sweep(chain, state).momentum[0];
}

Vector3 mechanical_torque(const FrameChain& chain, const ChainState& state) {
  return sweep(chain, state).momentum_dot[0];
}

Matrix3 combined_inertia(const FrameChain& chain, const ChainState& state) {
  const RelativeKinematics k = relative_kinematics(chain, state);
  Matrix3 m = chain.frames[3].inertia();
  for (std::size_t n = 3; n >= 1; --n) {
    m = k.rot_inv[n] * m * k.rot[n] + chain.frames[n - 1].inertia();
  }
  return m;
}

TmecFactors factorize_tmec(const FrameChain& chain, const ChainState& state) {
  TmecFactors f;
  f.theta_com = combined_inertia(chain, state);
  const double scale = f.theta_com.norm();
  if (!(std::abs(f.theta_com.determinant()) > 1e-12 * scale * scale * scale)) {
    throw DegenerateInertiaError("combined inertia tensor is singular");
  }
  ChainState at_rest = state;
  at_rest.omega_dot.setZero();
  f.b = mechanical_torque(chain, at_rest);
  return f;
}

Vector3 gravity_torque(const AttitudeState& att, const EllipsoidShape& shape, double mass) {
  const ContactPoint cp = contact_point(att.beta_v, shape);
  const double magnitude = mass * kGravity * std::sin(att.beta_v) * cp.radial_distance;
  return magnitude * (rot_z(-att.alpha_v) * Vector3::UnitX());
}

Vector3 virtual_torque(const Vector3& omega, const Vector3& angular_momentum) {
  return omega.cross(angular_momentum);
}

std::string_view to_string(FrictionMode mode) {
  switch (mode) {
  case FrictionMode::Stiction: return "stiction";
  case FrictionMode::Stokes: return "stokes";
  case FrictionMode::Off: return "off";
  }
  return "?";
}

double twist_torque(const Vector3& total_local_torque, const AttitudeState& att) {
  return (body_to_world(att) * total_local_torque).z();
}

FrictionResult friction_torque_in_mode(const Vector3& total_local_torque, const AttitudeState& att,
                                       const SlipState& slip, const RobotParams& params, FrictionMode mode) {
  const Matrix3 q = body_to_world(att);
  FrictionResult r;
  r.t_f = (q * total_local_torque).z();
  r.mode = mode;
  switch (mode) {
  case FrictionMode::Stiction:
    r.torque = q.transpose() * Vector3(0.0, 0.0, -r.t_f);
    break;
  case FrictionMode::Stokes:
    r.torque = q.transpose() * Vector3(0.0, 0.0, -params.rho_f * slip.gamma_slip_rate);
    break;
  case FrictionMode::Off:
    r.torque.setZero();
    break;
  }
  return r;
}

FrictionResult friction_torque(const Vector3& total_local_torque, const AttitudeState& att, const SlipState& slip,
                               const RobotParams& params) {
  const double t_f = twist_torque(total_local_torque, att);
  const bool sticks = std::abs(t_f) <= params.tau_fcrit && slip.gamma_slip_rate == 0.0;
  return friction_torque_in_mode(total_local_torque, att, slip, params,
                                 sticks ? FrictionMode::Stiction : FrictionMode::Stokes);
}

FrictionMode next_friction_mode(FrictionMode current, double t_f, const SlipState& slip, const RobotParams& params) {
  switch (current) {
  case FrictionMode::Off:
    return FrictionMode::Off;
  case FrictionMode::Stiction:
    return std::abs(t_f) > params.tau_fcrit ? FrictionMode::Stokes : FrictionMode::Stiction;
  case FrictionMode::Stokes:
    if (std::abs(t_f) <= params.tau_fcrit && std::abs(slip.gamma_slip_rate) < kSlipRestThreshold) {
      return FrictionMode::Stiction;
    }
    return FrictionMode::Stokes;
  }
  return current;
}

DynamicsResult evaluate_dynamics(const ChainState& state, const AttitudeState& att, const SlipState& slip,
                                 const FrameChain& chain, const RobotParams& params, const EllipsoidShape& shape,
                                 const TorqueOptions& options) {
  DynamicsResult out;
  out.factors = factorize_tmec(chain, state);
  out.angular_momentum = total_angular_momentum(chain, state);

  TorqueBreakdown& t = out.torques;
  if (options.gravity) {
    t.t_gravity = gravity_torque(att, shape, params.mass);
  }
  t.t_virtual = virtual_torque(state.omega, out.angular_momentum);
  t.t_external = options.external_local;

  // Everything that drives omega_dot apart from friction.
  const Vector3 drive = t.t_gravity + t.t_external - out.factors.b - t.t_virtual;

  FrictionResult fr;
  if (!options.friction) {
    fr = friction_torque_in_mode(drive, att, slip, params, FrictionMode::Off);
  } else if (options.mode) {
    fr = friction_torque_in_mode(drive, att, slip, params, *options.mode);
  } else {
    fr = friction_torque(drive, att, slip, params);
  }
  t.t_friction = fr.torque;
  t.t_f_scalar = fr.t_f;
  t.friction_mode = fr.mode;

  out.omega_dot = out.factors.theta_com.inverse() * (drive + t.t_friction);
  t.t_mec = out.factors.theta_com * out.omega_dot + out.factors.b;
  return out;
}

Vector3 angular_acceleration(const ChainState& state, const AttitudeState& att, const SlipState& slip,
                             const FrameChain& chain, const RobotParams& params, const EllipsoidShape& shape) {
  return evaluate_dynamics(state, att, slip, chain, params, shape).omega_dot;
}

namespace {

EulerRates rates_with_sine(const Vector3& w, double sin_beta, double cos_beta, double gamma) {
  const double sg = std::sin(gamma);
  const double cg = std::cos(gamma);
  EulerRates r;
  r.alpha_rate = (w.x() * sg + w.y() * cg) / sin_beta;
  r.beta_rate = w.x() * cg - w.y() * sg;
  r.gamma_rate = w.z() - r.alpha_rate * cos_beta;
  return r;
}

} // namespace

EulerRates euler_rates(const Vector3& omega, double beta, double gamma) {
  const double sb = std::sin(beta);
  if (std::abs(sb) < kGimbalLockSine) {
    throw GimbalLockError("euler_rates: |sin(beta)| below " + std::to_string(kGimbalLockSine));
  }
  return rates_with_sine(omega, sb, std::cos(beta), gamma);
}

EulerRates euler_rates_regularized(const Vector3& omega, double beta, double gamma) {
  double sb = std::sin(beta);
  if (std::abs(sb) < kGimbalLockSine) {
    sb = std::signbit(sb) ? -kGimbalLockSine : kGimbalLockSine;
  }
  return rates_with_sine(omega, sb, std::cos(beta), gamma);
}

EulerRates euler_rates_as_printed(const Vector3& omega, double beta, double gamma) {
  const double sb = std::sin(beta);
  const double cb = std::cos(beta);
  const double sg = std::sin(gamma);
  const double cg = std::cos(gamma);
  EulerRates r;
  r.alpha_rate = sb * sg * omega.x() + sb * cg * omega.y() + cb * omega.z();
  r.beta_rate = cg * omega.x() - sg * omega.y();
  r.gamma_rate = omega.z();
  return r;
}

} // namespace eggsim
