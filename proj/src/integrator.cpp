#include "eggsim/integrator.hpp"

#include <cmath>
#include <ostream>

namespace eggsim {

SimModel::SimModel(RobotParams params, ActuatorProfile profile, ModelOptions options)
    : params_(params), shape_(params.shape()), chain_(FrameChain::from_params(params)), profile_(std::move(profile)),
      options_(std::move(options)) {
  params_.validate();
}

namespace {

void fill_chain(SimState& s, const SimModel& model) {
  const ActuatorProfile& p = model.profile();
  const Sample mu1 = p.mu1.sample(s.time);
  const Sample mu2 = p.mu2.sample(s.time);
  const Sample rho_rate = p.rho_rate.sample(s.time);
  const GimbalAngles angle = gimbal_angles(mu1.value, mu2.value);
  const GimbalAngles rate = gimbal_angles(mu1.rate, mu2.rate);
  const GimbalAngles acc = gimbal_angles(mu1.accel, mu2.accel);
  s.chain.phi = angle.phi;
  s.chain.psi = angle.psi;
  s.chain.phi_rate = rate.phi;
  s.chain.psi_rate = rate.psi;
  s.chain.phi_acc = acc.phi;
  s.chain.psi_acc = acc.psi;
  s.chain.rho_rate = rho_rate.value;
  s.chain.rho_acc = rho_rate.rate;
  s.chain.omega = s.omega;
}

void fill_attitude_rates(SimState& s) {
  // Body-to-world is R_z(-gamma) R_x(beta) R_z(alpha); the rate map is written for R_z(a) R_x(b) R_z(c).
  const EulerRates r = euler_rates_regularized(s.omega, s.attitude.beta_v, s.attitude.alpha_v);
  s.attitude.alpha_rate = r.gamma_rate;
  s.attitude.beta_rate = r.beta_rate;
  s.attitude.gamma_rate = -r.alpha_rate;
}

TorqueOptions torque_options(const SimState& s, const SimModel& model) {
  TorqueOptions opt;
  opt.gravity = model.options().gravity;
  opt.friction = model.options().friction;
  const ExternalTorque& ext = model.options().external;
  if (!ext.is_zero()) {
    const Vector3 t = ext.at(s.time);
    opt.external_local = ext.frame == TorqueFrame::Body ? t : Vector3(body_to_world(s.attitude).transpose() * t);
  }
  if (opt.friction) {
    opt.mode = s.friction_mode;
  }
  return opt;
}

DynamicsResult evaluate(SimState& s, const SimModel& model) {
  fill_chain(s, model);
  fill_attitude_rates(s);
  return evaluate_dynamics(s.chain, s.attitude, s.slip, model.chain(), model.params(), model.shape(),
                           torque_options(s, model));
}

double center_height_rate(double beta, const EllipsoidShape& shape) {
  const double r1 = shape.r_long();
  const double r2 = shape.r_short();
  const double sb = std::sin(beta);
  const double cb = std::cos(beta);
  const double h = std::sqrt(r1 * r1 * cb * cb + r2 * r2 * sb * sb);
  return (r2 * r2 - r1 * r1) * sb * cb / h;
}

} // namespace

double twist_inertia(const SimState& state, const SimModel& model, const Matrix3& theta_com) {
  const Vector3 up = body_to_world(state.attitude).transpose() * Vector3::UnitZ();
  const double d_h = -center_height_rate(state.attitude.beta_v, model.shape());
  return up.dot(theta_com * up) + model.params().mass * d_h * d_h;
}

namespace {

// Maps beta into [0, pi] using R_x(-b) = R_z(pi) R_x(b) R_z(pi). Returns true when the
// pose was mirrored, which reverses the sign of the beta rate.
bool fold_beta(AttitudeState& att) {
  const double b = std::remainder(att.beta_v, 2.0 * kPi);
  if (b >= 0.0) {
    att.beta_v = b;
    return false;
  }
  att.beta_v = -b;
  att.alpha_v += kPi;
  att.gamma_v -= kPi;
  return true;
}

} // namespace

StateDerivative derivative(const SimState& state, const SimModel& model) {
  SimState s = state;
  const bool folded = fold_beta(s.attitude);
  const DynamicsResult dyn = evaluate(s, model);
  const AttitudeState& att = s.attitude;

  StateDerivative d;
  d.alpha_v = att.alpha_rate;
  d.beta_v = att.beta_rate;
  d.gamma_v = att.gamma_rate;
  d.omega = dyn.omega_dot;

  switch (dyn.torques.friction_mode) {
  case FrictionMode::Stiction:
    d.gamma_slip = 0.0;
    break;
  case FrictionMode::Stokes:
    d.gamma_slip = (dyn.torques.t_f_scalar - model.params().rho_f * s.slip.gamma_slip_rate) /
                   twist_inertia(s, model, dyn.factors.theta_com);
    break;
  case FrictionMode::Off:
    d.gamma_slip = dyn.torques.t_f_scalar / twist_inertia(s, model, dyn.factors.theta_com);
    break;
  }

  const RollingRates rr = rolling_rates(att, s.slip, model.shape());
  d.x_p = rr.x_p_rate;
  d.y_p = rr.y_p_rate;
  d.center = center_velocity(att, rr, model.shape());
  d.rho = s.chain.rho_rate;
  d.gamma_roll = rr.gamma_v_rate;
  if (folded) {
    d.beta_v = -d.beta_v;
  }
  return d;
}

TorqueBreakdown observe(SimState& state, const SimModel& model) {
  const DynamicsResult dyn = evaluate(state, model);
  state.chain.omega_dot = dyn.omega_dot;
  return dyn.torques;
}

FrictionMode initial_friction_mode(const SimState& state, const SimModel& model) {
  if (!model.options().friction) {
    return FrictionMode::Off;
  }
  SimState s = state;
  s.friction_mode = FrictionMode::Stiction;
  const TorqueBreakdown t = observe(s, model);
  const bool sticks = std::abs(t.t_f_scalar) <= model.params().tau_fcrit && s.slip.gamma_slip_rate == 0.0;
  return sticks ? FrictionMode::Stiction : FrictionMode::Stokes;
}

SimState prepare_initial_state(SimState state, const SimModel& model) {
  fill_chain(state, model);
  fill_attitude_rates(state);
  const Vector3 c = Vector3(state.track.x_p, state.track.y_p, 0.0) + center_offset(state.attitude, model.shape());
  state.track.cx = c.x();
  state.track.cy = c.y();
  state.track.cz = c.z();
  state.gamma_roll = state.attitude.gamma_v;
  state.friction_mode = initial_friction_mode(state, model);
  return state;
}

namespace {

SimState advanced(const SimState& s, const StateDerivative& d, double h) {
  SimState out = s;
  out.time = s.time + h;
  out.attitude.alpha_v += h * d.alpha_v;
  out.attitude.beta_v += h * d.beta_v;
  out.attitude.gamma_v += h * d.gamma_v;
  out.omega += h * d.omega;
  out.slip.gamma_slip_rate += h * d.gamma_slip;
  out.track.x_p += h * d.x_p;
  out.track.y_p += h * d.y_p;
  out.track.cx += h * d.center.x();
  out.track.cy += h * d.center.y();
  out.track.cz += h * d.center.z();
  out.chain.rho += h * d.rho;
  out.gamma_roll += h * d.gamma_roll;
  return out;
}

StateDerivative combine(const StateDerivative& k1, const StateDerivative& k2, const StateDerivative& k3,
                        const StateDerivative& k4) {
  auto mix = [](double a, double b, double c, double e) { return (a + 2.0 * b + 2.0 * c + e) / 6.0; };
  StateDerivative d;
  d.alpha_v = mix(k1.alpha_v, k2.alpha_v, k3.alpha_v, k4.alpha_v);
  d.beta_v = mix(k1.beta_v, k2.beta_v, k3.beta_v, k4.beta_v);
  d.gamma_v = mix(k1.gamma_v, k2.gamma_v, k3.gamma_v, k4.gamma_v);
  d.omega = (k1.omega + 2.0 * k2.omega + 2.0 * k3.omega + k4.omega) / 6.0;
  d.gamma_slip = mix(k1.gamma_slip, k2.gamma_slip, k3.gamma_slip, k4.gamma_slip);
  d.x_p = mix(k1.x_p, k2.x_p, k3.x_p, k4.x_p);
  d.y_p = mix(k1.y_p, k2.y_p, k3.y_p, k4.y_p);
  d.center = (k1.center + 2.0 * k2.center + 2.0 * k3.center + k4.center) / 6.0;
  d.rho = mix(k1.rho, k2.rho, k3.rho, k4.rho);
  d.gamma_roll = mix(k1.gamma_roll, k2.gamma_roll, k3.gamma_roll, k4.gamma_roll);
  return d;
}

void normalize_attitude(AttitudeState& att) {
  fold_beta(att);
  att.alpha_v = wrap_angle(att.alpha_v);
  att.gamma_v = wrap_angle(att.gamma_v);
}

bool finite(const SimState& s) {
  const AttitudeState& a = s.attitude;
  const GroundTrack& t = s.track;
  return std::isfinite(a.alpha_v) && std::isfinite(a.beta_v) && std::isfinite(a.gamma_v) && s.omega.allFinite() &&
         std::isfinite(s.slip.gamma_slip_rate) && std::isfinite(t.x_p) && std::isfinite(t.y_p) &&
         std::isfinite(t.cx) && std::isfinite(t.cy) && std::isfinite(t.cz) && std::isfinite(s.chain.rho) &&
         std::isfinite(s.gamma_roll);
}

} // namespace

SimState step_rk4(const SimState& state, const SimModel& model, double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("step_rk4: dt must be positive");
  }
  const StateDerivative k1 = derivative(state, model);
  const StateDerivative k2 = derivative(advanced(state, k1, 0.5 * dt), model);
  const StateDerivative k3 = derivative(advanced(state, k2, 0.5 * dt), model);
  const StateDerivative k4 = derivative(advanced(state, k3, dt), model);
  SimState next = advanced(state, combine(k1, k2, k3, k4), dt);
  if (!finite(next)) {
    throw NumericalError("non-finite state at t=" + format_double(next.time));
  }
  normalize_attitude(next.attitude);

  if (next.friction_mode != FrictionMode::Off) {
    SimState probe = next;
    const TorqueBreakdown t = observe(probe, model);
    const FrictionMode mode = next_friction_mode(next.friction_mode, t.t_f_scalar, next.slip, model.params());
    if (mode == FrictionMode::Stiction && next.friction_mode == FrictionMode::Stokes) {
      next.slip.gamma_slip_rate = 0.0;
    }
    next.friction_mode = mode;
  }
  fill_chain(next, model);
  fill_attitude_rates(next);
  return next;
}

const std::vector<std::string>& TrajectoryLog::columns() {
  static const std::vector<std::string> cols = {
      "time",         "alpha_v",      "beta_v",       "gamma_v",      "alpha_v_rate", "beta_v_rate",
      "gamma_v_rate", "omega_x",      "omega_y",      "omega_z",      "gamma_slip_rate",
      "phi",          "psi",          "rho",          "phi_rate",     "psi_rate",     "rho_rate",
      "x_p",          "y_p",          "cx",           "cy",           "cz",           "gamma_roll",
      "t_mec_x",      "t_mec_y",      "t_mec_z",      "t_gravity_x",  "t_gravity_y",  "t_gravity_z",
      "t_virtual_x",  "t_virtual_y",  "t_virtual_z",  "t_friction_x", "t_friction_y", "t_friction_z",
      "t_external_x", "t_external_y", "t_external_z", "t_f",          "friction_mode"};
  return cols;
}

void TrajectoryLog::write_csv(std::ostream& out) const {
  const auto& cols = columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    out << (i ? "," : "") << cols[i];
  }
  out << '\n';
  for (const LogRecord& r : records) {
    const SimState& s = r.state;
    const AttitudeState& a = s.attitude;
    const TorqueBreakdown& t = r.torques;
    const double values[] = {s.time,
                             a.alpha_v,
                             a.beta_v,
                             a.gamma_v,
                             a.alpha_rate,
                             a.beta_rate,
                             a.gamma_rate,
                             s.omega.x(),
                             s.omega.y(),
                             s.omega.z(),
                             s.slip.gamma_slip_rate,
                             s.chain.phi,
                             s.chain.psi,
                             s.chain.rho,
                             s.chain.phi_rate,
                             s.chain.psi_rate,
                             s.chain.rho_rate,
                             s.track.x_p,
                             s.track.y_p,
                             s.track.cx,
                             s.track.cy,
                             s.track.cz,
                             s.gamma_roll,
                             t.t_mec.x(),
                             t.t_mec.y(),
                             t.t_mec.z(),
                             t.t_gravity.x(),
                             t.t_gravity.y(),
                             t.t_gravity.z(),
                             t.t_virtual.x(),
                             t.t_virtual.y(),
                             t.t_virtual.z(),
                             t.t_friction.x(),
                             t.t_friction.y(),
                             t.t_friction.z(),
                             t.t_external.x(),
                             t.t_external.y(),
                             t.t_external.z(),
                             t.t_f_scalar};
    for (double v : values) {
      out << format_double(v) << ',';
    }
    out << to_string(t.friction_mode) << '\n';
  }
}

TrajectoryLog simulate(const SimState& initial, const SimModel& model, const RunControls& controls) {
  if (!(controls.t_end >= 0.0) || !(controls.dt > 0.0) || controls.sample_every < 1) {
    throw std::invalid_argument("simulate: need t_end >= 0, dt > 0, sample_every >= 1");
  }
  TrajectoryLog log;
  SimState s = initial;
  const double t0 = s.time;
  auto record = [&] {
    LogRecord r{s, {}};
    r.torques = observe(r.state, model);
    log.records.push_back(std::move(r));
  };
  record();

  const auto steps = static_cast<long long>(std::ceil(controls.t_end / controls.dt - 1e-9));
  for (long long k = 1; k <= steps; ++k) {
    const double target = std::min(t0 + static_cast<double>(k) * controls.dt, t0 + controls.t_end);
    s = step_rk4(s, model, target - s.time);
    s.time = target;
    if (k % controls.sample_every == 0 || k == steps) {
      record();
    }
  }
  return log;
}

} // namespace eggsim
