// One PASS/FAIL line per acceptance criterion. Exits 0 when all pass, 1 otherwise.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "eggsim/contact_curve.hpp"
#include "eggsim/integrator.hpp"
#include "eggsim/oracles/contact_oracle.hpp"
#include "eggsim/oracles/validation.hpp"

using namespace eggsim;
namespace orc = eggsim::oracles;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("AC%d %s  %s  [%s] (%.2f s)\n", id, o.passed ? "PASS" : "FAIL", title.c_str(), o.detail.c_str(), secs);
  std::fflush(stdout);
  if (!o.passed) {
    ++failures;
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome combine(const orc::CheckResult& structure, const orc::CheckResult& numeric, double elapsed, double budget) {
  Outcome o;
  o.passed = structure.passed && numeric.passed && elapsed < budget;
  o.detail = structure.detail + "; max rel " + fmt(numeric.max_error) + " (tol " + fmt(numeric.tolerance) +
             "); runtime " + fmt(elapsed) + " s < " + fmt(budget) + " s";
  return o;
}

RobotParams desk_robot() {
  RobotParams p;
  p.theta_xy = 0.0021;
  p.theta_z = 0.0014;
  p.mass = 0.85;
  p.r_long = 0.075;
  p.r_short = 0.055;
  p.theta_phi_x = p.theta_phi_y = p.theta_phi_z = 0.00021;
  p.theta_psi_x = 0.00012;
  p.theta_psi_z = 0.00009;
  p.theta_g_x = 0.00008;
  p.theta_g_z = 0.00013;
  p.tau_fcrit = 0.004;
  p.rho_f = 0.0005;
  return p;
}

Outcome ac4() {
  const std::vector<double> ratios{1.0, 1.25, 1.5, 2.0};
  constexpr int kSamples = 181;
  const auto t0 = std::chrono::steady_clock::now();
  const auto curves = contact_curves(ratios, kSamples);
  const orc::CheckResult oracle = orc::check_contact_oracle(ratios, kSamples);
  const double elapsed = seconds_since(t0);
  bool ok = oracle.passed && elapsed < 5.0;
  std::string problems;
  for (const ContactCurve& c : curves) {
    const std::string tag = "ratio " + fmt(c.ratio);
    if (!c.monotone()) {
      ok = false;
      problems += tag + " not monotone; ";
    }
    if (std::abs(c.beta_v_deg.front()) > 1e-12 || std::abs(c.beta_p_deg.front()) > 1e-9 ||
        std::abs(c.beta_v_deg.back() - 90.0) > 1e-12 || std::abs(c.beta_p_deg.back() - 90.0) > 1e-9) {
      ok = false;
      problems += tag + " endpoints off; ";
    }
    for (std::size_t i = 0; i < c.beta_p_deg.size(); ++i) {
      if (c.beta_p_deg[i] > c.beta_v_deg[i] + 1e-12) {
        ok = false;
        problems += tag + " beta_p > beta_v; ";
        break;
      }
    }
  }
  return {ok, problems + "4 curves monotone with (0,0)-(90,90) endpoints, beta_p <= beta_v; oracle max abs " +
                  fmt(oracle.max_error) + " rad (tol 1e-6); runtime " + fmt(elapsed) + " s < 5 s"};
}

// State vector used for self-convergence.
std::vector<double> flatten(const SimState& s) {
  return {s.attitude.alpha_v, s.attitude.beta_v, s.attitude.gamma_v, s.omega.x(), s.omega.y(), s.omega.z(),
          s.track.x_p,        s.track.y_p,       s.track.cx,         s.track.cy,  s.track.cz,  s.chain.rho};
}

SimState run_fixed(SimState s, const SimModel& model, double t_end, double dt) {
  const auto steps = static_cast<long long>(std::llround(t_end / dt));
  for (long long k = 0; k < steps; ++k) {
    s = step_rk4(s, model, dt);
  }
  return s;
}

double distance(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(i < 3 ? wrap_angle(a[i] - b[i]) : a[i] - b[i]));
  }
  return m;
}

Outcome ac5() {
  const orc::CheckResult cons = orc::check_conservation(10.0, 1e-4);

  ModelOptions options;
  options.gravity = true;
  options.friction = false;
  ActuatorProfile profile;
  profile.mu1 = TimeFunction::parse("sin(0.4, 0.7, 0, 0)");
  profile.mu2 = TimeFunction::parse("sin(0.3, 1.1, 0.5, 0)");
  profile.rho_rate = TimeFunction::parse("ramp(0, 1, 50, 250)");
  const SimModel model(desk_robot(), profile, options);
  SimState s0;
  s0.attitude.beta_v = 0.9;
  s0.attitude.alpha_v = 0.2;
  s0.omega = Vector3(0.5, -0.3, 1.0);
  s0 = prepare_initial_state(s0, model);

  const double t_end = 0.4;
  const auto y1 = flatten(run_fixed(s0, model, t_end, 0.02));
  const auto y2 = flatten(run_fixed(s0, model, t_end, 0.01));
  const auto y3 = flatten(run_fixed(s0, model, t_end, 0.005));
  const double order = std::log2(distance(y1, y2) / distance(y2, y3));

  Outcome o;
  o.passed = cons.passed && std::abs(order - 4.0) <= 0.2;
  o.detail = "world L drift " + fmt(cons.max_error) + " (tol 1e-6) over 10 s at dt=1e-4; RK4 order " + fmt(order) +
             " (4 +- 0.2) from dt = 0.02/0.01/0.005";
  return o;
}

Outcome ac6() {
  RobotParams p = desk_robot();
  p.theta_g_z = 1e-3;
  constexpr double kSpin = 500.0;
  constexpr double kTorque = 0.01;
  constexpr double kDuration = 5.0;
  ModelOptions options;
  options.gravity = false;
  options.friction = false;
  options.external.frame = TorqueFrame::Body;
  options.external.x = TimeFunction::constant(kTorque);
  ActuatorProfile profile;
  profile.rho_rate = TimeFunction::constant(kSpin);
  const SimModel model(p, profile, options);

  SimState s;
  s.attitude.beta_v = 0.5 * kPi;
  s = prepare_initial_state(s, model);
  auto gyro_axis = [&](const SimState& st) {
    // With both gimbal angles held at zero the gyro axis is the shell z axis.
    return Vector3(body_to_world(st.attitude) * Vector3::UnitZ());
  };
  const Vector3 axis0 = gyro_axis(s);
  s = run_fixed(s, model, kDuration, 1e-4);
  const Vector3 axis1 = gyro_axis(s);
  const double swept = std::atan2(axis0.cross(axis1).norm(), axis0.dot(axis1));
  const double rate = swept / kDuration;
  const double expected = kTorque / (p.theta_g_z * kSpin);
  const double rel = std::abs(rate - expected) / expected;
  return {rel <= 0.05, "measured " + fmt(rate) + " rad/s vs T/(theta_g_z rho_rate) = " + fmt(expected) +
                           " rad/s, rel err " + fmt(rel) + " (tol 0.05)"};
}

Outcome ac7() {
  RobotParams p = desk_robot();
  p.rho_f = 0.01;
  const double tau = p.tau_fcrit;
  ModelOptions options;
  options.gravity = false;
  options.friction = true;
  options.external.frame = TorqueFrame::World;
  options.external.z = TimeFunction::parse("ramp(0, 1, 0, " + format_double(2.0 * tau) + ") + ramp(1.5, 2.5, 0, " +
                                           format_double(-2.0 * tau) + ")");
  const SimModel model(p, ActuatorProfile{}, options);

  SimState s;
  s.attitude.beta_v = 1.0;
  s = prepare_initial_state(s, model);

  constexpr double dt = 1e-4;
  constexpr double t_end = 20.0;
  const auto steps = static_cast<long long>(std::llround(t_end / dt));
  bool stiction_ok = true;
  double max_cancel = 0.0;
  bool crossed = false;
  bool slipping_nonzero = true;
  double peak_slip = 0.0;
  bool decays = true;
  double prev_abs_slip = 0.0;
  int stiction_steps = 0, stokes_steps = 0;
  bool returned = false;
  FrictionMode previous = s.friction_mode;

  for (long long k = 0; k <= steps; ++k) {
    if (k > 0) {
      s = step_rk4(s, model, dt);
    }
    SimState probe = s;
    const DynamicsResult dyn = [&] {
      TorqueOptions opt;
      opt.gravity = false;
      opt.external_local = body_to_world(probe.attitude).transpose() * options.external.at(probe.time);
      opt.mode = probe.friction_mode;
      observe(probe, model);
      return evaluate_dynamics(probe.chain, probe.attitude, probe.slip, model.chain(), p, model.shape(), opt);
    }();
    const TorqueBreakdown& t = dyn.torques;
    const double slip = s.slip.gamma_slip_rate;
    if (s.friction_mode == FrictionMode::Stiction) {
      ++stiction_steps;
      if (crossed) {
        returned = true;
      }
      const Vector3 net = t.t_gravity + t.t_external - dyn.factors.b - t.t_virtual + t.t_friction;
      max_cancel = std::max(max_cancel, std::abs((body_to_world(s.attitude) * net).z()));
      if (slip != 0.0 || std::abs(t.t_f_scalar) > tau) {
        stiction_ok = false;
      }
    } else {
      ++stokes_steps;
      crossed = true;
      // The slip starts from zero at the step that switches into Stokes.
      if (slip == 0.0 && previous == FrictionMode::Stokes) {
        slipping_nonzero = false;
      }
      peak_slip = std::max(peak_slip, std::abs(slip));
      // After the applied torque is gone the Stokes torque must shrink the slip.
      if (s.time > 2.5 + dt && std::abs(slip) > prev_abs_slip) {
        decays = false;
      }
    }
    prev_abs_slip = std::abs(slip);
    previous = s.friction_mode;
  }
  Outcome o;
  o.passed = stiction_ok && crossed && slipping_nonzero && decays && returned && max_cancel <= 1e-12;
  o.detail = std::string("stiction steps ") + std::to_string(stiction_steps) + " with slip==0 and |t_f|<=tau: " +
             (stiction_ok ? "yes" : "no") + "; Stokes steps " + std::to_string(stokes_steps) + ", slip nonzero after switch: " +
             (slipping_nonzero ? "yes" : "no") + ", peak |slip| " +
             fmt(peak_slip) + " rad/s, monotone decay after unload: " + (decays ? "yes" : "no") +
             ", back in stiction: " + (returned ? "yes" : "no") + "; max world-z residual in stiction " +
             fmt(max_cancel) + " (tol 1e-12)";
  return o;
}

} // namespace

int main() {
  report(1, "angular momentum expansion equivalence", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const auto s = orc::check_appendix_a_structure(orc::default_golden_dir());
    const auto n = orc::check_appendix_a_numeric(1000, 11);
    return combine(s, n, seconds_since(t0), 5.0);
  });
  report(2, "mechanical torque expansion equivalence", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const auto s = orc::check_appendix_b_structure(orc::default_golden_dir());
    const auto n = orc::check_appendix_b_numeric(1000, 12);
    return combine(s, n, seconds_since(t0), 10.0);
  });
  report(3, "T_mec factorization and combined-inertia symmetry", [] {
    const auto lin = orc::check_factorization_linearity(1000, 13);
    const auto sym = orc::check_theta_com_symmetry(100, 14);
    return Outcome{lin.passed && sym.passed, "affine residual " + fmt(lin.max_error) +
                                                  " (tol 1e-12); theta_com vs tensor sum over 100 poses " +
                                                  fmt(sym.max_error) + " (tol 1e-12)"};
  });
  report(4, "Contact curve reproduction", ac4);
  report(5, "Free-rotation conservation and RK4 order", ac5);
  report(6, "Gyroscopic precession rate", ac6);
  report(7, "Friction-mode contract", ac7);
  report(8, "Euler-rate finite-difference check", [] {
    const auto r = orc::check_euler_rates_fd(1000, 15);
    return Outcome{r.passed, r.detail + "; max abs " + fmt(r.max_error) + " (tol 1e-6)"};
  });
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
