#include "eggsim/oracles/validation.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "eggsim/integrator.hpp"
#include "eggsim/oracles/contact_oracle.hpp"
#include "eggsim/symbolic.hpp"

#ifndef EGGSIM_GOLDEN_DIR
#define EGGSIM_GOLDEN_DIR "data"
#endif

namespace eggsim::oracles {

namespace sym = eggsim::symbolic;

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::vector<std::string> ValidationReport::failed_names() const {
  std::vector<std::string> out;
  for (const CheckResult& c : checks) {
    if (!c.passed) {
      out.push_back(c.name);
    }
  }
  return out;
}

std::string ValidationReport::to_json() const {
  nlohmann::ordered_json j;
  j["passed"] = passed();
  j["failed"] = failed_names();
  j["checks"] = nlohmann::ordered_json::array();
  for (const CheckResult& c : checks) {
    j["checks"].push_back({{"name", c.name},
                           {"passed", c.passed},
                           {"max_error", c.max_error},
                           {"tolerance", c.tolerance},
                           {"detail", c.detail}});
  }
  return j.dump(2);
}

std::string ValidationReport::to_text() const {
  std::ostringstream s;
  for (const CheckResult& c : checks) {
    s << (c.passed ? "PASS " : "FAIL ") << c.name << "  max_error=" << c.max_error << " tol=" << c.tolerance
      << "  " << c.detail << '\n';
  }
  s << (passed() ? "all checks passed" : "failed checks:");
  for (const std::string& n : failed_names()) {
    s << ' ' << n;
  }
  s << '\n';
  return s.str();
}

std::filesystem::path default_golden_dir() { return EGGSIM_GOLDEN_DIR; }

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Vector3 random_vector(std::mt19937_64& rng, double scale) {
  return {uniform(rng, -scale, scale), uniform(rng, -scale, scale), uniform(rng, -scale, scale)};
}

CheckResult structure_check(const std::string& name, const std::filesystem::path& file, const sym::SymbolicSum& expected) {
  CheckResult r{name, false, 0.0, 0.0, ""};
  sym::SymbolicSum golden;
  try {
    golden = sym::SymbolicSum::read_file(file);
  } catch (const std::exception& e) {
    r.max_error = 1.0;
    r.detail = e.what();
    return r;
  }
  r.passed = golden == expected;
  // Symmetric difference of the two multisets, counted in terms.
  auto a = golden.terms();
  auto b = expected.terms();
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<sym::SymbolicTerm> diff;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(diff));
  r.max_error = static_cast<double>(diff.size());
  r.detail = "golden " + std::to_string(golden.size()) + " terms, expanded " + std::to_string(expected.size()) +
             " terms, " + std::to_string(diff.size()) + " differing";
  if (!diff.empty()) {
    r.detail += " (first: " + diff.front().text() + ")";
  }
  return r;
}

} // namespace

RobotParams random_params(std::mt19937_64& rng) {
  RobotParams p;
  p.theta_xy = uniform(rng, 0.05, 1.0);
  p.theta_z = uniform(rng, 0.05, 1.0);
  p.mass = uniform(rng, 0.5, 3.0);
  p.r_short = uniform(rng, 0.05, 0.2);
  p.r_long = p.r_short * uniform(rng, 1.0, 2.5);
  p.theta_phi_x = uniform(rng, 0.01, 0.5);
  p.theta_phi_y = uniform(rng, 0.01, 0.5);
  p.theta_phi_z = uniform(rng, 0.01, 0.5);
  p.theta_psi_x = uniform(rng, 0.01, 0.5);
  p.theta_psi_z = uniform(rng, 0.01, 0.5);
  p.theta_g_x = uniform(rng, 0.01, 0.5);
  p.theta_g_z = uniform(rng, 0.01, 0.5);
  p.tau_fcrit = uniform(rng, 0.0, 1.0);
  p.rho_f = uniform(rng, 0.0, 1.0);
  return p;
}

RobotParams symmetric_params(std::mt19937_64& rng) {
  RobotParams p = random_params(rng);
  p.theta_phi_y = p.theta_phi_x;
  // theta_psi_x + theta_g_x = theta_psi_z + theta_g_z with all entries positive.
  p.theta_psi_z = p.theta_psi_x + p.theta_g_x - p.theta_g_z;
  if (p.theta_psi_z <= 0.0) {
    p.theta_g_z = 0.5 * (p.theta_psi_x + p.theta_g_x);
    p.theta_psi_z = p.theta_psi_x + p.theta_g_x - p.theta_g_z;
  }
  return p;
}

ChainState random_chain_state(std::mt19937_64& rng) {
  ChainState s;
  s.phi = uniform(rng, -kPi, kPi);
  s.psi = uniform(rng, -kPi, kPi);
  s.rho = uniform(rng, -kPi, kPi);
  s.phi_rate = uniform(rng, -5.0, 5.0);
  s.psi_rate = uniform(rng, -5.0, 5.0);
  s.rho_rate = uniform(rng, -500.0, 500.0);
  s.phi_acc = uniform(rng, -20.0, 20.0);
  s.psi_acc = uniform(rng, -20.0, 20.0);
  s.rho_acc = uniform(rng, -100.0, 100.0);
  s.omega = random_vector(rng, 5.0);
  s.omega_dot = random_vector(rng, 20.0);
  return s;
}

double relative_error(const Vector3& a, const Vector3& b) {
  const double scale = b.norm();
  return scale > 0.0 ? (a - b).norm() / scale : (a - b).norm();
}

CheckResult check_appendix_a_structure(const std::filesystem::path& golden_dir) {
  return structure_check("appendix_a_structure", golden_dir / "appendix_a.txt", sym::expand_L());
}

CheckResult check_appendix_b_structure(const std::filesystem::path& golden_dir) {
  return structure_check("appendix_b_structure", golden_dir / "appendix_b.txt", sym::expand_B());
}

CheckResult check_appendix_a_numeric(int states, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const sym::SymbolicSum l = sym::expand_L();
  CheckResult r{"appendix_a_numeric", true, 0.0, 1e-12, ""};
  for (int i = 0; i < states; ++i) {
    const FrameChain chain = FrameChain::from_params(random_params(rng));
    const ChainState s = random_chain_state(rng);
    const double e = relative_error(sym::evaluate(l, sym::Bindings::from_state(chain, s)),
                                    total_angular_momentum(chain, s));
    r.max_error = std::max(r.max_error, e);
  }
  r.passed = r.max_error <= r.tolerance;
  r.detail = std::to_string(states) + " random states, expanded L vs recursion";
  return r;
}

CheckResult check_appendix_b_numeric(int states, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const sym::SymbolicSum b = sym::expand_B();
  CheckResult r{"appendix_b_numeric", true, 0.0, 1e-12, ""};
  for (int i = 0; i < states; ++i) {
    const FrameChain chain = FrameChain::from_params(random_params(rng));
    ChainState s = random_chain_state(rng);
    s.omega_dot.setZero();
    const double e =
        relative_error(sym::evaluate(b, sym::Bindings::from_state(chain, s)), mechanical_torque(chain, s));
    r.max_error = std::max(r.max_error, e);
  }
  r.passed = r.max_error <= r.tolerance;
  r.detail = std::to_string(states) + " random states, expanded B vs recursion at zero omega_dot";
  return r;
}

CheckResult check_tmec_structure() {
  CheckResult r{"tmec_structure", false, 0.0, 0.0, ""};
  const sym::SymbolicSum tmec = sym::expand_Tmec();
  const sym::SymbolicSum dw = tmec.only_with(sym::AtomKind::OmegaBodyDot);
  int mismatches = 0;
  std::string what;
  auto expect = [&](bool ok, const char* label) {
    if (!ok) {
      ++mismatches;
      what += std::string(what.empty() ? "" : ", ") + label;
    }
  };
  expect(tmec == sym::expand_Tmec_recursive(), "product rule vs differentiated recursion");
  expect(dw == sym::expand_theta_com_times_omega_dot(), "omega_dot terms vs nested combined inertia");
  expect(tmec.without(sym::AtomKind::OmegaBodyDot) == sym::expand_B(), "B partition");
  expect(tmec.size() == dw.size() + sym::expand_B().size(), "term count");
  r.passed = mismatches == 0;
  r.max_error = mismatches;
  r.detail = "T_mec " + std::to_string(tmec.size()) + " terms, omega_dot part " + std::to_string(dw.size()) +
             " terms" + (what.empty() ? "" : "; mismatch: " + what);
  return r;
}

CheckResult check_factorization_linearity(int states, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  CheckResult r{"factorization_linearity", true, 0.0, 1e-12, ""};
  for (int i = 0; i < states; ++i) {
    const FrameChain chain = FrameChain::from_params(random_params(rng));
    const ChainState s = random_chain_state(rng);
    const TmecFactors f = factorize_tmec(chain, s);
    const Vector3 direct = mechanical_torque(chain, s);
    r.max_error = std::max(r.max_error, relative_error(f.theta_com * s.omega_dot + f.b, direct));
  }
  r.passed = r.max_error <= r.tolerance;
  r.detail = std::to_string(states) + " random states, theta_com*omega_dot + b vs recursive T_mec";
  return r;
}

CheckResult check_theta_com_symmetry(int poses, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  CheckResult r{"theta_com_symmetry", true, 0.0, 1e-12, ""};
  const RobotParams p = symmetric_params(rng);
  const FrameChain chain = FrameChain::from_params(p);
  Matrix3 sum = Matrix3::Zero();
  for (const FrameEntry& f : chain.frames) {
    sum += f.inertia();
  }
  for (int i = 0; i < poses; ++i) {
    const ChainState s = random_chain_state(rng);
    const Matrix3 m = combined_inertia(chain, s);
    r.max_error = std::max(r.max_error, (m - sum).norm() / sum.norm());
  }
  r.passed = r.max_error <= r.tolerance;
  r.detail = std::to_string(poses) + " random gimbal poses, combined inertia vs plain tensor sum";
  return r;
}

namespace {

RobotParams top_params() {
  RobotParams p;
  p.theta_xy = 0.02;
  p.theta_z = 0.012;
  p.mass = 1.2;
  p.r_long = 0.1;
  p.r_short = 0.07;
  p.theta_phi_x = p.theta_phi_y = 0.002;
  p.theta_phi_z = 0.003;
  p.theta_psi_x = 0.0015;
  p.theta_psi_z = 0.001;
  p.theta_g_x = 0.0008;
  p.theta_g_z = 0.0012;
  p.tau_fcrit = 0.1;
  p.rho_f = 0.01;
  return p;
}

} // namespace

CheckResult check_conservation(double t_end, double dt) {
  CheckResult r{"conservation", true, 0.0, 1e-6, ""};
  ModelOptions options;
  options.gravity = false;
  options.friction = false;
  const SimModel model(top_params(), ActuatorProfile{}, options);

  SimState s;
  s.attitude.alpha_v = 0.3;
  s.attitude.beta_v = 1.1;
  s.attitude.gamma_v = -0.4;
  s.omega = Vector3(0.8, -0.5, 2.0);
  s = prepare_initial_state(s, model);

  auto world_momentum = [&](const SimState& st) {
    return Vector3(body_to_world(st.attitude) * total_angular_momentum(model.chain(), st.chain));
  };
  const Vector3 l0 = world_momentum(s);
  const auto steps = static_cast<long long>(std::llround(t_end / dt));
  try {
    for (long long k = 0; k < steps; ++k) {
      s = step_rk4(s, model, dt);
      r.max_error = std::max(r.max_error, relative_error(world_momentum(s), l0));
    }
  } catch (const std::exception& e) {
    r.passed = false;
    r.max_error = 1.0;
    r.detail = e.what();
    return r;
  }
  r.passed = r.max_error <= r.tolerance;
  r.detail = "world-frame L drift over " + format_double(t_end) + " s at dt=" + format_double(dt);
  return r;
}

CheckResult check_contact_oracle(const std::vector<double>& ratios, int samples) {
  CheckResult r{"contact_oracle", true, 0.0, 1e-6, ""};
  const auto oracle = lowest_point_sweep(ratios, samples);
  for (std::size_t k = 0; k < ratios.size(); ++k) {
    const EllipsoidShape shape(ratios[k], 1.0);
    for (int i = 0; i < samples; ++i) {
      const double bv = 0.5 * kPi * i / (samples - 1);
      r.max_error = std::max(r.max_error, std::abs(contact_point(bv, shape).beta_p - oracle[k][i]));
    }
  }
  r.passed = r.max_error <= r.tolerance;
  r.detail = "absolute rad, closed-form contact angle vs lowest-point search at " + std::to_string(samples) +
             " inclinations x " + std::to_string(ratios.size()) + " ratios";
  return r;
}

namespace {

struct AngleTrack {
  double c0, amp, freq, phase, slope;
  double value(double t) const { return c0 + slope * t + amp * std::sin(freq * t + phase); }
  double rate(double t) const { return slope + amp * freq * std::cos(freq * t + phase); }
};

AngleTrack random_track(std::mt19937_64& rng, double c0) {
  return {c0, uniform(rng, 0.0, 0.3), uniform(rng, 0.2, 3.0), uniform(rng, -kPi, kPi), uniform(rng, -1.0, 1.0)};
}

Matrix3 rotation(double a, double b, double c) { return rot_z(a) * rot_x(b) * rot_z(c); }

Vector3 vee(const Matrix3& m) {
  return {0.5 * (m(2, 1) - m(1, 2)), 0.5 * (m(0, 2) - m(2, 0)), 0.5 * (m(1, 0) - m(0, 1))};
}

} // namespace

CheckResult check_euler_rates_fd(int trajectories, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  CheckResult r{"euler_rates_fd", true, 0.0, 1e-6, ""};
  constexpr double h = 1e-6;
  int bad_lock = 0;
  for (int n = 0; n < trajectories; ++n) {
    const AngleTrack ta = random_track(rng, uniform(rng, -kPi, kPi));
    AngleTrack tb = random_track(rng, uniform(rng, 0.6, kPi - 0.6));
    tb.amp = std::min(tb.amp, 0.25);
    tb.slope = 0.0;
    const AngleTrack tc = random_track(rng, uniform(rng, -kPi, kPi));
    for (int k = 0; k < 5; ++k) {
      const double t = uniform(rng, 0.0, 2.0);
      const double a = ta.value(t), b = tb.value(t), c = tc.value(t);
      const Matrix3 rot = rotation(a, b, c);
      const Matrix3 fd = (rotation(ta.value(t + h), tb.value(t + h), tc.value(t + h)) -
                          rotation(ta.value(t - h), tb.value(t - h), tc.value(t - h))) /
                         (2.0 * h);
      const Vector3 omega = vee(rot.transpose() * fd);
      const EulerRates er = euler_rates(omega, b, c);
      const Matrix3 rebuilt = rot_z_dot(a, er.alpha_rate) * rot_x(b) * rot_z(c) +
                              rot_z(a) * rot_x_dot(b, er.beta_rate) * rot_z(c) +
                              rot_z(a) * rot_x(b) * rot_z_dot(c, er.gamma_rate);
      r.max_error = std::max(r.max_error, (rebuilt - fd).cwiseAbs().maxCoeff());
    }
    // Near the lock the regularized map must stay finite and bounded.
    const double b_lock = uniform(rng, -1e-7, 1e-7);
    const Vector3 omega = random_vector(rng, 3.0);
    const EulerRates lr = euler_rates_regularized(omega, b_lock, uniform(rng, -kPi, kPi));
    const double bound = omega.norm() * (1.0 + 1.0 / kGimbalLockSine);
    if (!std::isfinite(lr.alpha_rate) || !std::isfinite(lr.beta_rate) || !std::isfinite(lr.gamma_rate) ||
        std::abs(lr.alpha_rate) > bound || std::abs(lr.gamma_rate) > bound + omega.norm() ||
        std::abs(lr.beta_rate) > omega.norm() * (1.0 + 1e-12)) {
      ++bad_lock;
    }
  }
  r.passed = r.max_error <= r.tolerance && bad_lock == 0;
  r.detail = "absolute, rebuilt dR/dt vs central difference (h=1e-6) on " + std::to_string(trajectories) +
             " trajectories; " + std::to_string(bad_lock) + " unbounded near-lock evaluations";
  return r;
}

ValidationReport run_validation(const ValidationOptions& o) {
  ValidationReport report;
  report.checks.push_back(check_appendix_a_structure(o.golden_dir));
  report.checks.push_back(check_appendix_a_numeric(o.states, o.seed));
  report.checks.push_back(check_appendix_b_structure(o.golden_dir));
  report.checks.push_back(check_appendix_b_numeric(o.states, o.seed + 1));
  report.checks.push_back(check_tmec_structure());
  report.checks.push_back(check_factorization_linearity(o.states, o.seed + 2));
  report.checks.push_back(check_theta_com_symmetry(100, o.seed + 3));
  report.checks.push_back(check_conservation(o.conservation_t_end, o.conservation_dt));
  report.checks.push_back(check_contact_oracle({1.0, 1.25, 1.5, 2.0}, 181));
  report.checks.push_back(check_euler_rates_fd(o.states, o.seed + 4));
  return report;
}

} // namespace eggsim::oracles
