#include "eggsim/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

namespace eggsim {

namespace {

constexpr double kDeg = kPi / 180.0;

std::string trimmed(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_number(const std::string& key, const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v)) {
    throw ConfigError(key, "expected a finite number, got '" + text + "'");
  }
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "on") {
    return true;
  }
  if (text == "false" || text == "0" || text == "off") {
    return false;
  }
  throw ConfigError(key, "expected true or false, got '" + text + "'");
}

TimeFunction to_function(const std::string& key, const std::string& text) {
  try {
    return TimeFunction::parse(text);
  } catch (const ProfileError& e) {
    throw ConfigError(key, e.what());
  }
}

struct Field {
  std::function<void(ScenarioConfig&, const std::string&)> read;
  std::function<std::string(const ScenarioConfig&)> write;
  bool required = false;
};

template <class Get>
Field number(const std::string& key, Get get, bool required) {
  return {[key, get](ScenarioConfig& c, const std::string& v) { get(c) = to_number(key, v); },
          [get](const ScenarioConfig& c) { return format_double(get(const_cast<ScenarioConfig&>(c))); }, required};
}

template <class Get>
Field function(const std::string& key, Get get) {
  return {[key, get](ScenarioConfig& c, const std::string& v) { get(c) = to_function(key, v); },
          [get](const ScenarioConfig& c) { return get(const_cast<ScenarioConfig&>(c)).to_string(); }, false};
}

template <class Get>
Field flag(const std::string& key, Get get) {
  return {[key, get](ScenarioConfig& c, const std::string& v) { get(c) = to_bool(key, v); },
          [get](const ScenarioConfig& c) { return std::string(get(const_cast<ScenarioConfig&>(c)) ? "true" : "false"); },
          false};
}

// Key order is the serialization order.
const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = [] {
    std::vector<std::pair<std::string, Field>> t;
    auto num = [&](const std::string& key, auto get, bool required) { t.emplace_back(key, number(key, get, required)); };
    num("robot.theta_xy", [](ScenarioConfig& c) -> double& { return c.robot.theta_xy; }, true);
    num("robot.theta_z", [](ScenarioConfig& c) -> double& { return c.robot.theta_z; }, true);
    num("robot.mass", [](ScenarioConfig& c) -> double& { return c.robot.mass; }, true);
    num("robot.r_long", [](ScenarioConfig& c) -> double& { return c.robot.r_long; }, true);
    num("robot.r_short", [](ScenarioConfig& c) -> double& { return c.robot.r_short; }, true);
    num("robot.theta_phi_x", [](ScenarioConfig& c) -> double& { return c.robot.theta_phi_x; }, true);
    num("robot.theta_phi_y", [](ScenarioConfig& c) -> double& { return c.robot.theta_phi_y; }, true);
    num("robot.theta_phi_z", [](ScenarioConfig& c) -> double& { return c.robot.theta_phi_z; }, false);
    num("robot.theta_psi_x", [](ScenarioConfig& c) -> double& { return c.robot.theta_psi_x; }, true);
    num("robot.theta_psi_z", [](ScenarioConfig& c) -> double& { return c.robot.theta_psi_z; }, true);
    num("robot.theta_g_x", [](ScenarioConfig& c) -> double& { return c.robot.theta_g_x; }, true);
    num("robot.theta_g_z", [](ScenarioConfig& c) -> double& { return c.robot.theta_g_z; }, true);
    num("robot.tau_fcrit", [](ScenarioConfig& c) -> double& { return c.robot.tau_fcrit; }, true);
    num("robot.rho_f", [](ScenarioConfig& c) -> double& { return c.robot.rho_f; }, true);

    num("initial.alpha_v", [](ScenarioConfig& c) -> double& { return c.initial.alpha_v_deg; }, false);
    num("initial.beta_v", [](ScenarioConfig& c) -> double& { return c.initial.beta_v_deg; }, false);
    num("initial.gamma_v", [](ScenarioConfig& c) -> double& { return c.initial.gamma_v_deg; }, false);
    num("initial.omega_x", [](ScenarioConfig& c) -> double& { return c.initial.omega.x(); }, false);
    num("initial.omega_y", [](ScenarioConfig& c) -> double& { return c.initial.omega.y(); }, false);
    num("initial.omega_z", [](ScenarioConfig& c) -> double& { return c.initial.omega.z(); }, false);
    num("initial.gamma_slip_rate", [](ScenarioConfig& c) -> double& { return c.initial.gamma_slip_rate; }, false);
    num("initial.rho", [](ScenarioConfig& c) -> double& { return c.initial.rho_deg; }, false);
    num("initial.x_p", [](ScenarioConfig& c) -> double& { return c.initial.x_p; }, false);
    num("initial.y_p", [](ScenarioConfig& c) -> double& { return c.initial.y_p; }, false);

    t.emplace_back("actuator.mu1", function("actuator.mu1", [](ScenarioConfig& c) -> TimeFunction& { return c.mu1_deg; }));
    t.emplace_back("actuator.mu2", function("actuator.mu2", [](ScenarioConfig& c) -> TimeFunction& { return c.mu2_deg; }));
    t.emplace_back("actuator.rho_rate",
                   function("actuator.rho_rate", [](ScenarioConfig& c) -> TimeFunction& { return c.rho_rate; }));

    t.emplace_back("external.frame",
                   Field{[](ScenarioConfig& c, const std::string& v) {
                           if (v == "body") {
                             c.external.frame = TorqueFrame::Body;
                           } else if (v == "world") {
                             c.external.frame = TorqueFrame::World;
                           } else {
                             throw ConfigError("external.frame", "expected body or world, got '" + v + "'");
                           }
                         },
                         [](const ScenarioConfig& c) {
                           return std::string(c.external.frame == TorqueFrame::Body ? "body" : "world");
                         },
                         false});
    t.emplace_back("external.torque_x",
                   function("external.torque_x", [](ScenarioConfig& c) -> TimeFunction& { return c.external.x; }));
    t.emplace_back("external.torque_y",
                   function("external.torque_y", [](ScenarioConfig& c) -> TimeFunction& { return c.external.y; }));
    t.emplace_back("external.torque_z",
                   function("external.torque_z", [](ScenarioConfig& c) -> TimeFunction& { return c.external.z; }));

    t.emplace_back("model.gravity", flag("model.gravity", [](ScenarioConfig& c) -> bool& { return c.gravity; }));
    t.emplace_back("model.friction", flag("model.friction", [](ScenarioConfig& c) -> bool& { return c.friction; }));

    num("run.t_end", [](ScenarioConfig& c) -> double& { return c.run.t_end; }, true);
    num("run.dt", [](ScenarioConfig& c) -> double& { return c.run.dt; }, false);
    t.emplace_back("run.sample_every",
                   Field{[](ScenarioConfig& c, const std::string& v) {
                           const double n = to_number("run.sample_every", v);
                           if (n != std::floor(n) || n < 1 || n > 1e9) {
                             throw ConfigError("run.sample_every", "expected a positive integer, got '" + v + "'");
                           }
                           c.run.sample_every = static_cast<int>(n);
                         },
                         [](const ScenarioConfig& c) { return std::to_string(c.run.sample_every); }, false});
    t.emplace_back("run.output", Field{[](ScenarioConfig& c, const std::string& v) { c.output = v; },
                                       [](const ScenarioConfig& c) { return c.output; }, true});
    return t;
  }();
  return table;
}

const Field* find_field(const std::string& key) {
  for (const auto& [name, f] : fields()) {
    if (name == key) {
      return &f;
    }
  }
  return nullptr;
}

} // namespace

ScenarioConfig ScenarioConfig::parse(std::string_view text) {
  ScenarioConfig c;
  c.external.x = c.external.y = c.external.z = TimeFunction::constant(0.0);
  std::map<std::string, int> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string body = trimmed(hash == std::string::npos ? line : line.substr(0, hash));
    if (body.empty()) {
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
    }
    const std::string key = trimmed(body.substr(0, eq));
    const std::string value = trimmed(body.substr(eq + 1));
    const Field* f = find_field(key);
    if (f == nullptr) {
      throw ConfigError(key, "unknown key");
    }
    if (seen.count(key) != 0) {
      throw ConfigError(key, "duplicate key (first on line " + std::to_string(seen[key]) + ")");
    }
    seen[key] = line_no;
    f->read(c, value);
  }
  for (const auto& [name, f] : fields()) {
    if (f.required && seen.count(name) == 0) {
      throw ConfigError(name, "missing required field");
    }
  }
  if (seen.count("robot.theta_phi_z") == 0) {
    c.robot.theta_phi_z = c.robot.theta_phi_x;
  }
  c.validate();
  return c;
}

ScenarioConfig ScenarioConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError(path.string(), "cannot open config file");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string ScenarioConfig::serialize() const {
  std::string out;
  std::string section;
  for (const auto& [name, f] : fields()) {
    const std::string sec = name.substr(0, name.find('.'));
    if (sec != section) {
      if (!section.empty()) {
        out += '\n';
      }
      section = sec;
    }
    out += name + " = " + f.write(*this) + '\n';
  }
  return out;
}

void ScenarioConfig::validate() const {
  try {
    robot.validate();
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    const std::string name = msg.substr(0, msg.find(' '));
    throw ConfigError("robot." + name, msg);
  }
  if (!(run.t_end >= 0.0)) {
    throw ConfigError("run.t_end", "must be non-negative");
  }
  if (!(run.dt > 0.0)) {
    throw ConfigError("run.dt", "must be positive");
  }
  if (output.empty()) {
    throw ConfigError("run.output", "must not be empty");
  }
  if (initial.beta_v_deg < 0.0 || initial.beta_v_deg > 180.0) {
    throw ConfigError("initial.beta_v", "must lie in [0, 180] degrees");
  }
  const double span = std::max(run.t_end, 1e-3);
  auto check = [&](const TimeFunction& f, const char* key) {
    try {
      f.check_consistency(0.0, span, key);
    } catch (const ProfileError& e) {
      throw ConfigError(key, e.what());
    }
  };
  check(mu1_deg, "actuator.mu1");
  check(mu2_deg, "actuator.mu2");
  check(rho_rate, "actuator.rho_rate");
}

SimModel ScenarioConfig::model() const {
  ActuatorProfile profile{mu1_deg.scaled(kDeg), mu2_deg.scaled(kDeg), rho_rate};
  ModelOptions options{gravity, friction, external};
  return SimModel(robot, std::move(profile), std::move(options));
}

SimState ScenarioConfig::initial_state() const {
  SimState s;
  s.attitude.alpha_v = initial.alpha_v_deg * kDeg;
  s.attitude.beta_v = initial.beta_v_deg * kDeg;
  s.attitude.gamma_v = initial.gamma_v_deg * kDeg;
  s.omega = initial.omega;
  s.slip.gamma_slip_rate = initial.gamma_slip_rate;
  s.chain.rho = initial.rho_deg * kDeg;
  s.track.x_p = initial.x_p;
  s.track.y_p = initial.y_p;
  return prepare_initial_state(s, model());
}

} // namespace eggsim
