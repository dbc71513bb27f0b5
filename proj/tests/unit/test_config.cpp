#include <gtest/gtest.h>

#include <regex>

#include "eggsim/config.hpp"

using namespace eggsim;

namespace {

const char* kBase = R"(# desk robot
robot.theta_xy = 0.0021
robot.theta_z = 0.0014
robot.mass = 0.85
robot.r_long = 0.075
robot.r_short = 0.055
robot.theta_phi_x = 0.00021
robot.theta_phi_y = 0.00021
robot.theta_psi_x = 0.00012
robot.theta_psi_z = 0.00009
robot.theta_g_x = 0.00008
robot.theta_g_z = 0.00013
robot.tau_fcrit = 0.004
robot.rho_f = 0.0005

initial.beta_v = 30
initial.alpha_v = 90
actuator.mu1 = sin(10, 0.5, 0, 0)
actuator.rho_rate = ramp(0, 1, 0, 300)

run.t_end = 0.5
run.output = out.csv
)";

std::string without(const std::string& key) {
  return std::regex_replace(std::string(kBase), std::regex(key + " = [^\n]*\n"), "");
}

std::string field_of(const std::string& text) {
  try {
    ScenarioConfig::parse(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

} // namespace

TEST(Config, ParsesAndConvertsDegrees) {
  const ScenarioConfig c = ScenarioConfig::parse(kBase);
  EXPECT_EQ(c.robot.mass, 0.85);
  EXPECT_EQ(c.robot.theta_phi_z, c.robot.theta_phi_x);
  EXPECT_EQ(c.run.dt, 1e-4);
  EXPECT_EQ(c.run.sample_every, 1);
  EXPECT_EQ(c.output, "out.csv");
  EXPECT_TRUE(c.gravity);
  EXPECT_TRUE(c.friction);
  const SimState s = c.initial_state();
  EXPECT_NEAR(s.attitude.beta_v, kPi / 6, 1e-15);
  EXPECT_NEAR(s.attitude.alpha_v, kPi / 2, 1e-15);
  EXPECT_NEAR(c.model().profile().mu1.value(0.5), 10.0 * kPi / 180.0, 1e-12);
}

TEST(Config, SerializeIsAFixedPoint) {
  const ScenarioConfig a = ScenarioConfig::parse(kBase);
  const std::string text = a.serialize();
  const ScenarioConfig b = ScenarioConfig::parse(text);
  EXPECT_EQ(b.serialize(), text);
  EXPECT_TRUE(a == b);
}

TEST(Config, MissingRequiredKeyNamesIt) {
  EXPECT_EQ(field_of(without("robot.mass")), "robot.mass");
  EXPECT_EQ(field_of(without("run.t_end")), "run.t_end");
  EXPECT_EQ(field_of(without("run.output")), "run.output");
}

TEST(Config, RejectsMalformedInput) {
  EXPECT_EQ(field_of(std::string(kBase) + "robot.colour = 3\n"), "robot.colour");
  EXPECT_EQ(field_of(std::string(kBase) + "robot.mass = 1\n"), "robot.mass");
  EXPECT_EQ(field_of(std::regex_replace(std::string(kBase), std::regex("mass = 0.85"), "mass = heavy")), "robot.mass");
  EXPECT_EQ(field_of(std::regex_replace(std::string(kBase), std::regex("mass = 0.85"), "mass = -1")), "robot.mass");
  EXPECT_EQ(field_of(without("initial.beta_v") + "initial.beta_v = 190\n"), "initial.beta_v");
  EXPECT_EQ(field_of(std::string(kBase) + "model.gravity = maybe\n"), "model.gravity");
  EXPECT_EQ(field_of(std::string(kBase) + "run.sample_every = 2.5\n"), "run.sample_every");
  EXPECT_EQ(field_of(std::string(kBase) + "run.dt = 0\n"), "run.dt");
  EXPECT_EQ(field_of(std::string(kBase) + "actuator.mu2 = ramp(1, 1, 0, 1)\n"), "actuator.mu2");
  EXPECT_EQ(field_of(std::string(kBase) + "external.frame = sideways\n"), "external.frame");
  EXPECT_THROW(ScenarioConfig::parse(std::string(kBase) + "no equals sign\n"), ConfigError);
}

TEST(Config, BooleanSpellings) {
  for (const char* v : {"false", "0", "off"}) {
    EXPECT_FALSE(ScenarioConfig::parse(std::string(kBase) + "model.friction = " + v + "\n").friction);
  }
  for (const char* v : {"true", "1", "on"}) {
    EXPECT_TRUE(ScenarioConfig::parse(std::string(kBase) + "model.gravity = " + v + "\n").gravity);
  }
}

TEST(Config, LoadReportsMissingFile) {
  EXPECT_THROW(ScenarioConfig::load("/nonexistent/scenario.cfg"), ConfigError);
}
