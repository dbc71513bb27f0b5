#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "eggsim/symbolic.hpp"

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("eggsim_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  CliRun run(const std::string& args) const {
    const fs::path out = dir_ / "stdout.txt";
    const fs::path err = dir_ / "stderr.txt";
    const std::string cmd = "cd '" + dir_.string() + "' && '" EGG_SIM_BIN "' " + args + " > '" + out.string() +
                            "' 2> '" + err.string() + "'";
    const int status = std::system(cmd.c_str());
    CliRun r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name) << text;
    return dir_ / name;
  }

  fs::path dir_;
};

const char* kTilted = R"(robot.theta_xy = 0.0021
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
initial.beta_v = 20
actuator.rho_rate = ramp(0, 0.5, 0, 400)
run.t_end = 1
run.dt = 1e-4
run.sample_every = 100
run.output = tilted.csv
)";

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

} // namespace

TEST_F(CliTest, SimulateWritesSampledTrajectory) {
  write("tilted.cfg", kTilted);
  const CliRun r = run("simulate tilted.cfg");
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string csv = slurp(dir_ / "tilted.csv");
  EXPECT_EQ(lines(csv), 102u);
  EXPECT_EQ(csv.rfind("time,", 0), 0u);
}

TEST_F(CliTest, SimulateIsReproducible) {
  write("tilted.cfg", kTilted);
  ASSERT_EQ(run("simulate tilted.cfg").code, 0);
  const std::string first = slurp(dir_ / "tilted.csv");
  ASSERT_EQ(run("simulate tilted.cfg").code, 0);
  EXPECT_EQ(slurp(dir_ / "tilted.csv"), first);
}

TEST_F(CliTest, SimulateRunsSeveralConfigsConcurrently) {
  write("a.cfg", kTilted);
  write("b.cfg", std::regex_replace(std::string(kTilted), std::regex("tilted.csv"), "b.csv"));
  const CliRun r = run("simulate a.cfg b.cfg");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(dir_ / "tilted.csv"), slurp(dir_ / "b.csv"));
  EXPECT_LT(r.out.find("a.cfg"), r.out.find("b.cfg"));
}

TEST_F(CliTest, MissingMassIsAConfigError) {
  write("bad.cfg", std::regex_replace(std::string(kTilted), std::regex("robot.mass = 0.85\n"), ""));
  const CliRun r = run("simulate bad.cfg");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("mass"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(dir_ / "tilted.csv"));
}

TEST_F(CliTest, ValidatePasses) {
  const CliRun r = run("validate");
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\"passed\": true"), std::string::npos) << r.out;
}

TEST_F(CliTest, ValidateReportsATamperedGolden) {
  const fs::path golden = dir_ / "golden";
  fs::create_directories(golden);
  fs::copy_file(fs::path(EGGSIM_GOLDEN_DIR) / "appendix_a.txt", golden / "appendix_a.txt");
  std::istringstream in(slurp(fs::path(EGGSIM_GOLDEN_DIR) / "appendix_b.txt"));
  std::ostringstream kept;
  bool dropped = false;
  for (std::string line; std::getline(in, line);) {
    if (!dropped && !line.empty() && line[0] != '#') {
      dropped = true;
      continue;
    }
    kept << line << '\n';
  }
  ASSERT_TRUE(dropped);
  write("golden/appendix_b.txt", kept.str());
  const CliRun r = run("validate --golden-dir golden");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("appendix_b_structure"), std::string::npos) << r.err;
  EXPECT_EQ(r.err.find("appendix_a_structure"), std::string::npos) << r.err;
}

TEST_F(CliTest, ExpandMatchesGolden) {
  const CliRun r = run("expand L");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(lines(r.out), 10u);
  const auto golden = eggsim::symbolic::SymbolicSum::read_file(fs::path(EGGSIM_GOLDEN_DIR) / "appendix_a.txt");
  EXPECT_EQ(r.out, golden.text());
  const CliRun b = run("expand B");
  const auto golden_b = eggsim::symbolic::SymbolicSum::read_file(fs::path(EGGSIM_GOLDEN_DIR) / "appendix_b.txt");
  EXPECT_EQ(b.out, golden_b.text());
  EXPECT_NE(run("expand X").code, 0);
}

TEST_F(CliTest, ContactCurveExamples) {
  const CliRun r = run("contact-curve --ratios 1,2 --samples 3");
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "ratio,beta_v_deg,beta_p_deg");
  std::vector<std::vector<double>> rows;
  for (std::string line; std::getline(in, line);) {
    std::vector<double> row;
    std::istringstream cells(line);
    for (std::string c; std::getline(cells, c, ',');) {
      row.push_back(std::stod(c));
    }
    rows.push_back(row);
  }
  ASSERT_EQ(rows.size(), 6u);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(rows[i][2], rows[i][1], 1e-9);
  }
  EXPECT_NEAR(rows[4][1], 45.0, 1e-12);
  EXPECT_NEAR(rows[4][2], 14.036243467926479, 1e-6);
  EXPECT_EQ(run("contact-curve --ratios 0.5").code, 2);
}
