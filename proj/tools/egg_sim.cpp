#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "eggsim/batch.hpp"
#include "eggsim/contact_curve.hpp"
#include "eggsim/oracles/validation.hpp"
#include "eggsim/symbolic.hpp"

namespace {

int cmd_simulate(const std::vector<std::string>& configs) {
  const int threads = std::min<int>(eggsim::scenario_thread_cap(), static_cast<int>(configs.size()));
  const auto results = eggsim::run_scenarios(configs, threads);
  int code = 0;
  for (const auto& r : results) {
    if (r.exit_code == 0) {
      std::cout << r.summary;
    } else {
      std::cerr << r.message << '\n';
      code = std::max(code, r.exit_code);
    }
  }
  return code;
}

int cmd_contact_curve(const std::vector<double>& ratios, int samples, const std::string& output) {
  std::vector<eggsim::ContactCurve> curves;
  try {
    curves = eggsim::contact_curves(ratios, samples);
  } catch (const std::invalid_argument& e) {
    std::cerr << "contact-curve: " << e.what() << '\n';
    return 2;
  }
  if (output.empty()) {
    eggsim::write_contact_curves_csv(std::cout, curves);
    return 0;
  }
  std::ofstream out(output);
  eggsim::write_contact_curves_csv(out, curves);
  if (!out) {
    std::cerr << "contact-curve: cannot write " << output << '\n';
    return 4;
  }
  return 0;
}

int cmd_validate(const std::string& golden_dir, const std::string& format) {
  eggsim::oracles::ValidationOptions options;
  if (!golden_dir.empty()) {
    options.golden_dir = golden_dir;
  }
  const auto report = eggsim::oracles::run_validation(options);
  std::cout << (format == "text" ? report.to_text() : report.to_json() + "\n");
  if (!report.passed()) {
    std::cerr << "failed checks:";
    for (const auto& n : report.failed_names()) {
      std::cerr << ' ' << n;
    }
    std::cerr << '\n';
    return 1;
  }
  return 0;
}

int cmd_expand(const std::string& target) {
  namespace sym = eggsim::symbolic;
  const sym::SymbolicSum sum = target == "L" ? sym::expand_L() : target == "B" ? sym::expand_B() : sym::expand_Tmec();
  std::cout << sum.text();
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rolling egg robot simulator"};
  app.require_subcommand(1);

  std::vector<std::string> configs;
  auto* simulate = app.add_subcommand("simulate", "Integrate scenario files and write their trajectories");
  simulate->add_option("config", configs, "Scenario files")->required()->check(CLI::ExistingFile);

  std::vector<double> ratios{1.0, 1.25, 1.5, 2.0};
  int samples = 91;
  std::string curve_output;
  auto* curve = app.add_subcommand("contact-curve", "Contact angle versus inclination per axis ratio (CSV)");
  curve->add_option("--ratios", ratios, "Axis ratios r_long/r_short, each >= 1")->delimiter(',');
  curve->add_option("--samples", samples, "Inclinations per curve over [0, 90] degrees")->check(CLI::Range(2, 1000000));
  curve->add_option("-o,--output", curve_output, "Output file (default stdout)");

  std::string golden_dir;
  std::string format = "json";
  auto* validate = app.add_subcommand("validate", "Run the self-check suite");
  validate->add_option("--golden-dir", golden_dir, "Directory with appendix_a.txt and appendix_b.txt");
  validate->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "text"}));

  std::string target;
  auto* expand = app.add_subcommand("expand", "Print an expanded term sum");
  expand->add_option("target", target, "L, B or Tmec")->required()->check(CLI::IsMember({"L", "B", "Tmec"}));

  CLI11_PARSE(app, argc, argv);

  if (*simulate) {
    return cmd_simulate(configs);
  }
  if (*curve) {
    return cmd_contact_curve(ratios, samples, curve_output);
  }
  if (*validate) {
    return cmd_validate(golden_dir, format);
  }
  return cmd_expand(target);
}
