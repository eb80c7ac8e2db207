// tomodyn: scenario runner, reference purity curves and self-validation.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "tomodyn/tomodyn.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsageError = 2;

int cmd_run(const std::string& config_path) {
  const tomodyn::ScenarioConfig cfg = tomodyn::load_scenario(config_path);
  for (const auto& path : tomodyn::run_scenario(cfg)) std::cout << "wrote " << path.string() << '\n';
  return kOk;
}

int cmd_fig2(const std::string& dir) {
  for (const auto& path : tomodyn::write_fig2(dir)) std::cout << "wrote " << path.string() << '\n';
  return kOk;
}

int cmd_validate(bool verbose, std::optional<double> override_tol) {
  tomodyn::ValidationOptions opts;
  opts.verbose = verbose;
  opts.tolerance_override = override_tol;
  const tomodyn::ValidationReport rep = tomodyn::run_validation(opts);
  std::cout << tomodyn::format_report(rep, verbose);
  return rep.passed() ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Damped-oscillator tomogram dynamics"};
  app.set_version_flag("--version", std::string("tomodyn ") + tomodyn::kVersion);
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run a JSON scenario and write its outputs");
  run->add_option("config", config_path, "Scenario file")->required();

  std::string fig2_dir;
  auto* fig2 = app.add_subcommand("fig2", "Write fig2a.csv and fig2b.csv purity curves");
  fig2->add_option("dir", fig2_dir, "Output directory")->required();

  bool verbose = false;
  std::optional<double> override_tol;
  auto* validate = app.add_subcommand("validate", "Run all cross-route checks");
  validate->add_flag("-v,--verbose", verbose, "Print the per-probe residual table");
  validate->add_option("--override-tolerance", override_tol, "Replace every tolerance (fault injection)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*run) return cmd_run(config_path);
    if (*fig2) return cmd_fig2(fig2_dir);
    if (*validate) return cmd_validate(verbose, override_tol);
  } catch (const tomodyn::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCheckFailed;
  }
  return kUsageError;
}
