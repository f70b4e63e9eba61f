// SPDX-License-Identifier: Apache-2.0
#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <thread>

#include "wqed/version.hpp"
#include "wqed_cli/runner.hpp"
#include "wqed_cli/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Waveguide cavity QED photon-blockade scenarios"};
  app.set_version_flag("--version", std::string(wqed::version()));
  app.require_subcommand(1);
  app.fallthrough();

  wqed::cli::RunOptions options;
  std::string out_dir = "wqed-out";
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  app.add_option("--out-dir", out_dir, "Output directory (env WQED_OUT overrides the default)");
  app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", options.seed, "Reserved; every algorithm is deterministic");

  std::string scenario;
  auto* run = app.add_subcommand("run", "Run a scenario file or built-in scenario");
  run->add_option("scenario", scenario, "Scenario JSON file or built-in name")->required();

  std::string sweep_scenario, axis, values;
  auto* sweep = app.add_subcommand("sweep", "Sweep one parameter of a scenario");
  sweep->add_option("scenario", sweep_scenario, "Scenario JSON file or built-in name")->required();
  sweep->add_option("--axis", axis, "gamma, epsilon, delta, d or N")->required();
  sweep->add_option("--values", values, "Comma-separated values")->required();

  auto* list = app.add_subcommand("list-scenarios", "List built-in scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const bool out_given = app.get_option("--out-dir")->count() > 0;
  if (const char* env = std::getenv("WQED_OUT"); env && *env && !out_given) out_dir = env;
  options.out_dir = out_dir;
  options.threads = threads;

  if (list->parsed()) {
    for (const auto& name : wqed::cli::builtin_names())
      std::cout << name << "\t" << wqed::cli::builtin_description(name) << "\n";
    return 0;
  }
  if (run->parsed()) return wqed::cli::run_command(scenario, options, std::cerr);
  if (sweep->parsed()) {
    std::vector<double> parsed;
    try {
      parsed = wqed::cli::parse_value_list(values);
    } catch (const wqed::cli::ConfigError& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return 1;
    }
    return wqed::cli::sweep_command(sweep_scenario, axis, parsed, options, std::cerr);
  }
  return 1;
}
