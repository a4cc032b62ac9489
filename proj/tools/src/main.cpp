#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "curveswarm/cli/commands.hpp"

#ifndef CURVESWARM_DEFAULT_CONFIG_DIR
#define CURVESWARM_DEFAULT_CONFIG_DIR "configs"
#endif

int main(int argc, char** argv) {
  CLI::App app{"Unicycle agents on closed polar curves: simulate, inspect curves, verify"};
  app.require_subcommand(1);

  std::string simulate_config;
  auto* simulate = app.add_subcommand("simulate", "Run one scenario and write trace, metrics and verdict files");
  simulate->add_option("--config", simulate_config, "Run configuration (JSON)")->required();

  std::string curve_config;
  std::optional<double> delta;
  auto* curve = app.add_subcommand("curve", "Write the curve report and offset boundary polylines");
  curve->add_option("--config", curve_config, "Run configuration (JSON)")->required();
  curve->add_option("--delta", delta, "Safe distance override (m)");

  bool fast = false;
  std::string config_dir = CURVESWARM_DEFAULT_CONFIG_DIR;
  auto* verify = app.add_subcommand("verify", "Run the acceptance table over the bundled scenarios");
  verify->add_flag("--fast", fast, "Skip the closed-loop rose scenarios");
  verify->add_option("--config-dir", config_dir, "Directory containing sync.json and balance.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : curveswarm::cli::kExitConfigInvalid;
  }

  if (*simulate) return curveswarm::cli::cmd_simulate(simulate_config, std::cout, std::cerr);
  if (*curve) return curveswarm::cli::cmd_curve(curve_config, delta, std::cout, std::cerr);
  return curveswarm::cli::cmd_verify(config_dir, fast, std::cout, std::cerr);
}
