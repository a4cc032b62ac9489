#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "curveswarm/cli/acceptance.hpp"
#include "curveswarm/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria: one PASS/FAIL line per criterion"};
  curveswarm::cli::AcceptanceOptions options;
  std::string config_dir = CURVESWARM_TEST_CONFIG_DIR;
  app.add_option("--group", options.groups, "Restrict to groups: geometry, graph, sync, balance, properties");
  app.add_option("--config-dir", config_dir, "Directory containing sync.json and balance.json");
  app.add_flag("--fast", options.fast, "Skip the rose closed-loop runs");
  CLI11_PARSE(app, argc, argv);
  options.config_dir = config_dir;

  try {
    const auto results = curveswarm::cli::run_acceptance(options);
    curveswarm::cli::print_acceptance(std::cout, results);
    return curveswarm::cli::all_passed(results) ? 0 : 1;
  } catch (const curveswarm::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
