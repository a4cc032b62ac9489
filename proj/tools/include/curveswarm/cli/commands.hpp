#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

namespace curveswarm::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerdictFailed = 1,
  kExitConfigInvalid = 2,
  kExitNoFeasibleBranch = 3,
  kExitBarrierBreached = 4,
  kExitAssumptionViolated = 5,
};

/// Runs one scenario and writes the trace CSV, metrics CSV and verdict JSON.
int cmd_simulate(const std::filesystem::path& config, std::ostream& out, std::ostream& err);

/// Writes the curve report JSON and the boundary polylines CSV. `delta`
/// overrides the config value.
int cmd_curve(const std::filesystem::path& config, std::optional<double> delta, std::ostream& out, std::ostream& err);

/// Acceptance table over the bundled scenarios found in `config_dir`.
int cmd_verify(const std::filesystem::path& config_dir, bool fast, std::ostream& out, std::ostream& err);

}  // namespace curveswarm::cli
