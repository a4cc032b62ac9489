#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "curveswarm/errors.hpp"
#include "curveswarm/simulator.hpp"

namespace curveswarm::cli {

/// Malformed or out-of-range run configuration.
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

struct GraphSpec {
  int n = 0;
  std::vector<int> circulant_offsets;  // used when nonempty
  std::vector<Edge> edges;
};

struct RandomInitialSpec {
  std::uint64_t seed = 0;
  int count = 0;
  double max_error_fraction = 0.9;  // |e(0)| drawn below this fraction of delta
};

struct OutputSpec {
  std::filesystem::path dir = "out";
  std::string trace_csv = "trace.csv";
  std::string metrics_csv = "metrics.csv";
  std::string verdict_json = "verdict.json";
  std::string curve_json = "curve_report.json";
  std::string boundary_csv = "boundaries.csv";
  int stride = 1;  // write every stride-th sample
};

struct RunConfig {
  std::string name;
  CurveFamily family;
  Complex center;
  GraphSpec graph;
  ControlConfig control;
  double horizon = 1500.0;
  std::vector<InitialCondition> initial;  // explicit list
  std::optional<RandomInitialSpec> random_initial;
  double heading_tolerance = 0.0;  // rad
  OutputSpec output;
};

/// Output directory override for every command.
inline constexpr const char* kOutputDirEnv = "CURVESWARM_OUTPUT_DIR";

RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::filesystem::path& path);

/// Throws ConfigError unless K_C > 0, K != 0, delta > 0, dt > 0, T > dt and
/// the initial conditions match the graph size.
void validate(const RunConfig& cfg);

PolarCurve make_curve(const RunConfig& cfg);
InteractionGraph make_graph(const RunConfig& cfg);

/// Explicit initial conditions, or seeded draws inside the barrier set: a
/// uniform curve parameter, a tangent heading and a random displacement of
/// norm below max_error_fraction * delta.
std::vector<InitialCondition> make_initial_conditions(const RunConfig& cfg, const PolarCurve& curve);

Scenario make_scenario(const RunConfig& cfg);

/// Output directory after applying CURVESWARM_OUTPUT_DIR.
std::filesystem::path output_dir(const RunConfig& cfg);

}  // namespace curveswarm::cli
