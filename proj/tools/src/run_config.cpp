#include "curveswarm/cli/run_config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"

namespace curveswarm::cli {

namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) throw ConfigError(where + ": missing key \"" + key + "\"");
  return obj.at(key);
}

double number(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
  return v.get<double>();
}

double number_or(const json& obj, const char* key, double fallback, const std::string& where) {
  return obj.contains(key) ? number(obj, key, where) : fallback;
}

std::vector<double> numbers(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_array()) throw ConfigError(where + "." + key + " must be an array");
  std::vector<double> out;
  for (const json& x : v) {
    if (!x.is_number()) throw ConfigError(where + "." + key + " must contain numbers only");
    out.push_back(x.get<double>());
  }
  return out;
}

CurveFamily parse_family(const json& curve) {
  const json& fam = require(curve, "family", "curve");
  if (!fam.is_string()) throw ConfigError("curve.family must be a string");
  const std::string name = fam.get<std::string>();
  const json& params = require(curve, "params", "curve");
  if (name == "circle") return Circle{number(params, "radius", "curve.params")};
  if (name == "limacon") return ConvexLimacon{number(params, "a", "curve.params"), number(params, "b", "curve.params")};
  if (name == "rose") {
    const double b = number(params, "b", "curve.params");
    if (b != std::floor(b)) throw ConfigError("curve.params.b must be an integer for a rose");
    return PolarRose{number(params, "a", "curve.params"), static_cast<int>(b), number(params, "s", "curve.params")};
  }
  throw ConfigError("unknown curve family \"" + name + "\" (expected circle, limacon or rose)");
}

GraphSpec parse_graph(const json& g) {
  GraphSpec spec;
  const json& n = require(g, "n", "graph");
  if (!n.is_number_integer()) throw ConfigError("graph.n must be an integer");
  spec.n = n.get<int>();
  if (g.contains("circulant_offsets")) {
    for (const json& o : g.at("circulant_offsets")) {
      if (!o.is_number_integer()) throw ConfigError("graph.circulant_offsets must contain integers");
      spec.circulant_offsets.push_back(o.get<int>());
    }
    if (spec.circulant_offsets.empty()) throw ConfigError("graph.circulant_offsets is empty");
  } else if (g.contains("edges")) {
    for (const json& e : g.at("edges")) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
        throw ConfigError("graph.edges entries must be [j, k] integer pairs");
      }
      spec.edges.push_back({e[0].get<int>(), e[1].get<int>()});
    }
  } else {
    throw ConfigError("graph needs either circulant_offsets or edges");
  }
  return spec;
}

void parse_initial(const json& ic, RunConfig& cfg) {
  if (ic.contains("random")) {
    const json& r = ic.at("random");
    RandomInitialSpec spec;
    const json& seed = require(r, "seed", "initial_conditions.random");
    if (!seed.is_number_unsigned() && !seed.is_number_integer()) throw ConfigError("random.seed must be an integer");
    spec.seed = seed.get<std::uint64_t>();
    spec.count = static_cast<int>(number_or(r, "count", cfg.graph.n, "initial_conditions.random"));
    spec.max_error_fraction = number_or(r, "max_error_fraction", spec.max_error_fraction, "initial_conditions.random");
    cfg.random_initial = spec;
    return;
  }
  const std::vector<double> x = numbers(ic, "x", "initial_conditions");
  const std::vector<double> y = numbers(ic, "y", "initial_conditions");
  std::vector<double> theta;
  if (ic.contains("theta_deg")) {
    theta = numbers(ic, "theta_deg", "initial_conditions");
    for (double& t : theta) t *= kPi / 180.0;
  } else {
    theta = numbers(ic, "theta", "initial_conditions");
  }
  if (x.size() != y.size() || x.size() != theta.size()) {
    throw ConfigError("initial_conditions x, y and theta must have equal length");
  }
  for (std::size_t k = 0; k < x.size(); ++k) cfg.initial.push_back({{x[k], y[k]}, theta[k]});
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  RunConfig cfg;
  try {
    cfg.name = doc.value("name", "");
    const json& curve = require(doc, "curve", "config");
    cfg.family = parse_family(curve);
    if (curve.contains("center")) {
      const std::vector<double> c = numbers(curve, "center", "curve");
      if (c.size() != 2) throw ConfigError("curve.center must be [x, y]");
      cfg.center = {c[0], c[1]};
    }
    cfg.graph = parse_graph(require(doc, "graph", "config"));

    const json& gains = require(doc, "gains", "config");
    cfg.control.k_curve = number(gains, "K_C", "gains");
    cfg.control.k_phase = number(gains, "K", "gains");
    cfg.control.delta = number(doc, "delta", "config");
    cfg.control.u_max = number(doc, "u_max", "config");
    cfg.control.dt = number_or(doc, "dt", 0.01, "config");
    cfg.horizon = number_or(doc, "T", 1500.0, "config");
    cfg.heading_tolerance = number_or(doc, "heading_tolerance_deg", 0.0, "config") * kPi / 180.0;

    parse_initial(require(doc, "initial_conditions", "config"), cfg);

    if (doc.contains("output")) {
      const json& out = doc.at("output");
      cfg.output.dir = out.value("dir", cfg.output.dir.string());
      cfg.output.trace_csv = out.value("trace_csv", cfg.output.trace_csv);
      cfg.output.metrics_csv = out.value("metrics_csv", cfg.output.metrics_csv);
      cfg.output.verdict_json = out.value("verdict_json", cfg.output.verdict_json);
      cfg.output.curve_json = out.value("curve_json", cfg.output.curve_json);
      cfg.output.boundary_csv = out.value("boundary_csv", cfg.output.boundary_csv);
      cfg.output.stride = out.value("stride", cfg.output.stride);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config has a wrongly typed field: ") + e.what());
  }
  validate(cfg);
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_run_config(text.str());
}

void validate(const RunConfig& cfg) {
  const ControlConfig& c = cfg.control;
  if (!(c.k_curve > 0.0)) throw ConfigError("gains.K_C must be positive");
  if (c.k_phase == 0.0 || !std::isfinite(c.k_phase)) throw ConfigError("gains.K must be nonzero");
  if (!(c.delta > 0.0)) throw ConfigError("delta must be positive");
  if (!(c.u_max > 0.0)) throw ConfigError("u_max must be positive");
  if (!(c.dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(cfg.horizon > c.dt)) throw ConfigError("T must exceed dt");
  if (cfg.heading_tolerance < 0.0) throw ConfigError("heading_tolerance_deg must be nonnegative");
  if (cfg.output.stride < 1) throw ConfigError("output.stride must be at least 1");
  if (cfg.graph.n < 2) throw ConfigError("graph.n must be at least 2");
  const std::size_t agents = cfg.random_initial ? static_cast<std::size_t>(cfg.random_initial->count) : cfg.initial.size();
  if (agents != static_cast<std::size_t>(cfg.graph.n)) {
    throw ConfigError("initial condition count " + std::to_string(agents) + " does not match graph.n = " +
                      std::to_string(cfg.graph.n));
  }
  if (cfg.random_initial &&
      !(cfg.random_initial->max_error_fraction > 0.0 && cfg.random_initial->max_error_fraction < 1.0)) {
    throw ConfigError("random.max_error_fraction must lie in (0, 1)");
  }
}

PolarCurve make_curve(const RunConfig& cfg) { return PolarCurve(cfg.family, cfg.center); }

InteractionGraph make_graph(const RunConfig& cfg) {
  if (!cfg.graph.circulant_offsets.empty()) return InteractionGraph::circulant(cfg.graph.n, cfg.graph.circulant_offsets);
  return InteractionGraph::from_edges(cfg.graph.n, cfg.graph.edges);
}

std::vector<InitialCondition> make_initial_conditions(const RunConfig& cfg, const PolarCurve& curve) {
  if (!cfg.random_initial) return cfg.initial;
  const RandomInitialSpec& spec = *cfg.random_initial;
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<InitialCondition> out;
  for (int k = 0; k < spec.count; ++k) {
    const double phi = angle(rng);
    const double radius = spec.max_error_fraction * cfg.control.delta * std::sqrt(unit(rng));
    const double direction = angle(rng);
    out.push_back({curve.point(phi) + std::polar(radius, direction), wrap_two_pi(std::arg(curve.tangent(phi)))});
  }
  return out;
}

Scenario make_scenario(const RunConfig& cfg) {
  PolarCurve curve = make_curve(cfg);
  InteractionGraph graph = make_graph(cfg);
  std::vector<InitialCondition> initial = make_initial_conditions(cfg, curve);
  return Scenario{std::move(curve), std::move(graph), cfg.control, cfg.horizon, std::move(initial),
                  cfg.heading_tolerance};
}

std::filesystem::path output_dir(const RunConfig& cfg) {
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') return env;
  return cfg.output.dir;
}

}  // namespace curveswarm::cli
