#include "curveswarm/cli/commands.hpp"

#include <fstream>
#include <ostream>

#include "curveswarm/cli/acceptance.hpp"
#include "curveswarm/cli/io.hpp"
#include "curveswarm/cli/run_config.hpp"

namespace curveswarm::cli {

namespace {

// Maps library errors onto exit codes.
template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const NoFeasibleBranch& e) {
    err << "error: infeasible initial condition: " << e.what() << '\n';
    return kExitNoFeasibleBranch;
  } catch (const BarrierBreached& e) {
    err << "error: " << e.what() << '\n';
    return kExitBarrierBreached;
  } catch (const AssumptionViolated& e) {
    err << "error: offset boundaries are not simple: " << e.what() << '\n';
    return kExitAssumptionViolated;
  } catch (const Error& e) {
    err << "error: invalid configuration: " << e.what() << '\n';
    return kExitConfigInvalid;
  }
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

}  // namespace

int cmd_simulate(const std::filesystem::path& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load_run_config(config);
    const Scenario scenario = make_scenario(cfg);
    RunSummary summary;
    summary.name = cfg.name.empty() ? config.stem().string() : cfg.name;
    if (auto warning = saturation_warning(cfg.control, scenario.curve)) {
      err << "warning: " << *warning << '\n';
      summary.warnings.push_back(*warning);
    }

    const SimulationTrace trace = run(scenario);
    summary.trace = &trace;
    summary.bounds = bounds_report(trace.metrics.front().V, scenario.control, scenario.graph, scenario.curve,
                                   scenario.control.mode());
    summary.verdict = verify(trace, scenario.curve, scenario.graph, summary.bounds);

    const std::filesystem::path dir = output_dir(cfg);
    {
      std::ofstream f = open_output(dir / cfg.output.trace_csv);
      write_trace_csv(f, trace, cfg.output.stride);
    }
    {
      std::ofstream f = open_output(dir / cfg.output.metrics_csv);
      write_metrics_csv(f, trace, cfg.output.stride);
    }
    write_text_file(dir / cfg.output.verdict_json, verdict_json(summary));

    const MetricSample& last = trace.metrics.back();
    out << summary.name << " (" << to_string(scenario.control.mode()) << "): " << trace.length() << " samples, final |p_psi| "
        << last.p_abs << ", W " << last.W << ", V " << last.V << '\n';
    for (const std::string& f : summary.verdict.failures) out << "  failed: " << f << '\n';
    out << (summary.verdict.all() ? "all verdicts passed" : "verdicts failed") << "; outputs in " << dir.string()
        << '\n';
    return summary.verdict.all() ? kExitOk : kExitVerdictFailed;
  });
}

int cmd_curve(const std::filesystem::path& config, std::optional<double> delta, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load_run_config(config);
    const double d = delta.value_or(cfg.control.delta);
    if (!(d > 0.0)) throw ConfigError("delta must be positive");
    const PolarCurve curve = make_curve(cfg);
    const CurveReport report = curve_report(curve, d);

    const std::filesystem::path dir = output_dir(cfg);
    write_text_file(dir / cfg.output.curve_json, curve_report_json(report, curve, d));
    {
      std::ofstream f = open_output(dir / cfg.output.boundary_csv);
      write_boundary_csv(f, curve, d);
    }
    out << curve.describe() << ", delta " << d << ": perimeter " << report.perimeter << ", area " << report.area
        << ", boundary perimeters " << report.boundary_perimeters.exterior << " / "
        << report.boundary_perimeters.interior << '\n';
    return kExitOk;
  });
}

int cmd_verify(const std::filesystem::path& config_dir, bool fast, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    AcceptanceOptions options;
    options.config_dir = config_dir;
    options.fast = fast;
    if (!fast) {
      // Validate both scenarios before spending time on the suite.
      for (const char* name : {"sync", "balance"}) {
        const RunConfig cfg = load_run_config(config_dir / (std::string(name) + ".json"));
        const PolarCurve curve = make_curve(cfg);
        if (auto warning = saturation_warning(cfg.control, curve)) err << "warning: " << name << ": " << *warning << '\n';
      }
    }
    const std::vector<CriterionResult> results = run_acceptance(options);
    print_acceptance(out, results);
    return all_passed(results) ? kExitOk : kExitVerdictFailed;
  });
}

}  // namespace curveswarm::cli
