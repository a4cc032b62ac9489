#include "curveswarm/cli/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "curveswarm/cli/run_config.hpp"
#include "json.hpp"

namespace curveswarm::cli {

namespace {

using nlohmann::json;

std::vector<double> split_reals(const std::string& line, std::size_t expected, std::size_t line_no) {
  std::vector<double> out;
  out.reserve(expected);
  std::size_t pos = 0;
  while (pos <= line.size()) {
    const std::size_t comma = std::min(line.find(',', pos), line.size());
    const std::string field = line.substr(pos, comma - pos);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(field, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != field.size()) {
      throw ConfigError("line " + std::to_string(line_no) + ": cannot parse number \"" + field + "\"");
    }
    out.push_back(v);
    pos = comma + 1;
  }
  if (out.size() != expected) {
    throw ConfigError("line " + std::to_string(line_no) + ": expected " + std::to_string(expected) + " fields");
  }
  return out;
}

void expect_header(std::istream& in, const char* header) {
  std::string line;
  if (!std::getline(in, line) || line != header) throw ConfigError(std::string("expected CSV header ") + header);
}

bool keep(std::size_t i, std::size_t last, int stride) {
  return i % static_cast<std::size_t>(stride) == 0 || i == last;
}

json point_json(Complex z) { return json::array({z.real(), z.imag()}); }

json curve_json(const PolarCurve& curve) {
  json j;
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Circle>) {
          j["family"] = "circle";
          j["params"] = {{"radius", f.radius}};
        } else if constexpr (std::is_same_v<T, ConvexLimacon>) {
          j["family"] = "limacon";
          j["params"] = {{"a", f.a}, {"b", f.b}};
        } else {
          j["family"] = "rose";
          j["params"] = {{"a", f.a}, {"b", f.b}, {"s", f.s}};
        }
      },
      curve.family());
  j["center"] = point_json(curve.center());
  return j;
}

}  // namespace

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_trace_csv(std::ostream& out, const SimulationTrace& trace, int stride) {
  out << kTraceHeader << '\n';
  const std::size_t len = trace.length();
  for (std::size_t i = 0; i < len; ++i) {
    if (!keep(i, len - 1, stride)) continue;
    const std::string t = format_real(trace.times[i]);
    for (int k = 0; k < trace.agents; ++k) {
      const AgentSample& s = trace.at(i, k);
      out << t << ',' << k << ',' << format_real(s.r.real()) << ',' << format_real(s.r.imag()) << ','
          << format_real(s.theta) << ',' << format_real(s.phi) << ',' << format_real(s.psi) << ','
          << format_real(s.e_abs) << ',' << format_real(s.zeta) << ',' << format_real(s.u) << '\n';
    }
  }
}

void write_metrics_csv(std::ostream& out, const SimulationTrace& trace, int stride) {
  out << kMetricsHeader << '\n';
  const std::size_t len = trace.length();
  for (std::size_t i = 0; i < len; ++i) {
    if (!keep(i, len - 1, stride)) continue;
    const MetricSample& m = trace.metrics[i];
    out << format_real(trace.times[i]) << ',' << format_real(m.p_abs) << ',' << format_real(m.p_arg) << ','
        << format_real(m.W) << ',' << format_real(m.H) << ',' << format_real(m.V) << '\n';
  }
}

SimulationTrace read_trace_csv(std::istream& in) {
  expect_header(in, kTraceHeader);
  SimulationTrace trace;
  std::vector<std::vector<AgentSample>> rows;
  std::string line;
  std::size_t line_no = 1;
  int max_agent = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<double> f = split_reals(line, 10, line_no);
    const int agent = static_cast<int>(f[1]);
    if (agent < 0 || static_cast<double>(agent) != f[1]) throw ConfigError("line " + std::to_string(line_no) + ": bad agent index");
    if (trace.times.empty() || f[0] != trace.times.back()) {
      trace.times.push_back(f[0]);
      rows.emplace_back();
    }
    if (agent != static_cast<int>(rows.back().size())) {
      throw ConfigError("line " + std::to_string(line_no) + ": agents must be listed in order per time");
    }
    rows.back().push_back(AgentSample{{f[2], f[3]}, f[4], f[5], f[6], f[7], f[8], f[9]});
    max_agent = std::max(max_agent, agent);
  }
  trace.agents = max_agent + 1;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != trace.agents) throw ConfigError("trace rows have unequal agent counts");
    trace.samples.insert(trace.samples.end(), row.begin(), row.end());
  }
  return trace;
}

SimulationTrace read_metrics_csv(std::istream& in) {
  expect_header(in, kMetricsHeader);
  SimulationTrace trace;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<double> f = split_reals(line, 6, line_no);
    trace.times.push_back(f[0]);
    trace.metrics.push_back(MetricSample{f[1], f[2], f[3], f[4], f[5]});
  }
  return trace;
}

std::string curve_report_json(const CurveReport& report, const PolarCurve& curve, double delta) {
  json j;
  j["curve"] = curve_json(curve);
  j["delta"] = delta;
  j["perimeter"] = report.perimeter;
  j["area"] = report.area;
  j["kappa_max"] = report.kappa_max;
  j["min_turn_radius"] = report.min_turn_radius;
  j["total_signed_curvature"] = report.total_signed_curvature;
  j["boundary_perimeters"] = {{"exterior", report.boundary_perimeters.exterior},
                              {"interior", report.boundary_perimeters.interior}};
  j["boundary_areas"] = {{"exterior", report.boundary_areas.exterior}, {"interior", report.boundary_areas.interior}};
  j["assumption1_ok"] = report.assumption1_ok;
  return j.dump(2) + "\n";
}

void write_boundary_csv(std::ostream& out, const PolarCurve& curve, double delta, int samples) {
  const std::vector<Complex> base = curve.sample(samples);
  const std::vector<Complex> ext = curve.offset_boundary(delta, OffsetSide::exterior, samples);
  const std::vector<Complex> in = curve.offset_boundary(delta, OffsetSide::interior, samples);
  out << "phi,curve_x,curve_y,exterior_x,exterior_y,interior_x,interior_y\n";
  for (std::size_t j = 0; j < base.size(); ++j) {
    out << format_real(kTwoPi * static_cast<double>(j) / samples) << ',' << format_real(base[j].real()) << ','
        << format_real(base[j].imag()) << ',' << format_real(ext[j].real()) << ',' << format_real(ext[j].imag())
        << ',' << format_real(in[j].real()) << ',' << format_real(in[j].imag()) << '\n';
  }
}

std::string verdict_json(const RunSummary& summary) {
  const SimulationTrace& trace = *summary.trace;
  const ControlConfig& cfg = trace.control;
  json j;
  j["name"] = summary.name;
  j["mode"] = to_string(cfg.mode());
  j["config"] = {{"agents", trace.agents}, {"K_C", cfg.k_curve}, {"K", cfg.k_phase}, {"delta", cfg.delta},
                 {"u_max", cfg.u_max},     {"dt", cfg.dt},        {"T", trace.horizon}};
  j["samples"] = trace.length();
  j["bounds"] = {{"V0", summary.bounds.V0},
                 {"delta_eff", summary.bounds.delta_eff},
                 {"H_interval", {summary.bounds.H_lo, summary.bounds.H_hi}}};
  const RunVerdict& v = summary.verdict;
  j["verdicts"] = {{"converged_to_curve", v.converged_to_curve}, {"phase_mode_achieved", v.phase_mode_achieved},
                   {"V_monotone", v.V_monotone},                 {"confinement", v.confinement},
                   {"bounds_respected", v.bounds_respected},     {"input_bounded", v.input_bounded}};
  j["passed"] = v.all();
  j["failures"] = v.failures;
  j["warnings"] = summary.warnings;

  if (trace.length() > 0) {
    const MetricSample& m = trace.metrics.back();
    double e_max = 0.0;
    double zeta_max = 0.0;
    for (const AgentSample& s : trace.row(trace.length() - 1)) {
      e_max = std::max(e_max, s.e_abs);
      zeta_max = std::max(zeta_max, std::abs(s.zeta));
    }
    j["final"] = {{"t", trace.times.back()}, {"p_psi_abs", m.p_abs}, {"Psi", m.p_arg}, {"W", m.W},
                  {"H", m.H},                {"V", m.V},             {"max_e_abs", e_max}, {"max_abs_zeta", zeta_max}};
  }
  json branches = json::array();
  for (const TangentBranch& b : trace.initial_branches) {
    branches.push_back({{"phi", b.phi}, {"heading", b.heading}, {"e_abs", b.error_abs}, {"candidates", b.candidates}});
  }
  j["initial_branches"] = branches;
  j["psi_integration_mismatch"] = trace.psi_integration_mismatch;
  return j.dump(2) + "\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace curveswarm::cli
