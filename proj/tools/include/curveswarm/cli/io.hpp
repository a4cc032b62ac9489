#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "curveswarm/simulator.hpp"

namespace curveswarm::cli {

inline constexpr const char* kTraceHeader = "t,agent,x,y,theta,phi,psi,e_abs,zeta,u";
inline constexpr const char* kMetricsHeader = "t,p_psi_abs,Psi,W,H,V";

/// %.17g, so doubles survive a text round trip exactly.
std::string format_real(double value);

void write_trace_csv(std::ostream& out, const SimulationTrace& trace, int stride = 1);
void write_metrics_csv(std::ostream& out, const SimulationTrace& trace, int stride = 1);

/// Parses a trace CSV back into times and per-agent samples. Agent count is
/// taken from the distinct agent indices; metrics are left empty.
SimulationTrace read_trace_csv(std::istream& in);
/// Fills times and metrics only.
SimulationTrace read_metrics_csv(std::istream& in);

/// CurveReport as JSON with its field names, plus the delta and curve echo.
std::string curve_report_json(const CurveReport& report, const PolarCurve& curve, double delta);

/// Columns: phi,curve_x,curve_y,exterior_x,exterior_y,interior_x,interior_y.
void write_boundary_csv(std::ostream& out, const PolarCurve& curve, double delta,
                        int samples = PolarCurve::kGridIntervals);

struct RunSummary {
  std::string name;
  const SimulationTrace* trace = nullptr;
  BoundsReport bounds;
  RunVerdict verdict;
  std::vector<std::string> warnings;
};

std::string verdict_json(const RunSummary& summary);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace curveswarm::cli
