#include "curveswarm/cli/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "curveswarm/cli/run_config.hpp"
#include "curveswarm/simulator.hpp"

namespace curveswarm::cli {

namespace {

// Reference rose and its reported geometry.
const PolarRose kRose{10.0, 6, 5.0};
constexpr double kRoseDelta = 12.0;
constexpr double kRosePerimeter = 340.82;
constexpr double kRoseArea = 7893.3;
constexpr double kExteriorPerimeter = 416.21;
constexpr double kInteriorPerimeter = 265.43;
constexpr double kExteriorArea = 12435.4;
constexpr double kInteriorArea = 4255.7;
constexpr double kKappaMax = 0.0776;
constexpr double kMinTurnRadius = 12.87;
constexpr double kHalfNLambdaMax = 21.86;

// Closed-loop settings and thresholds.
constexpr double kStep = 0.01;
constexpr double kHorizon = 1500.0;
constexpr double kUMax = 0.0786;
constexpr double kSyncHHi = 30.7;
constexpr double kBalanceHLo = 25.1;
constexpr double kBalanceHHi = 43.7;
constexpr double kHSlack = 0.5;
constexpr double kZetaFinal = 1e-3;
constexpr double kGapTolerance = 0.01;
constexpr double kStepSlackV = 1e-7;
constexpr double kScenarioSeconds = 60.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

bool within_rel(double value, double target, double rel) { return std::abs(value - target) <= rel * std::abs(target); }

class Recorder {
 public:
  Recorder(std::string group, std::vector<CriterionResult>& out) : group_(std::move(group)), out_(out) {}
  void add(std::string name, bool pass, std::string detail) {
    out_.push_back({group_, std::move(name), pass, std::move(detail)});
  }

 private:
  std::string group_;
  std::vector<CriterionResult>& out_;
};

void geometry_group(std::vector<CriterionResult>& out) {
  Recorder rec("geometry", out);
  const auto start = Clock::now();

  const PolarCurve rose(kRose);
  rec.add("rose perimeter 340.82 +/- 0.5%", within_rel(rose.perimeter(), kRosePerimeter, 5e-3),
          fmt("Gamma = %.4f", rose.perimeter()));
  rec.add("rose area 7893.3 +/- 0.5%", within_rel(rose.enclosed_area(), kRoseArea, 5e-3),
          fmt("A = %.3f", rose.enclosed_area()));

  bool report_ok = true;
  CurveReport report;
  std::string report_error;
  try {
    report = curve_report(rose, kRoseDelta);
  } catch (const Error& e) {
    report_ok = false;
    report_error = e.what();
  }
  if (report_ok) {
    const SidePair& gp = report.boundary_perimeters;
    const SidePair& ga = report.boundary_areas;
    rec.add("boundary perimeters 416.21 / 265.43 +/- 1%",
            within_rel(gp.exterior, kExteriorPerimeter, 1e-2) && within_rel(gp.interior, kInteriorPerimeter, 1e-2),
            fmt("exterior %.4f interior %.4f", gp.exterior, gp.interior));
    rec.add("boundary areas 12435.4 / 4255.7 +/- 1%",
            within_rel(ga.exterior, kExteriorArea, 1e-2) && within_rel(ga.interior, kInteriorArea, 1e-2),
            fmt("exterior %.2f interior %.2f", ga.exterior, ga.interior));
    const double perimeter_sum = gp.exterior + gp.interior;
    rec.add("boundary perimeter sum = 2 Gamma (1e-2 rel)", within_rel(perimeter_sum, 2.0 * rose.perimeter(), 1e-2),
            fmt("sum %.4f vs %.4f", perimeter_sum, 2.0 * rose.perimeter()));
    const double area_gap = ga.exterior - ga.interior;
    const double expected_gap = 2.0 * kRoseDelta * rose.perimeter();
    rec.add("boundary area difference = 2 delta Gamma (1e-2 rel)", within_rel(area_gap, expected_gap, 1e-2),
            fmt("difference %.3f vs %.3f", area_gap, expected_gap));
  } else {
    rec.add("boundary perimeters 416.21 / 265.43 +/- 1%", false, report_error);
    rec.add("boundary areas 12435.4 / 4255.7 +/- 1%", false, report_error);
    rec.add("boundary perimeter sum = 2 Gamma (1e-2 rel)", false, report_error);
    rec.add("boundary area difference = 2 delta Gamma (1e-2 rel)", false, report_error);
  }

  rec.add("max |kappa| 0.0776 +/- 1e-3", std::abs(rose.kappa_max() - kKappaMax) <= 1e-3,
          fmt("kappa_max = %.6f", rose.kappa_max()));
  rec.add("min turn radius 12.87 +/- 0.01", std::abs(rose.min_turn_radius() - kMinTurnRadius) <= 0.01,
          fmt("min 1/|kappa| = %.5f", rose.min_turn_radius()));

  const std::vector<std::pair<std::string, PolarCurve>> builtins = {
      {"circle(10)", PolarCurve(Circle{10.0})},
      {"limacon(2, 4.5)", PolarCurve(ConvexLimacon{2.0, 4.5})},
      {"rose(10, 6, 1)", PolarCurve(PolarRose{10.0, 6, 1.0})},
      {"rose(10, 6, 5)", PolarCurve(kRose)},
  };
  bool hopf = true;
  bool iso = true;
  std::string hopf_detail;
  std::string iso_detail;
  for (const auto& [name, curve] : builtins) {
    const double dev = curve.total_signed_curvature() - kTwoPi;
    hopf = hopf && std::abs(dev) <= 1e-6;
    hopf_detail += fmt("%s %+.2e; ", name.c_str(), dev);
    const double lhs = curve.perimeter() * curve.perimeter();
    const double rhs = 4.0 * kPi * curve.enclosed_area();
    const bool is_circle = std::holds_alternative<Circle>(curve.family());
    const double rel = (lhs - rhs) / rhs;
    iso = iso && lhs >= rhs && (!is_circle || std::abs(rel) <= 1e-9);
    iso_detail += fmt("%s %.3e; ", name.c_str(), rel);
  }
  rec.add("total signed curvature 2 pi +/- 1e-6 on every built-in", hopf, hopf_detail);
  rec.add("isoperimetric inequality, circle equality 1e-9 rel", iso, iso_detail);

  const double elapsed = seconds_since(start);
  rec.add("geometry runtime < 10 s", elapsed < 10.0, fmt("%.2f s", elapsed));
}

void graph_group(std::vector<CriterionResult>& out) {
  Recorder rec("graph", out);
  const auto start = Clock::now();
  const InteractionGraph graph = InteractionGraph::circulant(7, {1, 2});
  const int n = graph.size();
  const double half = 0.5 * n * graph.lambda_max();
  rec.add("circulant(7, {1,2}) (N/2) lambda_max 21.86 +/- 0.01", std::abs(half - kHalfNLambdaMax) <= 0.01,
          fmt("(N/2) lambda_max = %.5f", half));

  const std::vector<double> eig = circulant_eigenvalues(n, graph.offsets());
  double residual = 0.0;
  for (int l = 0; l < n; ++l) {
    std::vector<std::complex<double>> f(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) f[static_cast<std::size_t>(k)] = std::polar(1.0, kTwoPi * l * k / n);
    double norm2 = 0.0;
    for (int r = 0; r < n; ++r) {
      std::complex<double> lf{0.0, 0.0};
      for (int c = 0; c < n; ++c) lf += graph.laplacian()(r, c) * f[static_cast<std::size_t>(c)];
      norm2 += std::norm(lf - eig[static_cast<std::size_t>(l)] * f[static_cast<std::size_t>(r)]);
    }
    residual = std::max(residual, std::sqrt(norm2));
  }
  rec.add("DFT eigenvector residuals < 1e-10", residual < 1e-10, fmt("max residual %.2e", residual));

  std::mt19937_64 rng(20240501);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  const double w_cap = std::min(2.0 * graph.edge_count(), half);
  double worst_sum = 0.0;
  double worst_excess = -1.0;
  double worst_rel = 0.0;
  bool nonnegative = true;
  constexpr double h = 1e-5;
  for (int trial = 0; trial < 10000; ++trial) {
    std::vector<double> psi(static_cast<std::size_t>(n));
    for (double& p : psi) p = angle(rng);
    const std::vector<double> grad = phase_potential_gradient(graph, psi);
    double sum = 0.0;
    for (const double g : grad) sum += g;
    worst_sum = std::max(worst_sum, std::abs(sum));
    const double w = phase_potential(graph, psi);
    nonnegative = nonnegative && w >= 0.0;
    worst_excess = std::max(worst_excess, w - w_cap);

    double diff2 = 0.0;
    double grad2 = 0.0;
    for (int k = 0; k < n; ++k) {
      std::vector<double> up = psi;
      std::vector<double> down = psi;
      up[static_cast<std::size_t>(k)] += h;
      down[static_cast<std::size_t>(k)] -= h;
      const double fd = (phase_potential(graph, up) - phase_potential(graph, down)) / (2.0 * h);
      diff2 += (fd - grad[static_cast<std::size_t>(k)]) * (fd - grad[static_cast<std::size_t>(k)]);
      grad2 += grad[static_cast<std::size_t>(k)] * grad[static_cast<std::size_t>(k)];
    }
    if (grad2 > 0.0) worst_rel = std::max(worst_rel, std::sqrt(diff2 / grad2));
  }
  rec.add("random phases: gradient sums to 0 within 1e-12", worst_sum <= 1e-12, fmt("max |<grad W, 1>| = %.2e", worst_sum));
  rec.add("random phases: 0 <= W <= min(2|E|, (N/2) lambda_max) + 1e-12", nonnegative && worst_excess <= 1e-12,
          fmt("max W - cap = %.4f", worst_excess));
  rec.add("random phases: gradient vs finite differences rel err < 1e-6", worst_rel < 1e-6,
          fmt("max rel err %.2e", worst_rel));

  const double elapsed = seconds_since(start);
  rec.add("graph runtime < 1 s", elapsed < 1.0, fmt("%.3f s", elapsed));
}

struct ScenarioRun {
  Scenario scenario;
  SimulationTrace trace;
  BoundsReport bounds;
  double seconds = 0.0;
};

class RunCache {
 public:
  explicit RunCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  const ScenarioRun& get(const std::string& name, double dt) {
    const auto key = std::make_pair(name, dt);
    auto it = runs_.find(key);
    if (it != runs_.end()) return it->second;
    RunConfig cfg = load_run_config(dir_ / (name + ".json"));
    cfg.control.dt = dt;
    cfg.horizon = kHorizon;
    ScenarioRun run{make_scenario(cfg), {}, {}, 0.0};
    const auto start = Clock::now();
    run.trace = curveswarm::run(run.scenario);
    run.seconds = seconds_since(start);
    run.bounds = bounds_report(run.trace.metrics.front().V, run.scenario.control, run.scenario.graph,
                               run.scenario.curve, run.scenario.control.mode());
    return runs_.emplace(key, std::move(run)).first->second;
  }

 private:
  std::filesystem::path dir_;
  std::map<std::pair<std::string, double>, ScenarioRun> runs_;
};

struct TraceExtremes {
  double e_max = 0.0;
  double u_max = 0.0;
  double H_min = 0.0;
  double H_max = 0.0;
  double V_rise = 0.0;
  double final_zeta = 0.0;
  bool finite = true;
};

TraceExtremes extremes(const SimulationTrace& trace) {
  TraceExtremes x;
  x.H_min = trace.metrics.front().H;
  x.H_max = x.H_min;
  for (const AgentSample& s : trace.samples) {
    x.e_max = std::max(x.e_max, s.e_abs);
    x.u_max = std::max(x.u_max, std::abs(s.u));
    x.finite = x.finite && std::isfinite(s.e_abs) && std::isfinite(s.zeta) && std::isfinite(s.u);
  }
  for (std::size_t i = 0; i < trace.length(); ++i) {
    const MetricSample& m = trace.metrics[i];
    x.H_min = std::min(x.H_min, m.H);
    x.H_max = std::max(x.H_max, m.H);
    x.finite = x.finite && std::isfinite(m.V) && std::isfinite(m.H);
    if (i > 0) x.V_rise = std::max(x.V_rise, m.V - trace.metrics[i - 1].V);
  }
  for (const AgentSample& s : trace.row(trace.length() - 1)) x.final_zeta = std::max(x.final_zeta, std::abs(s.zeta));
  return x;
}

void common_closed_loop(Recorder& rec, const std::string& label, const ScenarioRun& run, const TraceExtremes& x) {
  rec.add(label + ": |u_k| <= 0.0786 at every sample", x.u_max <= kUMax, fmt("max |u| = %.6f", x.u_max));
  rec.add(label + ": |e_k| < 12 at every sample", x.finite && x.e_max < kRoseDelta, fmt("max |e| = %.4f", x.e_max));
  rec.add(label + ": V nonincreasing, per-step slack 1e-7", x.V_rise <= kStepSlackV,
          fmt("max per-step increase %.3e", x.V_rise));
  rec.add(label + ": final max |zeta_k| < 1e-3", x.final_zeta < kZetaFinal, fmt("final max |zeta| = %.5f", x.final_zeta));
  rec.add(label + ": runtime < 60 s", run.seconds < kScenarioSeconds, fmt("%.2f s", run.seconds));
}

void sync_group(RunCache& cache, std::vector<CriterionResult>& out) {
  Recorder rec("sync", out);
  const ScenarioRun& run = cache.get("sync", kStep);
  const SimulationTrace& tr = run.trace;
  const MetricSample& last = tr.metrics.back();
  const TraceExtremes x = extremes(tr);
  rec.add("sync: final |p_psi| > 0.99", last.p_abs > 0.99, fmt("|p_psi| = %.6f", last.p_abs));
  rec.add("sync: final W < 0.05", last.W < 0.05, fmt("W = %.6f", last.W));
  rec.add("sync: max |e_k| < delta_s + 1e-3", x.e_max < run.bounds.delta_eff + 1e-3,
          fmt("max |e| = %.4f, delta_s = %.4f (V1(0) = %.3f)", x.e_max, run.bounds.delta_eff, run.bounds.V0));
  rec.add("sync: H in [0, 30.7 +/- 0.5] throughout", x.H_min >= -kHSlack && x.H_max <= kSyncHHi + kHSlack,
          fmt("H range [%.3f, %.3f], H(0) = %.3f", x.H_min, x.H_max, tr.metrics.front().H));
  rec.add("sync: post-design H interval [0, 30.7] +/- 0.5",
          std::abs(run.bounds.H_lo) <= kHSlack && std::abs(run.bounds.H_hi - kSyncHHi) <= kHSlack,
          fmt("computed [%.3f, %.3f]", run.bounds.H_lo, run.bounds.H_hi));
  common_closed_loop(rec, "sync", run, x);
}

void balance_group(RunCache& cache, std::vector<CriterionResult>& out) {
  Recorder rec("balance", out);
  const ScenarioRun& run = cache.get("balance", kStep);
  const SimulationTrace& tr = run.trace;
  const MetricSample& last = tr.metrics.back();
  const TraceExtremes x = extremes(tr);
  rec.add("balance: final |p_psi| < 0.01", last.p_abs < 0.01, fmt("|p_psi| = %.6f", last.p_abs));
  rec.add("balance: final W within 1% of 21.86", within_rel(last.W, kHalfNLambdaMax, 1e-2), fmt("W = %.5f", last.W));

  std::vector<double> psi;
  for (const AgentSample& s : tr.row(tr.length() - 1)) psi.push_back(wrap_two_pi(s.psi));
  std::sort(psi.begin(), psi.end());
  const double target = kTwoPi / static_cast<double>(psi.size());
  double worst_gap = 0.0;
  std::string gaps;
  for (std::size_t k = 0; k < psi.size(); ++k) {
    const double gap = k + 1 < psi.size() ? psi[k + 1] - psi[k] : psi.front() + kTwoPi - psi.back();
    worst_gap = std::max(worst_gap, std::abs(gap - target));
    gaps += fmt("%.4f ", gap);
  }
  rec.add("balance: sorted final psi gaps 2 pi / 7 +/- 0.01", worst_gap <= kGapTolerance,
          fmt("gaps %s(target %.4f, worst deviation %.4f)", gaps.c_str(), target, worst_gap));
  rec.add("balance: H in [25.1 +/- 0.5, 43.7 +/- 0.5] throughout",
          x.H_min >= kBalanceHLo - kHSlack && x.H_max <= kBalanceHHi + kHSlack,
          fmt("H range [%.3f, %.3f]", x.H_min, x.H_max));
  rec.add("balance: post-design H interval [25.1, 43.7] +/- 0.5",
          std::abs(run.bounds.H_lo - kBalanceHLo) <= kHSlack && std::abs(run.bounds.H_hi - kBalanceHHi) <= kHSlack,
          fmt("computed [%.3f, %.3f] (V2(0) = %.3f)", run.bounds.H_lo, run.bounds.H_hi, run.bounds.V0));
  common_closed_loop(rec, "balance", run, x);
}

void circle_regression(Recorder& rec) {
  const double radius = 10.0;
  const int n = 4;
  Scenario s{PolarCurve(Circle{radius}), InteractionGraph::circulant(n, {1}), ControlConfig{1.0, -0.2, 3.0, 0.5, kStep},
             100.0, {}, 0.0};
  const double starts[] = {0.3, 1.9, 3.1, 4.4};
  const double offsets[] = {0.8, -1.2, 0.4, 2.0};
  for (int k = 0; k < n; ++k) {
    const double phi = starts[k];
    s.initial.push_back({std::polar(radius + offsets[k], phi), wrap_two_pi(phi + 0.5 * kPi)});
  }
  const SimulationTrace tr = run(s);
  double kappa_dev = 0.0;
  double rate_dev = 0.0;
  double step_dev = 0.0;
  for (std::size_t i = 0; i < tr.length(); ++i) {
    for (int k = 0; k < n; ++k) {
      const AgentSample& a = tr.at(i, k);
      kappa_dev = std::max(kappa_dev, std::abs(s.curve.curvature(a.phi) - 1.0 / radius));
      const double z = applied_zeta(s.curve.curvature(a.phi), a.zeta, s.control.u_max);
      rate_dev = std::max(rate_dev, std::abs(psi_rate(z, s.curve) - phi_rate(a.phi, z, s.curve)));
      if (i > 0) {
        const AgentSample& b = tr.at(i - 1, k);
        step_dev = std::max(step_dev, std::abs(wrap_pi((a.psi - b.psi) - (a.phi - b.phi))));
      }
    }
  }
  rec.add("circle regression: kappa = 1/R and psi rate = phi rate within 1e-9",
          kappa_dev <= 1e-9 && rate_dev <= 1e-9 && step_dev <= 1e-9,
          fmt("kappa dev %.2e, rate dev %.2e, per-step dpsi - dphi %.2e", kappa_dev, rate_dev, step_dev));
}

void properties_group(RunCache& cache, bool fast, std::vector<CriterionResult>& out) {
  Recorder rec("properties", out);
  if (!fast) {
    for (const char* name : {"sync", "balance"}) {
      const double coarse = cache.get(name, kStep).trace.metrics.back().p_abs;
      const double fine = cache.get(name, 0.5 * kStep).trace.metrics.back().p_abs;
      rec.add(std::string("dt halving: ") + name + " final |p_psi| changes < 1e-4", std::abs(coarse - fine) < 1e-4,
              fmt("|p| dt=0.01 %.8f, dt=0.005 %.8f", coarse, fine));
    }
  }
  circle_regression(rec);
}

}  // namespace

std::vector<std::string> acceptance_groups() { return {"geometry", "graph", "sync", "balance", "properties"}; }

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
  const std::vector<std::string> groups = options.groups.empty() ? acceptance_groups() : options.groups;
  for (const std::string& g : groups) {
    const auto known = acceptance_groups();
    if (std::find(known.begin(), known.end(), g) == known.end()) throw ConfigError("unknown acceptance group " + g);
  }
  const auto wants = [&](const char* g) { return std::find(groups.begin(), groups.end(), g) != groups.end(); };

  std::vector<CriterionResult> out;
  RunCache cache(options.config_dir);
  if (wants("geometry")) geometry_group(out);
  if (wants("graph")) graph_group(out);
  if (!options.fast && wants("sync")) sync_group(cache, out);
  if (!options.fast && wants("balance")) balance_group(cache, out);
  if (wants("properties")) properties_group(cache, options.fast, out);
  return out;
}

void print_acceptance(std::ostream& out, const std::vector<CriterionResult>& results) {
  int failed = 0;
  for (const CriterionResult& r : results) {
    out << (r.pass ? "PASS" : "FAIL") << "  [" << r.group << "] " << r.name << "  (" << r.detail << ")\n";
    if (!r.pass) ++failed;
  }
  out << results.size() - static_cast<std::size_t>(failed) << "/" << results.size() << " criteria passed\n";
}

bool all_passed(const std::vector<CriterionResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const CriterionResult& r) { return r.pass; });
}

}  // namespace curveswarm::cli
