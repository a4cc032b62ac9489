#include "curveswarm/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "curveswarm/errors.hpp"

namespace curveswarm {

namespace {

struct Rate {
  Complex dr;
  double dtheta = 0.0;
  double dphi = 0.0;
  double dpsi = 0.0;
};

std::vector<double> phases_from_parameters(std::span<const AgentState> states, const PolarCurve& curve) {
  std::vector<double> psi;
  psi.reserve(states.size());
  for (const AgentState& s : states) psi.push_back(curve_phase(curve, s.phi));
  return psi;
}

// Right-hand side of the closed loop. The curve parameter advances with the
// turn rate actually applied, so the heading stays on the curve tangent while
// the input is saturated.
std::vector<Rate> closed_loop_rates(std::span<const AgentState> states, const PolarCurve& curve,
                                    const InteractionGraph& graph, const ControlConfig& cfg) {
  const std::vector<double> psi = phases_from_parameters(states, curve);
  std::vector<Rate> rates(states.size());
  for (std::size_t k = 0; k < states.size(); ++k) {
    AgentState s = states[k];
    s.psi = psi[k];
    const double z = zeta(s, curve, graph, psi, cfg, static_cast<int>(k));
    const double kappa = curve.curvature(s.phi);
    const double applied = applied_zeta(kappa, z, cfg.u_max);
    rates[k].dr = std::polar(1.0, s.theta);
    rates[k].dtheta = saturate(kappa, z, cfg.u_max);
    rates[k].dphi = phi_rate(s.phi, applied, curve);
    rates[k].dpsi = psi_rate(applied, curve);
  }
  return rates;
}

std::vector<AgentState> shifted(std::span<const AgentState> states, const std::vector<Rate>& rates, double h) {
  std::vector<AgentState> out(states.begin(), states.end());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k].r += h * rates[k].dr;
    out[k].theta += h * rates[k].dtheta;
    out[k].phi += h * rates[k].dphi;
  }
  return out;
}

std::vector<AgentState> rk4(std::span<const AgentState> states, const PolarCurve& curve,
                            const InteractionGraph& graph, const ControlConfig& cfg,
                            std::vector<double>* psi_increment) {
  const double dt = cfg.dt;
  const std::vector<Rate> k1 = closed_loop_rates(states, curve, graph, cfg);
  const std::vector<Rate> k2 = closed_loop_rates(shifted(states, k1, 0.5 * dt), curve, graph, cfg);
  const std::vector<Rate> k3 = closed_loop_rates(shifted(states, k2, 0.5 * dt), curve, graph, cfg);
  const std::vector<Rate> k4 = closed_loop_rates(shifted(states, k3, dt), curve, graph, cfg);

  std::vector<AgentState> next(states.begin(), states.end());
  if (psi_increment) psi_increment->assign(states.size(), 0.0);
  for (std::size_t k = 0; k < next.size(); ++k) {
    next[k].r += dt / 6.0 * (k1[k].dr + 2.0 * k2[k].dr + 2.0 * k3[k].dr + k4[k].dr);
    next[k].theta = wrap_two_pi(next[k].theta +
                                dt / 6.0 * (k1[k].dtheta + 2.0 * k2[k].dtheta + 2.0 * k3[k].dtheta + k4[k].dtheta));
    next[k].phi =
        wrap_two_pi(next[k].phi + dt / 6.0 * (k1[k].dphi + 2.0 * k2[k].dphi + 2.0 * k3[k].dphi + k4[k].dphi));
    next[k].psi = curve_phase(curve, next[k].phi);
    if (psi_increment) {
      (*psi_increment)[k] = dt / 6.0 * (k1[k].dpsi + 2.0 * k2[k].dpsi + 2.0 * k3[k].dpsi + k4[k].dpsi);
    }
  }
  return next;
}

void record(SimulationTrace& trace, double t, std::span<const AgentState> states, const PolarCurve& curve,
            const InteractionGraph& graph, const ControlConfig& cfg) {
  std::vector<double> psi;
  psi.reserve(states.size());
  for (const AgentState& s : states) psi.push_back(s.psi);

  trace.times.push_back(t);
  for (std::size_t k = 0; k < states.size(); ++k) {
    const AgentState& s = states[k];
    AgentSample sample;
    sample.r = s.r;
    sample.theta = s.theta;
    sample.phi = s.phi;
    sample.psi = s.psi;
    sample.e_abs = std::abs(tracking_error(s, curve));
    sample.zeta = zeta(s, curve, graph, psi, cfg, static_cast<int>(k));
    sample.u = saturate(curve.curvature(s.phi), sample.zeta, cfg.u_max);
    trace.samples.push_back(sample);
  }
  MetricSample m;
  std::tie(m.p_abs, m.p_arg) = phase_order(psi);
  m.W = phase_potential(graph, psi);
  m.H = edge_disagreement(graph, psi);
  m.V = states.empty() ? 0.0 : lyapunov(states, curve, graph, cfg);
  trace.metrics.push_back(m);
}

// Uniform bucket grid over sampled curve points answering "is some sample
// within `radius` of z".
class ProximityIndex {
 public:
  ProximityIndex(std::vector<Complex> points, double cell) : points_(std::move(points)), cell_(cell) {
    double xmin = points_.front().real(), xmax = xmin, ymin = points_.front().imag(), ymax = ymin;
    for (const Complex& p : points_) {
      xmin = std::min(xmin, p.real());
      xmax = std::max(xmax, p.real());
      ymin = std::min(ymin, p.imag());
      ymax = std::max(ymax, p.imag());
    }
    origin_ = {xmin, ymin};
    nx_ = static_cast<int>((xmax - xmin) / cell_) + 1;
    ny_ = static_cast<int>((ymax - ymin) / cell_) + 1;
    buckets_.assign(static_cast<std::size_t>(nx_) * ny_, {});
    for (std::size_t i = 0; i < points_.size(); ++i) {
      const auto [ix, iy] = cell_of(points_[i]);
      buckets_[static_cast<std::size_t>(iy) * nx_ + ix].push_back(i);
    }
  }

  bool within(Complex z, double radius) const {
    const double r2 = radius * radius;
    const double fx = (z.real() - origin_.real()) / cell_;
    const double fy = (z.imag() - origin_.imag()) / cell_;
    const int cx = static_cast<int>(std::floor(fx));
    const int cy = static_cast<int>(std::floor(fy));
    const int reach = static_cast<int>(std::ceil(radius / cell_));
    for (int ring = 0; ring <= reach; ++ring) {
      for (int iy = cy - ring; iy <= cy + ring; ++iy) {
        for (int ix = cx - ring; ix <= cx + ring; ++ix) {
          if (std::max(std::abs(ix - cx), std::abs(iy - cy)) != ring) continue;
          if (ix < 0 || iy < 0 || ix >= nx_ || iy >= ny_) continue;
          for (const std::size_t i : buckets_[static_cast<std::size_t>(iy) * nx_ + ix]) {
            if (std::norm(points_[i] - z) < r2) return true;
          }
        }
      }
    }
    return false;
  }

 private:
  std::pair<int, int> cell_of(Complex p) const {
    const int ix = std::clamp(static_cast<int>((p.real() - origin_.real()) / cell_), 0, nx_ - 1);
    const int iy = std::clamp(static_cast<int>((p.imag() - origin_.imag()) / cell_), 0, ny_ - 1);
    return {ix, iy};
  }

  std::vector<Complex> points_;
  double cell_;
  Complex origin_;
  int nx_ = 1;
  int ny_ = 1;
  std::vector<std::vector<std::size_t>> buckets_;
};

}  // namespace

std::vector<AgentState> initial_states(const Scenario& scenario, std::vector<TangentBranch>* branches) {
  std::vector<AgentState> states;
  states.reserve(scenario.initial.size());
  if (branches) branches->clear();
  for (const InitialCondition& ic : scenario.initial) {
    const TangentBranch branch =
        init_phi(ic.theta, ic.r, scenario.curve, scenario.control.delta, scenario.heading_tolerance);
    AgentState s;
    s.r = ic.r;
    s.theta = branch.heading;
    s.phi = branch.phi;
    s.psi = curve_phase(scenario.curve, branch.phi);
    states.push_back(s);
    if (branches) branches->push_back(branch);
  }
  return states;
}

std::vector<AgentState> step(std::span<const AgentState> states, const PolarCurve& curve,
                             const InteractionGraph& graph, const ControlConfig& cfg) {
  if (states.empty()) return {};
  return rk4(states, curve, graph, cfg, nullptr);
}

SimulationTrace run(const Scenario& scenario) {
  const ControlConfig& cfg = scenario.control;
  validate(cfg);
  if (!(scenario.horizon > cfg.dt)) throw InvalidArgument("horizon T must exceed dt");
  if (static_cast<int>(scenario.initial.size()) != scenario.graph.size()) {
    throw InvalidArgument("initial condition count does not match the graph size");
  }
  if (cfg.mode() == PhaseMode::balancing && !scenario.graph.is_circulant()) {
    throw InvalidArgument("balancing requires a circulant interaction graph");
  }

  SimulationTrace trace;
  trace.agents = static_cast<int>(scenario.initial.size());
  trace.control = cfg;
  trace.horizon = scenario.horizon;

  std::vector<AgentState> states = initial_states(scenario, &trace.initial_branches);
  const auto steps = static_cast<std::size_t>(std::floor(scenario.horizon / cfg.dt + 1e-9));
  trace.times.reserve(steps + 1);
  trace.samples.reserve((steps + 1) * states.size());
  trace.metrics.reserve(steps + 1);

  std::vector<double> psi_integrated;
  for (const AgentState& s : states) psi_integrated.push_back(s.psi);
  std::vector<double> increment;

  record(trace, 0.0, states, scenario.curve, scenario.graph, cfg);
  for (std::size_t i = 1; i <= steps; ++i) {
    states = rk4(states, scenario.curve, scenario.graph, cfg, &increment);
    for (std::size_t k = 0; k < states.size(); ++k) {
      psi_integrated[k] += increment[k];
      trace.psi_integration_mismatch =
          std::max(trace.psi_integration_mismatch, std::abs(wrap_pi(psi_integrated[k] - states[k].psi)));
    }
    record(trace, static_cast<double>(i) * cfg.dt, states, scenario.curve, scenario.graph, cfg);
  }
  return trace;
}

RunVerdict verify(const SimulationTrace& trace, const PolarCurve& curve, const InteractionGraph& graph,
                  const BoundsReport& bounds, const VerifyTolerances& tol) {
  RunVerdict v;
  const ControlConfig& cfg = trace.control;
  const std::size_t len = trace.length();
  if (len == 0) {
    v.failures.push_back("empty trace");
    return v;
  }
  const auto fail = [&](const std::string& what, double t, double value) {
    std::ostringstream os;
    os << what << " at t = " << t << " (value " << value << ")";
    v.failures.push_back(os.str());
  };

  // Tracking-error bound, H interval, input saturation.
  v.bounds_respected = true;
  v.input_bounded = true;
  for (std::size_t i = 0; i < len; ++i) {
    for (const AgentSample& s : trace.row(i)) {
      if (v.bounds_respected && s.e_abs > bounds.delta_eff + tol.e_bound_slack) {
        v.bounds_respected = false;
        fail("|e_k| exceeds delta_eff", trace.times[i], s.e_abs);
      }
      if (v.input_bounded && std::abs(s.u) > cfg.u_max) {
        v.input_bounded = false;
        fail("|u_k| exceeds u_max", trace.times[i], s.u);
      }
    }
    const double h = trace.metrics[i].H;
    if (v.bounds_respected && (h < bounds.H_lo - tol.H_slack || h > bounds.H_hi + tol.H_slack)) {
      v.bounds_respected = false;
      fail("H outside its post-design interval", trace.times[i], h);
    }
  }

  v.V_monotone = true;
  for (std::size_t i = 1; i < len; ++i) {
    const double rise = trace.metrics[i].V - trace.metrics[i - 1].V;
    if (rise > tol.V_step_slack) {
      v.V_monotone = false;
      fail("V increased", trace.times[i], rise);
      break;
    }
  }

  const auto tail_start = static_cast<std::size_t>(std::floor((1.0 - tol.tail_fraction) * static_cast<double>(len - 1)));
  double tail_e = 0.0;
  for (std::size_t i = tail_start; i < len; ++i) {
    for (const AgentSample& s : trace.row(i)) tail_e = std::max(tail_e, s.e_abs);
  }
  v.converged_to_curve = tail_e < tol.e_converged;
  if (!v.converged_to_curve) fail("max |e_k| over the tail is not below tol_e", trace.times.back(), tail_e);

  const MetricSample& last = trace.metrics.back();
  if (cfg.mode() == PhaseMode::synchronization) {
    v.phase_mode_achieved = last.p_abs > tol.sync_order_min && last.W < tol.sync_potential_max;
  } else {
    const double w_max = 0.5 * graph.size() * graph.lambda_max();
    v.phase_mode_achieved =
        last.p_abs < tol.balance_order_max && std::abs(last.W - w_max) <= tol.balance_potential_rel * w_max;
  }
  if (!v.phase_mode_achieved) fail("final phase arrangement not reached", trace.times.back(), last.p_abs);

  const ProximityIndex index(curve.sample(tol.confinement_samples), cfg.delta);
  v.confinement = true;
  for (std::size_t i = 0; i < len && v.confinement; ++i) {
    for (const AgentSample& s : trace.row(i)) {
      if (!index.within(s.r, cfg.delta + tol.confinement_slack)) {
        v.confinement = false;
        fail("agent left the set B_delta", trace.times[i], std::abs(s.r - curve.center()));
        break;
      }
    }
  }
  return v;
}

}  // namespace curveswarm
