#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "curveswarm/control_law.hpp"
#include "curveswarm/curve_geometry.hpp"
#include "curveswarm/interaction_graph.hpp"

namespace curveswarm {

struct InitialCondition {
  Complex r;
  double theta = 0.0;
};

struct Scenario {
  PolarCurve curve;
  InteractionGraph graph;
  ControlConfig control;
  double horizon = 1500.0;  // T (s)
  std::vector<InitialCondition> initial;
  /// Headings within this angle (rad) of a curve tangent count as aligned;
  /// the heading is then snapped onto that tangent.
  double heading_tolerance = 0.0;
};

struct AgentSample {
  Complex r;
  double theta = 0.0;
  double phi = 0.0;
  double psi = 0.0;
  double e_abs = 0.0;
  double zeta = 0.0;
  double u = 0.0;
};

struct MetricSample {
  double p_abs = 0.0;  // |p_psi|
  double p_arg = 0.0;  // Psi
  double W = 0.0;
  double H = 0.0;
  double V = 0.0;
};

struct SimulationTrace {
  int agents = 0;
  ControlConfig control;
  double horizon = 0.0;
  std::vector<double> times;
  std::vector<AgentSample> samples;  // times.size() * agents, time-major
  std::vector<MetricSample> metrics;
  std::vector<TangentBranch> initial_branches;
  /// max over samples of |wrap(psi integrated from the phase rate - psi from arc length)|.
  double psi_integration_mismatch = 0.0;

  std::size_t length() const { return times.size(); }
  const AgentSample& at(std::size_t step, int k) const {
    return samples[step * static_cast<std::size_t>(agents) + static_cast<std::size_t>(k)];
  }
  std::span<const AgentSample> row(std::size_t step) const {
    return {samples.data() + step * static_cast<std::size_t>(agents), static_cast<std::size_t>(agents)};
  }
};

struct RunVerdict {
  bool converged_to_curve = false;
  bool phase_mode_achieved = false;
  bool V_monotone = false;
  bool confinement = false;
  bool bounds_respected = false;
  bool input_bounded = false;
  std::vector<std::string> failures;

  bool all() const {
    return converged_to_curve && phase_mode_achieved && V_monotone && confinement && bounds_respected &&
           input_bounded;
  }
};

struct VerifyTolerances {
  double e_converged = 1e-3;     // tol_e on max |e_k| over the tail
  double tail_fraction = 0.05;   // tail of the trace used for convergence
  double e_bound_slack = 1e-3;   // |e_k| <= delta_eff + slack
  double H_slack = 0.5;          // H within [H_lo, H_hi] +/- slack
  double V_step_slack = 1e-7;    // allowed per-step increase of V
  double confinement_slack = 1e-6;
  int confinement_samples = 8192;
  double sync_order_min = 0.99;     // final |p_psi| for synchronization
  double sync_potential_max = 0.05;  // final W for synchronization
  double balance_order_max = 0.01;  // final |p_psi| for balancing
  double balance_potential_rel = 0.01;  // final W vs (N/2) lambda_max
};

/// Agent states at t = 0: phi from init_phi, heading snapped when a
/// near-tangency was used, psi from arc length.
std::vector<AgentState> initial_states(const Scenario& scenario, std::vector<TangentBranch>* branches = nullptr);

/// One classical RK4 step of the closed loop. Control is recomputed at every
/// stage from that stage's snapshot of all agents.
std::vector<AgentState> step(std::span<const AgentState> states, const PolarCurve& curve,
                             const InteractionGraph& graph, const ControlConfig& cfg);

/// Integrates the scenario over [0, T] with floor(T/dt) + 1 samples.
SimulationTrace run(const Scenario& scenario);

/// Judges a trace against the curve and the post-design bounds; never looks
/// at controller internals.
RunVerdict verify(const SimulationTrace& trace, const PolarCurve& curve, const InteractionGraph& graph,
                  const BoundsReport& bounds, const VerifyTolerances& tol = {});

}  // namespace curveswarm
