#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "curveswarm/curve_geometry.hpp"
#include "curveswarm/interaction_graph.hpp"

namespace curveswarm {

/// K < 0 drives curve phases to synchronization, K > 0 to balancing.
enum class PhaseMode { synchronization, balancing };

const char* to_string(PhaseMode mode);

struct ControlConfig {
  double k_curve = 1.0;  // K_C > 0, barrier gain
  double k_phase = -0.1;  // K != 0, phase coupling gain
  double delta = 1.0;     // safe distance (m)
  double u_max = 1.0;     // turn-rate saturation (rad/s)
  double dt = 0.01;       // integration step (s)

  PhaseMode mode() const { return k_phase < 0.0 ? PhaseMode::synchronization : PhaseMode::balancing; }
};

/// Throws InvalidArgument unless K_C > 0, K != 0, delta > 0, u_max > 0, dt > 0.
void validate(const ControlConfig& cfg);

/// Message when u_max is below the peak curvature of the target curve.
std::optional<std::string> saturation_warning(const ControlConfig& cfg, const PolarCurve& curve);

struct AgentState {
  Complex r;          // position (m)
  double theta = 0.0;  // heading, wrapped to [0, 2pi)
  double phi = 0.0;    // curve parameter, wrapped to [0, 2pi)
  double psi = 0.0;    // curve phase 2 pi sigma(phi) / Gamma
};

/// 2 pi sigma(phi) / Gamma for phi in any range (wrapped first).
double curve_phase(const PolarCurve& curve, double phi);

/// e = r - c_d - rho(phi).
Complex tracking_error(const AgentState& state, const PolarCurve& curve);

/// Barrier part of zeta: K_C <e, e^{i theta}> / (delta^2 - |e|^2).
/// Throws BarrierBreached once |e| >= delta (1 - 1e-12).
double barrier_feedback(const AgentState& state, const PolarCurve& curve, const ControlConfig& cfg);

/// zeta_k = barrier feedback + K dW/dpsi_k, with psi taken from `all_psi`.
double zeta(const AgentState& state, const PolarCurve& curve, const InteractionGraph& graph,
            std::span<const double> all_psi, const ControlConfig& cfg, int k);

/// Saturated turn rate: kappa (1 + zeta) clipped to [-u_max, u_max]; 0 when kappa == 0.
double saturate(double kappa, double zeta, double u_max);

/// The zeta for which kappa (1 + zeta) equals the applied (saturated) turn rate.
/// Equals `zeta` whenever saturation is inactive.
double applied_zeta(double kappa, double zeta, double u_max);

/// d phi / dt = (1 + zeta) / sqrt(R'^2 + R^2).
double phi_rate(double phi, double zeta, const PolarCurve& curve);

/// d psi / dt = (2 pi / Gamma)(1 + zeta).
double psi_rate(double zeta, const PolarCurve& curve);

/// Every phi in [0, 2pi) with tangent(phi) aligned to heading theta0.
/// Sign changes of the wrapped mismatch are bisected to 1e-10; with a
/// positive `heading_tolerance`, near-tangencies (local minima of the
/// mismatch no larger than the tolerance) are included as well.
std::vector<double> tangent_aligned_parameters(const PolarCurve& curve, double theta0,
                                               double heading_tolerance = 0.0);

struct TangentBranch {
  double phi = 0.0;
  double heading = 0.0;  // arg tangent(phi) for near-tangencies, theta0 otherwise
  double error_abs = 0.0;
  int candidates = 0;  // number of tangent-aligned parameters examined
};

/// Picks the tangent-aligned parameter with the smallest |e(0)|; ties within
/// 1e-12 go to the smallest phi. Throws NoFeasibleBranch when none has |e(0)| < delta.
TangentBranch init_phi(double theta0, Complex r0, const PolarCurve& curve, double delta,
                       double heading_tolerance = 0.0);

/// S = 1/2 sum ln(delta^2 / (delta^2 - |e_k|^2)).
double blf_potential(std::span<const AgentState> states, const PolarCurve& curve, double delta);

/// V1 = K_C S - K (Gamma / 2pi) W; requires K < 0.
double lyapunov_sync(std::span<const AgentState> states, const PolarCurve& curve, const InteractionGraph& graph,
                     const ControlConfig& cfg);

/// V2 = K_C S + K (Gamma / 2pi)((N/2) lambda_max - W); requires K > 0 and a circulant graph.
double lyapunov_balance(std::span<const AgentState> states, const PolarCurve& curve, const InteractionGraph& graph,
                        const ControlConfig& cfg);

/// V1 or V2 according to cfg.mode().
double lyapunov(std::span<const AgentState> states, const PolarCurve& curve, const InteractionGraph& graph,
                const ControlConfig& cfg);

struct BoundsReport {
  double V0 = 0.0;
  double delta_eff = 0.0;
  double H_lo = 0.0;
  double H_hi = 0.0;
};

/// Post-design bounds from the initial Lyapunov value: the tracking-error
/// radius delta_eff and the interval that contains H along the trajectory.
BoundsReport bounds_report(double V0, const ControlConfig& cfg, const InteractionGraph& graph, const PolarCurve& curve,
                           PhaseMode mode);

}  // namespace curveswarm
