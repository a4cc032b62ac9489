#include "curveswarm/control_law.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "curveswarm/errors.hpp"

namespace curveswarm {

namespace {

constexpr int kBranchScanPoints = 4096;
constexpr double kBisectionWidth = 1e-10;
constexpr double kBarrierMargin = 1e-12;

double heading_mismatch(const PolarCurve& curve, double phi, double theta0) {
  return wrap_pi(std::arg(curve.tangent(phi)) - theta0);
}

double golden_min(const auto& f, double lo, double hi) {
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > 1e-13) {
    if (f1 > f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = f(x1);
    }
  }
  return f1 < f2 ? x1 : x2;
}

double phase_coupling_term(const InteractionGraph& graph, std::span<const double> all_psi, const ControlConfig& cfg,
                           int k) {
  return cfg.k_phase * phase_potential_gradient(graph, all_psi, k);
}

std::vector<double> phases_of(std::span<const AgentState> states) {
  std::vector<double> psi;
  psi.reserve(states.size());
  for (const AgentState& s : states) psi.push_back(s.psi);
  return psi;
}

}  // namespace

const char* to_string(PhaseMode mode) {
  return mode == PhaseMode::synchronization ? "synchronization" : "balancing";
}

void validate(const ControlConfig& cfg) {
  if (!(cfg.k_curve > 0.0)) throw InvalidArgument("K_C must be positive");
  if (cfg.k_phase == 0.0 || !std::isfinite(cfg.k_phase)) throw InvalidArgument("K must be nonzero");
  if (!(cfg.delta > 0.0)) throw InvalidArgument("delta must be positive");
  if (!(cfg.u_max > 0.0)) throw InvalidArgument("u_max must be positive");
  if (!(cfg.dt > 0.0)) throw InvalidArgument("dt must be positive");
}

std::optional<std::string> saturation_warning(const ControlConfig& cfg, const PolarCurve& curve) {
  if (cfg.u_max >= curve.kappa_max()) return std::nullopt;
  std::ostringstream os;
  os << "u_max = " << cfg.u_max << " is below max |kappa| = " << curve.kappa_max()
     << "; the agents cannot follow the curve at unit speed and convergence is not guaranteed";
  return os.str();
}

double curve_phase(const PolarCurve& curve, double phi) {
  return kTwoPi * curve.arc_length(wrap_two_pi(phi)) / curve.perimeter();
}

Complex tracking_error(const AgentState& state, const PolarCurve& curve) {
  return state.r - curve.center() - curve.rho(state.phi);
}

double barrier_feedback(const AgentState& state, const PolarCurve& curve, const ControlConfig& cfg) {
  const Complex e = tracking_error(state, curve);
  const double e_abs = std::abs(e);
  if (!(e_abs < cfg.delta * (1.0 - kBarrierMargin))) {
    std::ostringstream os;
    os << "tracking error |e| = " << e_abs << " reached the barrier delta = " << cfg.delta;
    throw BarrierBreached(os.str());
  }
  const double inner = (std::conj(e) * std::polar(1.0, state.theta)).real();
  return cfg.k_curve * inner / (cfg.delta * cfg.delta - e_abs * e_abs);
}

double zeta(const AgentState& state, const PolarCurve& curve, const InteractionGraph& graph,
            std::span<const double> all_psi, const ControlConfig& cfg, int k) {
  return barrier_feedback(state, curve, cfg) + phase_coupling_term(graph, all_psi, cfg, k);
}

double saturate(double kappa, double zeta, double u_max) {
  if (kappa == 0.0) return 0.0;
  const double u = kappa * (1.0 + zeta);
  if (std::abs(u) <= u_max) return u;
  return u > 0.0 ? u_max : -u_max;
}

double applied_zeta(double kappa, double zeta, double u_max) {
  if (kappa == 0.0) return zeta;
  const double u = kappa * (1.0 + zeta);
  if (std::abs(u) <= u_max) return zeta;
  return saturate(kappa, zeta, u_max) / kappa - 1.0;
}

double phi_rate(double phi, double zeta, const PolarCurve& curve) { return (1.0 + zeta) / curve.speed(phi); }

double psi_rate(double zeta, const PolarCurve& curve) { return kTwoPi / curve.perimeter() * (1.0 + zeta); }

std::vector<double> tangent_aligned_parameters(const PolarCurve& curve, double theta0, double heading_tolerance) {
  const int n = kBranchScanPoints;
  const double h = kTwoPi / n;
  std::vector<double> m(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j < n; ++j) m[static_cast<std::size_t>(j)] = heading_mismatch(curve, j * h, theta0);
  m[static_cast<std::size_t>(n)] = m[0];

  const auto at = [&](int j) { return m[static_cast<std::size_t>((j % n + n) % n)]; };

  std::vector<double> roots;
  for (int j = 0; j < n; ++j) {
    const double a = at(j);
    const double b = at(j + 1);
    if (a == 0.0) {
      roots.push_back(j * h);
      continue;
    }
    if (a * b >= 0.0 || std::abs(a) >= 0.5 * kPi || std::abs(b) >= 0.5 * kPi) continue;
    double lo = j * h;
    double hi = (j + 1) * h;
    double flo = a;
    while (hi - lo > kBisectionWidth) {
      const double mid = 0.5 * (lo + hi);
      const double fm = heading_mismatch(curve, mid, theta0);
      if (fm == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((fm < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    roots.push_back(wrap_two_pi(0.5 * (lo + hi)));
  }

  if (heading_tolerance > 0.0) {
    for (int j = 0; j < n; ++j) {
      const double prev = at(j - 1);
      const double cur = at(j);
      const double next = at(j + 1);
      if (std::abs(cur) > std::abs(prev) || std::abs(cur) > std::abs(next)) continue;
      if (std::abs(cur) >= 0.5 * kPi) continue;
      if (prev * cur <= 0.0 || cur * next <= 0.0) continue;  // covered by bisection
      const double phi = golden_min([&](double p) { return std::abs(heading_mismatch(curve, p, theta0)); },
                                    (j - 1) * h, (j + 1) * h);
      if (std::abs(heading_mismatch(curve, phi, theta0)) <= heading_tolerance) roots.push_back(wrap_two_pi(phi));
    }
  }

  std::sort(roots.begin(), roots.end());
  std::vector<double> unique;
  for (const double r : roots) {
    if (unique.empty() || r - unique.back() > 1e-9) unique.push_back(r);
  }
  if (unique.size() > 1 && unique.front() + kTwoPi - unique.back() <= 1e-9) unique.pop_back();
  return unique;
}

TangentBranch init_phi(double theta0, Complex r0, const PolarCurve& curve, double delta, double heading_tolerance) {
  const std::vector<double> candidates = tangent_aligned_parameters(curve, theta0, heading_tolerance);
  TangentBranch best;
  best.candidates = static_cast<int>(candidates.size());
  bool found = false;
  for (const double phi : candidates) {
    const double err = std::abs(r0 - curve.point(phi));
    if (!(err < delta)) continue;
    if (!found || err < best.error_abs - 1e-12) {
      best.phi = phi;
      best.error_abs = err;
      found = true;
    }
  }
  if (!found) {
    std::ostringstream os;
    os << "no tangent-aligned curve parameter for heading " << theta0 << " rad from (" << r0.real() << ", "
       << r0.imag() << ") lies within delta = " << delta << " (" << candidates.size() << " aligned parameters)";
    throw NoFeasibleBranch(os.str());
  }
  const double mismatch = heading_mismatch(curve, best.phi, theta0);
  best.heading = std::abs(mismatch) < 1e-9 ? wrap_two_pi(theta0) : wrap_two_pi(std::arg(curve.tangent(best.phi)));
  return best;
}

double blf_potential(std::span<const AgentState> states, const PolarCurve& curve, double delta) {
  double s = 0.0;
  for (const AgentState& st : states) {
    const double ratio = std::norm(tracking_error(st, curve)) / (delta * delta);
    if (!(ratio < 1.0)) throw BarrierBreached("tracking error outside the barrier while evaluating S");
    s -= 0.5 * std::log1p(-ratio);
  }
  return s;
}

double lyapunov_sync(std::span<const AgentState> states, const PolarCurve& curve, const InteractionGraph& graph,
                     const ControlConfig& cfg) {
  if (!(cfg.k_phase < 0.0)) throw InvalidArgument("V1 is a Lyapunov function only for K < 0");
  const std::vector<double> psi = phases_of(states);
  return cfg.k_curve * blf_potential(states, curve, cfg.delta) -
         cfg.k_phase * curve.perimeter() / kTwoPi * phase_potential(graph, psi);
}

double lyapunov_balance(std::span<const AgentState> states, const PolarCurve& curve, const InteractionGraph& graph,
                        const ControlConfig& cfg) {
  if (!(cfg.k_phase > 0.0)) throw InvalidArgument("V2 is a Lyapunov function only for K > 0");
  if (!graph.is_circulant()) throw InvalidArgument("V2 requires a circulant interaction graph");
  const std::vector<double> psi = phases_of(states);
  const double w_max = 0.5 * graph.size() * graph.lambda_max();
  return cfg.k_curve * blf_potential(states, curve, cfg.delta) +
         cfg.k_phase * curve.perimeter() / kTwoPi * (w_max - phase_potential(graph, psi));
}

double lyapunov(std::span<const AgentState> states, const PolarCurve& curve, const InteractionGraph& graph,
                const ControlConfig& cfg) {
  return cfg.mode() == PhaseMode::synchronization ? lyapunov_sync(states, curve, graph, cfg)
                                                  : lyapunov_balance(states, curve, graph, cfg);
}

BoundsReport bounds_report(double V0, const ControlConfig& cfg, const InteractionGraph& graph, const PolarCurve& curve,
                           PhaseMode mode) {
  if (!(V0 >= 0.0)) throw InvalidArgument("initial Lyapunov value must be nonnegative");
  BoundsReport b;
  b.V0 = V0;
  b.delta_eff = cfg.delta * std::sqrt(-std::expm1(-2.0 * V0 / cfg.k_curve));
  const double phase_budget = 4.0 * kPi * V0 / (cfg.k_phase * curve.perimeter());
  if (mode == PhaseMode::synchronization) {
    b.H_lo = 0.0;
    b.H_hi = std::min(-phase_budget, 4.0 * graph.edge_count());
  } else {
    const double h_max = graph.size() * graph.lambda_max();
    b.H_lo = std::max(0.0, h_max - phase_budget);
    b.H_hi = h_max;
  }
  return b;
}

}  // namespace curveswarm
