#include <cmath>
#include <random>

#include "curveswarm/control_law.hpp"
#include "curveswarm/errors.hpp"
#include "doctest.h"

using namespace curveswarm;

namespace {

const PolarRose kRose{10.0, 6, 5.0};

AgentState on_curve(const PolarCurve& curve, double phi) {
  return AgentState{curve.point(phi), wrap_two_pi(std::arg(curve.tangent(phi))), phi, curve_phase(curve, phi)};
}

}  // namespace

TEST_CASE("config validation and mode") {
  ControlConfig cfg{2.5, -0.1, 12.0, 0.0786, 0.01};
  CHECK_NOTHROW(validate(cfg));
  CHECK(cfg.mode() == PhaseMode::synchronization);
  cfg.k_phase = 0.2;
  CHECK(cfg.mode() == PhaseMode::balancing);
  cfg.k_phase = 0.0;
  CHECK_THROWS_AS(validate(cfg), InvalidArgument);
  cfg.k_phase = -0.1;
  cfg.k_curve = -1.0;
  CHECK_THROWS_AS(validate(cfg), InvalidArgument);
  cfg.k_curve = 2.5;
  cfg.delta = 0.0;
  CHECK_THROWS_AS(validate(cfg), InvalidArgument);

  const PolarCurve rose(kRose);
  CHECK_FALSE(saturation_warning(ControlConfig{2.5, -0.1, 12.0, 0.0786, 0.01}, rose).has_value());
  CHECK(saturation_warning(ControlConfig{2.5, -0.1, 12.0, 0.05, 0.01}, rose).has_value());
}

TEST_CASE("tracking error") {
  const PolarCurve circle(Circle{10.0});
  const AgentState on = on_curve(circle, 0.7);
  CHECK(std::abs(tracking_error(on, circle)) < 1e-14);
  const AgentState out{Complex{12.0, 0.0}, kPi / 2, 0.0, 0.0};
  CHECK(tracking_error(out, circle) == Complex{2.0, 0.0});

  const PolarCurve shifted(Circle{10.0}, Complex{3.0, -4.0});
  const AgentState s{Complex{3.0, 6.0}, kPi, kPi / 2, 0.0};
  CHECK(std::abs(tracking_error(s, shifted)) < 1e-14);
}

TEST_CASE("zeta") {
  const PolarCurve rose(kRose);
  const InteractionGraph g = InteractionGraph::circulant(7, {1, 2});
  const ControlConfig cfg{2.5, -0.1, 12.0, 0.0786, 0.01};

  std::vector<AgentState> agents;
  for (int k = 0; k < 7; ++k) agents.push_back(on_curve(rose, 1.0));
  std::vector<double> psi(7, agents[0].psi);
  for (int k = 0; k < 7; ++k) CHECK(zeta(agents[static_cast<std::size_t>(k)], rose, g, psi, cfg, k) == 0.0);
  CHECK(saturate(rose.curvature(1.0), 0.0, cfg.u_max) == rose.curvature(1.0));

  // On the curve only the coupling term remains.
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  for (double& p : psi) p = angle(rng);
  for (int k = 0; k < 7; ++k) {
    double expected = 0.0;
    for (const int j : g.neighbors(k)) expected -= std::sin(psi[static_cast<std::size_t>(j)] - psi[static_cast<std::size_t>(k)]);
    expected *= cfg.k_phase;
    CHECK(std::abs(zeta(agents[0], rose, g, psi, cfg, k) - expected) < 1e-15);
    CHECK(zeta(agents[0], rose, g, psi, cfg, k) == cfg.k_phase * phase_potential_gradient(g, psi, k));
  }

  // Barrier term against a direct re-evaluation with <z1, z2> = Re(conj(z1) z2).
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double phi = angle(rng);
    const Complex offset = 8.0 * Complex(unit(rng), unit(rng)) / std::sqrt(2.0);
    const AgentState s{rose.center() + rose.rho(phi) + offset, angle(rng), phi, 0.0};
    const double ex = offset.real();
    const double ey = offset.imag();
    const double inner = ex * std::cos(s.theta) + ey * std::sin(s.theta);
    const double expected = cfg.k_curve * inner / (cfg.delta * cfg.delta - (ex * ex + ey * ey));
    CHECK(std::abs(barrier_feedback(s, rose, cfg) - expected) < 1e-12 * std::max(1.0, std::abs(expected)));
  }

  const AgentState outside{rose.point(0.0) + Complex{12.0, 0.0}, 0.0, 0.0, 0.0};
  CHECK_THROWS_AS(barrier_feedback(outside, rose, cfg), BarrierBreached);
}

TEST_CASE("saturation") {
  CHECK(saturate(0.05, 0.0, 0.0786) == 0.05);
  CHECK(saturate(0.0776, 0.5, 0.0786) == 0.0786);
  CHECK(saturate(0.0776, -3.0, 0.0786) == -0.0786);
  CHECK(saturate(0.0, 1e6, 0.0786) == 0.0);
  CHECK(saturate(-0.03, 0.2, 0.0786) == -0.03 * 1.2);

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> k(-0.2, 0.2);
  std::uniform_real_distribution<double> z(-50.0, 50.0);
  for (int i = 0; i < 10000; ++i) {
    const double kappa = k(rng);
    const double zeta_value = z(rng);
    const double u = saturate(kappa, zeta_value, 0.0786);
    REQUIRE(std::abs(u) <= 0.0786);
    const double applied = applied_zeta(kappa, zeta_value, 0.0786);
    REQUIRE(std::abs(kappa * (1.0 + applied) - u) <= 1e-15);
    if (std::abs(kappa * (1.0 + zeta_value)) <= 0.0786) {
      REQUIRE(u == kappa * (1.0 + zeta_value));
      REQUIRE(applied == zeta_value);
    }
  }
}

TEST_CASE("phase rates") {
  const PolarCurve circle(Circle{10.0});
  CHECK(phi_rate(0.3, 0.0, circle) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(phi_rate(0.3, -1.0, circle) == 0.0);
  CHECK(psi_rate(0.0, circle) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(psi_rate(-1.0, circle) == 0.0);

  const PolarCurve rose(kRose);
  CHECK(phi_rate(0.0, 0.0, rose) == doctest::Approx(1.0 / 55.0).epsilon(1e-15));
  CHECK(psi_rate(0.0, rose) == doctest::Approx(kTwoPi / 340.82).epsilon(5e-3));
  CHECK(curve_phase(rose, kTwoPi) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(curve_phase(rose, kPi) == doctest::Approx(kTwoPi * rose.arc_length(kPi) / rose.perimeter()));
}

TEST_CASE("tangent-aligned branches") {
  const PolarCurve circle(Circle{10.0});
  for (const double theta0 : {0.2, 1.9, 4.4}) {
    const Complex r0 = circle.point(wrap_two_pi(theta0 - kPi / 2));
    const TangentBranch b = init_phi(theta0, r0, circle, 1.0);
    CHECK(std::abs(wrap_pi(b.phi - (theta0 - kPi / 2))) < 1e-9);
    CHECK(b.heading == doctest::Approx(theta0));
    CHECK(b.candidates == 1);
  }

  const PolarCurve limacon(ConvexLimacon{2.0, 4.5});
  const PolarCurve rose(kRose);
  // Root counts from a 2e6-point scan of the wrapped heading mismatch.
  const std::pair<double, std::size_t> rose_counts[] = {{0.0, 3}, {0.7, 1}, {2.0, 3}, {4.0, 3}};
  for (const auto& [theta0, count] : rose_counts) {
    CHECK(tangent_aligned_parameters(limacon, theta0).size() == 1);
    const std::vector<double> roots = tangent_aligned_parameters(rose, theta0);
    CHECK(roots.size() == count);
    for (const double phi : roots) CHECK(std::abs(rose.tangent(phi) - std::polar(1.0, theta0)) < 1e-8);
  }

  // Nearest branch wins.
  const std::vector<double> roots = tangent_aligned_parameters(rose, 2.0);
  for (const double target : roots) {
    const TangentBranch b = init_phi(2.0, rose.point(target) + Complex{0.5, 0.5}, rose, 12.0);
    CHECK(std::abs(std::abs(rose.point(b.phi) - rose.point(target))) < 1.5);
    CHECK(std::abs(rose.tangent(b.phi) - std::polar(1.0, 2.0)) < 1e-8);
  }

  CHECK_THROWS_AS(init_phi(2.0, Complex{500.0, 0.0}, rose, 12.0), NoFeasibleBranch);
}

TEST_CASE("near-tangent headings snap with a tolerance") {
  const PolarCurve rose(kRose);
  // Heading 341.2 deg from (8.1, -42.5): no exact tangency within 12 m.
  const double theta0 = 341.2 * kPi / 180.0;
  const Complex r0{8.1, -42.5};
  CHECK_THROWS_AS(init_phi(theta0, r0, rose, 12.0), NoFeasibleBranch);
  const TangentBranch b = init_phi(theta0, r0, rose, 12.0, 0.05 * kPi / 180.0);
  CHECK(b.error_abs < 12.0);
  CHECK(std::abs(wrap_pi(b.heading - theta0)) <= 0.05 * kPi / 180.0);
  CHECK(std::abs(rose.tangent(b.phi) - std::polar(1.0, b.heading)) < 1e-12);
}

TEST_CASE("Lyapunov functions") {
  const PolarCurve rose(kRose);
  const InteractionGraph g = InteractionGraph::circulant(7, {1, 2});
  std::vector<AgentState> sync;
  for (int k = 0; k < 7; ++k) sync.push_back(on_curve(rose, 2.0));
  CHECK(lyapunov_sync(sync, rose, g, ControlConfig{2.5, -0.1, 12.0, 0.0786, 0.01}) == 0.0);
  CHECK_THROWS_AS(lyapunov_sync(sync, rose, g, ControlConfig{2.5, 0.2, 12.0, 0.0786, 0.01}), InvalidArgument);
  CHECK_THROWS_AS(lyapunov_balance(sync, rose, g, ControlConfig{2.5, -0.1, 12.0, 0.0786, 0.01}), InvalidArgument);

  // Four-agent ring in antiphase: W = (N/2) lambda_max.
  const PolarCurve circle(Circle{10.0});
  const InteractionGraph ring = InteractionGraph::circulant(4, {1});
  std::vector<AgentState> anti;
  for (int k = 0; k < 4; ++k) anti.push_back(on_curve(circle, k % 2 ? kPi : 0.0));
  CHECK(std::abs(lyapunov_balance(anti, circle, ring, ControlConfig{1.0, 0.3, 2.0, 1.0, 0.01})) < 1e-12);
  CHECK_THROWS_AS(lyapunov_balance(anti, circle, InteractionGraph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}}),
                                   ControlConfig{1.0, 0.3, 2.0, 1.0, 0.01}),
                  InvalidArgument);

  // |e| = delta sqrt(1 - e^-2) gives S = 1.
  const AgentState s{circle.point(0.0) + Complex{3.0 * 0.9298734950321937, 0.0}, kPi / 2, 0.0, 0.0};
  const std::vector<AgentState> one{s};
  CHECK(blf_potential(one, circle, 3.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("bounds report") {
  const PolarCurve rose(kRose);
  const InteractionGraph g = InteractionGraph::circulant(7, {1, 2});
  const ControlConfig sync{2.5, -0.1, 12.0, 0.0786, 0.01};
  const ControlConfig balance{2.5, 0.2, 12.0, 0.0786, 0.01};

  const BoundsReport zero = bounds_report(0.0, sync, g, rose, PhaseMode::synchronization);
  CHECK(zero.delta_eff == 0.0);
  CHECK(zero.H_lo == 0.0);
  CHECK(zero.H_hi == 0.0);

  const double v0 = 10.0;
  const BoundsReport s = bounds_report(v0, sync, g, rose, PhaseMode::synchronization);
  CHECK(s.delta_eff == doctest::Approx(12.0 * std::sqrt(1.0 - std::exp(-2.0 * v0 / 2.5))).epsilon(1e-14));
  CHECK(s.delta_eff < 12.0);
  CHECK(s.H_hi == doctest::Approx(-4.0 * kPi * v0 / (-0.1 * rose.perimeter())).epsilon(1e-14));
  CHECK(bounds_report(1e4, sync, g, rose, PhaseMode::synchronization).H_hi == 4.0 * g.edge_count());

  const BoundsReport b = bounds_report(v0, balance, g, rose, PhaseMode::balancing);
  CHECK(b.H_hi == doctest::Approx(7.0 * g.lambda_max()));
  CHECK(b.H_lo == doctest::Approx(7.0 * g.lambda_max() - 4.0 * kPi * v0 / (0.2 * rose.perimeter())));
  CHECK(bounds_report(1e4, balance, g, rose, PhaseMode::balancing).H_lo == 0.0);
  CHECK_THROWS_AS(bounds_report(-1.0, sync, g, rose, PhaseMode::synchronization), InvalidArgument);
}
