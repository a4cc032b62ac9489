#include <benchmark/benchmark.h>

#include "curveswarm/simulator.hpp"

using namespace curveswarm;

namespace {

const PolarCurve& rose() {
  static const PolarCurve curve(PolarRose{10.0, 6, 5.0});
  return curve;
}

Scenario rose_scenario(int agents) {
  Scenario s{rose(), InteractionGraph::circulant(agents, {1, 2}), ControlConfig{2.5, -0.1, 12.0, 0.0786, 0.01},
             10.0, {}, 0.0};
  for (int k = 0; k < agents; ++k) {
    const double phi = kTwoPi * k / agents;
    s.initial.push_back({rose().point(phi) + Complex{1.0, -0.5}, wrap_two_pi(std::arg(rose().tangent(phi)))});
  }
  return s;
}

}  // namespace

static void BM_CurveConstruction(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(PolarCurve(PolarRose{10.0, 6, 5.0}));
}
BENCHMARK(BM_CurveConstruction)->Unit(benchmark::kMillisecond);

static void BM_Frame(benchmark::State& state) {
  double phi = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rose().frame(phi));
    phi = phi > 6.0 ? 0.0 : phi + 0.013;
  }
}
BENCHMARK(BM_Frame);

static void BM_ArcLength(benchmark::State& state) {
  double phi = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rose().arc_length(phi));
    phi = phi > 6.0 ? 0.0 : phi + 0.013;
  }
}
BENCHMARK(BM_ArcLength);

static void BM_Step(benchmark::State& state) {
  const Scenario s = rose_scenario(static_cast<int>(state.range(0)));
  std::vector<AgentState> states = initial_states(s);
  for (auto _ : state) {
    states = step(states, s.curve, s.graph, s.control);
    benchmark::DoNotOptimize(states.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Step)->Arg(7)->Arg(32)->Arg(128);

static void BM_CurveReport(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(curve_report(rose(), 12.0));
}
BENCHMARK(BM_CurveReport)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
