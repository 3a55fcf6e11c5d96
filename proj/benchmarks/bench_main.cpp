#include <benchmark/benchmark.h>

#include <sstream>

#include "thetacurve/completion.hpp"
#include "thetacurve/extremal.hpp"
#include "thetacurve/lift.hpp"
#include "thetacurve/surfaces.hpp"

using namespace thetacurve;

namespace {

const ExtremalSpec kSpec{1.0, 1.5, Family::Cosh};

void BM_CurvatureProfile(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(curvature_profile(kSpec, n));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CurvatureProfile)->Range(1 << 10, 1 << 16);

void BM_Quadrature(benchmark::State& state) {
  const auto p = curvature_profile(kSpec, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(curve_from_quadrature(p));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Quadrature)->Range(1 << 10, 1 << 16);

void BM_TurningAngle(benchmark::State& state) {
  const auto p = curvature_profile(kSpec, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(curve_from_turning_angle(p));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TurningAngle)->Range(1 << 10, 1 << 16);

void BM_Complete(benchmark::State& state) {
  CompletionProblem pr;
  pr.q = {1.0, 0.3};
  pr.theta0 = 1.0;
  pr.theta1 = 0.2;
  pr.a = 2.0;
  pr.nodes = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(complete(pr));
}
BENCHMARK(BM_Complete)->RangeMultiplier(2)->Range(64, 512)->Unit(benchmark::kMillisecond);

void BM_LiftAndLength(benchmark::State& state) {
  const auto c = curve_from_quadrature(kSpec, static_cast<std::size_t>(state.range(0)), default_margin(kSpec));
  for (auto _ : state) {
    const auto l = lift(c);
    benchmark::DoNotOptimize(sr_length(l, 1.0));
  }
}
BENCHMARK(BM_LiftAndLength)->Range(1 << 10, 1 << 16);

void BM_EvolveAndExport(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    const auto s = evolve(kSpec, n, 64, default_margin(kSpec));
    std::ostringstream out;
    export_obj(out, s);
    benchmark::DoNotOptimize(out.str().size());
  }
}
BENCHMARK(BM_EvolveAndExport)->RangeMultiplier(4)->Range(256, 4096)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
