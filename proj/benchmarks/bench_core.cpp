#include <benchmark/benchmark.h>

#include <cmath>

#include "quadblockade/lindblad.hpp"
#include "quadblockade/perturbation.hpp"
#include "quadblockade/spectrum.hpp"

using namespace quadblockade;

namespace {

ModelParams blockade_point() {
  ModelParams p;
  p.g0 = 0.8;
  p.gamma_c = 0.1;
  p.omega_drive = 0.01;
  p.gamma_m = 0.001;
  p.delta_c = -dressed_level(p, 1, 0).delta_s;
  return p;
}

void BM_SqueezeElements(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const double xi = 0.25 * std::log(4.2);
  for (auto _ : state) {
    double acc = 0.0;
    for (int m = 0; m < n; ++m)
      for (int k = 0; k < n; ++k) acc += squeeze_matrix_element(m, k, xi);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_SqueezeElements)->Arg(10)->Arg(25)->Arg(50);

void BM_BuildLiouvillian(benchmark::State& state) {
  const ModelParams p = blockade_point();
  const FockSpace space{4, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(build_liouvillian(p, space));
}
BENCHMARK(BM_BuildLiouvillian)->Arg(25)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_SteadyState(benchmark::State& state, SteadyStateMethod method) {
  const auto liouv = build_liouvillian(blockade_point(), FockSpace{4, static_cast<int>(state.range(0))});
  SteadyStateOptions options;
  options.method = method;
  options.retry_truncation = false;
  for (auto _ : state) benchmark::DoNotOptimize(solve_steady_state(liouv, options));
}
BENCHMARK_CAPTURE(BM_SteadyState, direct, SteadyStateMethod::direct)->Arg(25)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SteadyState, krylov, SteadyStateMethod::krylov)->Arg(25)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_AnalyticAmplitudes(benchmark::State& state) {
  const ModelParams p = blockade_point();
  for (auto _ : state) benchmark::DoNotOptimize(g2_analytic(longtime_amplitudes(p)));
}
BENCHMARK(BM_AnalyticAmplitudes)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
