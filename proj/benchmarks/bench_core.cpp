#include <benchmark/benchmark.h>

#include "modstab/bloch.hpp"

using namespace modstab;

namespace {

TravelingWave whitham_wave(int N) {
  SolverOptions opts;
  opts.N = N;
  return continue_family(make_equation("whitham"), 1.25, 0.0, {0.1}, opts).back();
}

void BM_SolveWave(benchmark::State& state) {
  const auto spec = make_equation("whitham");
  SolverOptions opts;
  opts.N = static_cast<int>(state.range(0));
  const auto seed = whitham_wave(opts.N);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_wave(spec, 1.25, seed.M_target, seed.P_target, seed, opts));
  }
}
BENCHMARK(BM_SolveWave)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_ParameterDerivatives(benchmark::State& state) {
  const auto w = whitham_wave(static_cast<int>(state.range(0)));
  SolverOptions opts;
  opts.N = w.N;
  for (auto _ : state) benchmark::DoNotOptimize(parameter_derivatives(w, opts));
}
BENCHMARK(BM_ParameterDerivatives)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_ModulationMatrix(benchmark::State& state) {
  const auto w = whitham_wave(64);
  const auto p = parameter_derivatives(w);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_modulation_matrix(w, p));
}
BENCHMARK(BM_ModulationMatrix)->Unit(benchmark::kMicrosecond);

void BM_SpectrumNearOrigin(benchmark::State& state) {
  const auto w = whitham_wave(static_cast<int>(state.range(0)));
  const auto op = assemble_bloch(w, 0.01, BlochForm::Exact);
  for (auto _ : state) benchmark::DoNotOptimize(spectrum_near_origin(op));
}
BENCHMARK(BM_SpectrumNearOrigin)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_BranchSlopes(benchmark::State& state) {
  const auto w = whitham_wave(64);
  const auto p = parameter_derivatives(w);
  const auto b = build_bases(w, p);
  for (auto _ : state) benchmark::DoNotOptimize(branch_slopes(w, p, b, {}));
}
BENCHMARK(BM_BranchSlopes)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
