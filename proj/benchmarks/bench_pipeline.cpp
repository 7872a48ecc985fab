#include <benchmark/benchmark.h>

#include "mardot/evolution.hpp"
#include "mardot/sweep.hpp"

using namespace mardot;

namespace {

JunctionParams resonance() {
  JunctionParams p;
  set_parameter(p, "g", 0.5);
  p.set_bias(4.0 / 3.0);
  return p;
}

}  // namespace

static void BM_FloquetBasis(benchmark::State& state) {
  const JunctionParams p = resonance();
  SolverSettings s;
  s.k_max = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_floquet_basis(p, s));
}
BENCHMARK(BM_FloquetBasis)->Arg(8)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_GeneratorAssembly(benchmark::State& state) {
  const JunctionParams p = resonance();
  const SolverSettings s;
  const FloquetBasis basis = build_floquet_basis(p, s);
  RateTable rates(p, s);
  assemble_generator(p, basis, rates, s);  // fill the rate memo once
  for (auto _ : state) benchmark::DoNotOptimize(assemble_generator(p, basis, rates, s));
  state.counters["rates"] = static_cast<double>(rates.size());
}
BENCHMARK(BM_GeneratorAssembly)->Unit(benchmark::kMillisecond);

static void BM_FourierSteadyState(benchmark::State& state) {
  const JunctionParams p = resonance();
  const SolverSettings s;
  const PointPipeline pipe = build_pipeline(p, s);
  const int m_max = default_m_max(pipe.generator.support, s.k_max);
  for (auto _ : state)
    benchmark::DoNotOptimize(periodic_steady_state_fourier(pipe.generator.total, p.bias(), m_max, s.samples_per_period));
  state.counters["m_max"] = m_max;
}
BENCHMARK(BM_FourierSteadyState)->Unit(benchmark::kMillisecond);

static void BM_EvolveToSteadyState(benchmark::State& state) {
  const JunctionParams p = resonance();
  const SolverSettings s;
  const PointPipeline pipe = build_pipeline(p, s);
  Matrix4c vacuum = Matrix4c::Zero();
  vacuum(0, 0) = 1.0;
  const EvolveOptions opt = evolve_options(s, p.gamma_ref());
  for (auto _ : state) benchmark::DoNotOptimize(evolve(pipe.generator.total, p.bias(), vacuum, opt));
}
BENCHMARK(BM_EvolveToSteadyState)->Unit(benchmark::kMillisecond)->Iterations(1);

static void BM_SolvePoint(benchmark::State& state) {
  const JunctionParams p = resonance();
  for (auto _ : state) benchmark::DoNotOptimize(solve_point(p, SolverSettings{}, SolverKind::fourier));
}
BENCHMARK(BM_SolvePoint)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
