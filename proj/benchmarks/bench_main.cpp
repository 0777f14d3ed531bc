#include <benchmark/benchmark.h>

#include "pfreq/evolution.hpp"
#include "pfreq/frequency.hpp"
#include "pfreq/quadrature.hpp"
#include "pfreq/scenario.hpp"
#include "pfreq/verifiers.hpp"

using namespace pfreq;

static void BM_GaussHermite(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(gauss_hermite(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_GaussHermite)->Arg(16)->Arg(64)->Arg(256);

static void BM_SphereQuadrature(benchmark::State& state) {
  const Background bg = Background::sphere(2);
  for (auto _ : state) benchmark::DoNotOptimize(quadrature(bg, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_SphereQuadrature)->Arg(16)->Arg(32);

static void BM_ExactTrace(benchmark::State& state) {
  const Background bg = Background::plane(2);
  const CoefficientField f = CoefficientField::from_indices(bg, -1.0, random_mixture_entries(bg, {3.0, 8}, 1));
  const TimeGrid grid = TimeGrid::uniform(-1.0, -0.1, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(frequency_trace(evolve_exact(f, grid), 0.0));
}
BENCHMARK(BM_ExactTrace)->Arg(50)->Arg(1000);

static void BM_ForcedRK4(benchmark::State& state) {
  const Background bg = Background::sphere(2);
  const CoefficientField f = CoefficientField::from_indices(bg, -1.0, random_mixture_entries(bg, {3.0, 6}, 2));
  const TimeGrid grid = TimeGrid::uniform(-1.0, -0.01, static_cast<int>(state.range(0)));
  const Forcing forcing{CProfile::constant(0.5), ScalarOnU{}};
  for (auto _ : state) benchmark::DoNotOptimize(evolve_forced(f, grid, forcing));
}
BENCHMARK(BM_ForcedRK4)->Arg(50)->Arg(500);

static void BM_DriftBochnerSphere(benchmark::State& state) {
  const Background bg = Background::sphere(2);
  const CoefficientField f = CoefficientField::from_indices(bg, -0.5, random_mixture_entries(bg, {3.0, 5}, 3));
  const QuadratureRule rule = quadrature(bg, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(drift_bochner_terms(f, rule));
}
BENCHMARK(BM_DriftBochnerSphere)->Arg(16)->Arg(32);

static void BM_WeightedMonotonicity(benchmark::State& state) {
  const Background bg = Background::sphere(2);
  const QuadratureRule rule = quadrature(bg, 16);
  const auto tf = packaged_test_functions(bg).back();
  const TimeGrid grid = TimeGrid::uniform(-1.0, -0.99, 21);
  for (auto _ : state) benchmark::DoNotOptimize(verify_weighted_monotonicity(bg, tf, grid, rule));
}
BENCHMARK(BM_WeightedMonotonicity);

BENCHMARK_MAIN();
