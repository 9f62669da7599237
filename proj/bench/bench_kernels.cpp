// Serial reference vs OpenMP kernels on the workloads the library runs:
// potential sampling, sup distance, and Sturm bisection.

#include <benchmark/benchmark.h>

#include "dwell/asymmetry.hpp"
#include "dwell/groundmap.hpp"
#include "dwell/kernels.hpp"
#include "dwell/spectral.hpp"

namespace {

dwell::Exec exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? dwell::Exec::Serial : dwell::Exec::Parallel;
}

void BM_SamplePotential(benchmark::State& state) {
  const dwell::Potential V = dwell::to_potential(dwell::sech_family_state(0.7, 3.0, 0.1));
  const auto grid = dwell::Grid::make(-40.0, 40.0, 8001);
  for (auto _ : state) {
    auto v = dwell::sample([&V](double x) { return V.generic(x); }, grid, exec_of(state));
    benchmark::DoNotOptimize(v.data());
  }
}
BENCHMARK(BM_SamplePotential)->Arg(0)->Arg(1);

void BM_SupDistance(benchmark::State& state) {
  const dwell::Potential a = dwell::to_potential(dwell::sech_family_state(1.0, 3.0, 0.1));
  const dwell::Potential b = dwell::to_potential(dwell::sech_family_state(1.0, 3.0, 0.9));
  const auto grid = dwell::default_sup_grid(3.0, 1.0);
  for (auto _ : state) {
    auto r = dwell::sup_distance(a, b, grid, exec_of(state));
    benchmark::DoNotOptimize(r.sup_estimate);
  }
}
BENCHMARK(BM_SupDistance)->Arg(0)->Arg(1);

void BM_BisectLowest(benchmark::State& state) {
  const dwell::Potential V = dwell::to_potential(dwell::sech_family_state(1.0, 3.0, 0.5));
  const auto op = dwell::discretize(V, dwell::default_box(3.0, 1.0));
  for (auto _ : state) {
    auto r = dwell::bisect_lowest(op.diag, op.off, 8, 1e-12, 200, exec_of(state));
    benchmark::DoNotOptimize(r.eigenvalues.data());
  }
}
BENCHMARK(BM_BisectLowest)->Arg(0)->Arg(1);

}  // namespace

BENCHMARK_MAIN();
