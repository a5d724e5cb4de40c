// Serial reference loops against the OpenMP paths of the data-parallel kernels.
// Run with CUTPOINT_THREADS to cap the parallel width.

#include <benchmark/benchmark.h>

#include "cutpoint/bifurcation.hpp"
#include "cutpoint/discrete.hpp"
#include "cutpoint/simulation.hpp"

using namespace cutpoint;

namespace {

Execution mode(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::serial() : Execution::parallel();
}

void BM_TraceCurve(benchmark::State& state) {
  const auto& a2 = find_procedure("a2");
  const Execution exec = mode(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(trace_curve(a2, 3.001, 1e6, 4096, exec));
  }
  state.SetItemsProcessed(state.iterations() * 4096);
}

void BM_IntegerScan(benchmark::State& state) {
  const auto& d = find_procedure("dorfman");
  const Execution exec = mode(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(integer_scan(d, 20000, true, exec));
  }
  state.SetItemsProcessed(state.iterations() * 19999);
}

void BM_ExtendedScan(benchmark::State& state) {
  const auto& a2 = find_procedure("a2");
  const Execution exec = mode(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(trace_all_roots(a2, 0.5, 50.0, 256, 0.9, exec));
  }
}

void BM_SimulateA2(benchmark::State& state) {
  const Execution exec = mode(state);
  const SimConfig cfg{200'000, 5, 16384};
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_a2(5, Prevalence(0.1), cfg, exec));
  }
  state.SetItemsProcessed(state.iterations() * 200'000);
}

void BM_SimulateDorfman(benchmark::State& state) {
  const Execution exec = mode(state);
  const SimConfig cfg{500'000, 5, 16384};
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_dorfman(10, Prevalence(0.05), cfg, exec));
  }
  state.SetItemsProcessed(state.iterations() * 500'000);
}

}  // namespace

// Arg 0: serial reference, 1: OpenMP.
BENCHMARK(BM_TraceCurve)->ArgName("omp")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_IntegerScan)->ArgName("omp")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExtendedScan)->ArgName("omp")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulateA2)->ArgName("omp")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulateDorfman)->ArgName("omp")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
