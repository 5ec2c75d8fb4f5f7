// Serial reference tracer against the OpenMP map on the default 200-point grid.
// Run with OMP_NUM_THREADS set to compare thread counts.

#include <benchmark/benchmark.h>

#include "tmlab/branch.hpp"

namespace {

using namespace tmlab;

ProblemSpec problem_for(int which) {
  return which == 0 ? ProblemSpec::make(EuclideanDisc{1.0}, Nonlinearity::standard())
                    : ProblemSpec::make(HyperbolicBall{1.0}, Nonlinearity::standard());
}

void BM_BranchSerial(benchmark::State& state) {
  const ProblemSpec p = problem_for(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(trace_branch_serial(p, AlphaGrid{}));
  state.SetLabel(p.describe());
}

void BM_BranchParallel(benchmark::State& state) {
  const ProblemSpec p = problem_for(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(trace_branch(p, AlphaGrid{}));
  state.SetLabel(p.describe());
}

void BM_Quantization(benchmark::State& state) {
  const ProblemSpec p = problem_for(0);
  for (auto _ : state) benchmark::DoNotOptimize(quantization_report(p, {4.0, 4.5, 5.0, 5.5, 6.0}));
}

}  // namespace

BENCHMARK(BM_BranchSerial)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BranchParallel)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Quantization)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
