#include <benchmark/benchmark.h>

#include "eggsim/contact_curve.hpp"
#include "eggsim/oracles/contact_oracle.hpp"

namespace {

const std::vector<double> kRatios{1.0, 1.25, 1.5, 2.0};

void BM_ContactCurveSerial(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(eggsim::contact_curves_serial(kRatios, static_cast<int>(state.range(0))));
  }
}

void BM_ContactCurveParallel(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(eggsim::contact_curves(kRatios, static_cast<int>(state.range(0))));
  }
}

void BM_LowestPointSerial(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(eggsim::oracles::lowest_point_sweep_serial(kRatios, static_cast<int>(state.range(0))));
  }
}

void BM_LowestPointParallel(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(eggsim::oracles::lowest_point_sweep(kRatios, static_cast<int>(state.range(0))));
  }
}

} // namespace

BENCHMARK(BM_ContactCurveSerial)->Arg(181)->Arg(10000);
BENCHMARK(BM_ContactCurveParallel)->Arg(181)->Arg(10000);
BENCHMARK(BM_LowestPointSerial)->Arg(181);
BENCHMARK(BM_LowestPointParallel)->Arg(181);

BENCHMARK_MAIN();
