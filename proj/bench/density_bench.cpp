// Compares the serial reference enumeration against the OpenMP kernel on the
// same coefficient boxes (d = 1, growing bound B, full orbit window).

#include <benchmark/benchmark.h>

#include "dynprim/density.hpp"

namespace {

void BM_scan_reference(benchmark::State& state) {
    const long B = state.range(0);
    for (auto _ : state) {
        const dynprim::DensityStats stats = dynprim::density_scan_reference(1, B, 6);
        benchmark::DoNotOptimize(stats.count_o);
    }
    state.counters["pairs"] = static_cast<double>(dynprim::box_size(1, B));
}

void BM_scan_openmp(benchmark::State& state) {
    const long B = state.range(0);
    const int workers = static_cast<int>(state.range(1));
    for (auto _ : state) {
        const dynprim::DensityStats stats = dynprim::density_scan(1, B, 6, workers);
        benchmark::DoNotOptimize(stats.count_o);
    }
    state.counters["pairs"] = static_cast<double>(dynprim::box_size(1, B));
}

}  // namespace

BENCHMARK(BM_scan_reference)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_scan_openmp)
    ->Args({2, 1})
    ->Args({2, 2})
    ->Args({2, 4})
    ->Args({3, 1})
    ->Args({3, 4})
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
