#include <benchmark/benchmark.h>

#include "coherent/bellman.hpp"
#include "coherent/search.hpp"

using namespace coherent;

namespace {

SearchConfig enumeration() {
    SearchConfig c;
    c.mode = SearchMode::enumerate;
    c.n = 2;
    c.atoms = 4;
    c.delta = ratio(3, 4);
    c.mass_grid_denominator = 6;
    return c;
}

SearchConfig restarts() {
    SearchConfig c;
    c.mode = SearchMode::random;
    c.n = 3;
    c.atoms = 6;
    c.delta = ratio(2, 3);
    c.mass_grid_denominator = 16;
    c.seed = 42;
    c.restarts = 256;
    return c;
}

void BM_enumerate_serial(benchmark::State& state) {
    const auto c = enumeration();
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_models_serial(c));
}

void BM_enumerate_parallel(benchmark::State& state) {
    const auto c = enumeration();
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_models(c));
}

void BM_random_serial(benchmark::State& state) {
    const auto c = restarts();
    for (auto _ : state) benchmark::DoNotOptimize(random_search_serial(c));
}

void BM_random_parallel(benchmark::State& state) {
    const auto c = restarts();
    for (auto _ : state) benchmark::DoNotOptimize(random_search(c));
}

void BM_bellman_serial(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(dp_upper_serial(ratio(7, 10), ratio(1, 500), 20));
}

void BM_bellman_parallel(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(dp_upper(ratio(7, 10), ratio(1, 500), 20));
}

}  // namespace

BENCHMARK(BM_enumerate_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_enumerate_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_random_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_random_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_bellman_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_bellman_parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
