#include "cornergas/conformal.hpp"
#include "cornergas/coulomb.hpp"
#include "cornergas/fekete.hpp"

#include <benchmark/benchmark.h>

using namespace cornergas;

static void BM_MomentsSquare(benchmark::State& state)
{
    const auto map = build_sc_exterior(regular_polygon_corners(4), 1024);
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(moments_interior(map, n).logdet);
}
BENCHMARK(BM_MomentsSquare)->DenseRange(4, 16, 4)->Unit(benchmark::kMillisecond);

static void BM_MomentsExtended(benchmark::State& state)
{
    const auto map = build_joukowski(0.5);
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(moments_interior(map, n, Precision::Extended).logdet);
}
BENCHMARK(BM_MomentsExtended)->DenseRange(8, 32, 8)->Unit(benchmark::kMillisecond);

static void BM_Fekete(benchmark::State& state)
{
    const auto map = build_joukowski(0.3);
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(fekete_optimize(map, n).value);
}
BENCHMARK(BM_Fekete)->RangeMultiplier(2)->Range(16, 64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
