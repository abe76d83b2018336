#include "cornergas/conformal.hpp"
#include "cornergas/grunsky.hpp"

#include <benchmark/benchmark.h>

using namespace cornergas;

static void BM_LogFftJoukowski(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    const auto map = build_joukowski(0.5);
    EngineOptions opt;
    opt.accuracy = AccuracyMode::None;
    for (auto _ : state) benchmark::DoNotOptimize(grunsky_log_fft(map, n, opt).entries.data());
    state.SetComplexityN(n);
}
BENCHMARK(BM_LogFftJoukowski)->RangeMultiplier(2)->Range(32, 512)->Unit(benchmark::kMillisecond);

static void BM_PsiSquare(benchmark::State& state)
{
    const int rows = static_cast<int>(state.range(0));
    const auto map = build_sc_exterior(regular_polygon_corners(4), 5 * rows);
    EngineOptions opt;
    opt.rows = rows;
    opt.cols = 4 * rows;
    opt.accuracy = AccuracyMode::None;
    for (auto _ : state) benchmark::DoNotOptimize(grunsky_psi_contour(map, rows, opt).entries.data());
}
BENCHMARK(BM_PsiSquare)->RangeMultiplier(2)->Range(64, 512)->Unit(benchmark::kMillisecond);

static void BM_PowerSeries(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    const auto map = build_sc_exterior(regular_polygon_corners(4), 4 * n);
    for (auto _ : state) benchmark::DoNotOptimize(grunsky_power_series(map, n).entries.data());
}
BENCHMARK(BM_PowerSeries)->RangeMultiplier(2)->Range(8, 32)->Unit(benchmark::kMillisecond);

static void BM_ScMapBuild(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    const auto corners = balanced_triangle_corners(0.1, 0.4, 0.5);
    for (auto _ : state) benchmark::DoNotOptimize(build_sc_exterior(corners, n).coeffs.data());
}
BENCHMARK(BM_ScMapBuild)->RangeMultiplier(4)->Range(256, 16384)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
