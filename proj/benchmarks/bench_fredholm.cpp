#include "cornergas/conformal.hpp"
#include "cornergas/fredholm.hpp"
#include "cornergas/grunsky.hpp"

#include <benchmark/benchmark.h>

using namespace cornergas;

namespace {

const GrunskyMatrix& square_matrix()
{
    static const GrunskyMatrix B = [] {
        const auto map = build_sc_exterior(regular_polygon_corners(4), 2560);
        EngineOptions opt;
        opt.rows = 512;
        opt.cols = 2048;
        opt.accuracy = AccuracyMode::None;
        return grunsky_psi_contour(map, 512, opt);
    }();
    return B;
}

}  // namespace

static void BM_LogdetTruncated(benchmark::State& state)
{
    const auto& B = square_matrix();
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(logdet_truncated(B, n));
    state.SetComplexityN(n);
}
BENCHMARK(BM_LogdetTruncated)->RangeMultiplier(2)->Range(64, 512)->Unit(benchmark::kMillisecond)->Complexity();

static void BM_LogdetSvd(benchmark::State& state)
{
    const auto& B = square_matrix();
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(logdet_svd(B, n));
}
BENCHMARK(BM_LogdetSvd)->RangeMultiplier(2)->Range(64, 256)->Unit(benchmark::kMillisecond);

static void BM_EquipotentialEnergies(benchmark::State& state)
{
    const auto& B = square_matrix();
    const auto map = build_sc_exterior(regular_polygon_corners(4), 2560);
    const auto d = dvector(map, B.cols());
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(equipotential_energies(B, d, 1.0 + 8.0 / n, n).pommerenke);
}
BENCHMARK(BM_EquipotentialEnergies)->RangeMultiplier(2)->Range(64, 512)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
