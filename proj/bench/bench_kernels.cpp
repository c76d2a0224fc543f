// Serial reference path vs OpenMP for the grid kernels.
// Arg 0 runs Exec::serial, arg 1 runs Exec::openmp.

#include <benchmark/benchmark.h>

#include "bhrvt/dist.hpp"
#include "bhrvt/mc.hpp"
#include "bhrvt/rvt.hpp"
#include "bhrvt/stats.hpp"

namespace {

using namespace bhrvt;

Exec exec_of(const benchmark::State& st) { return st.range(0) ? Exec::openmp : Exec::serial; }

const dist::JointDensity& ex(int k) {
    static const auto d1 = dist::preset("example1");
    static const auto d2 = dist::preset("example2");
    return k == 1 ? d1 : d2;
}

void BM_pdf1_curve(benchmark::State& st) {
    const auto g = rvt::GridSpec::uniform_grid({0.05, 3.0}, 200);
    for (auto _ : st) benchmark::DoNotOptimize(rvt::pdf1_curve(10, ex(static_cast<int>(st.range(1))), g, {}, exec_of(st)));
}

void BM_steady_curve(benchmark::State& st) {
    const auto g = rvt::GridSpec::uniform_grid({0.1, 10.0}, 200);
    for (auto _ : st) benchmark::DoNotOptimize(rvt::steady_curve(ex(1), g, {}, exec_of(st)));
}

void BM_pdf2_surface(benchmark::State& st) {
    const auto g = rvt::GridSpec::uniform_grid({0.05, 2.0}, 40);
    for (auto _ : st) benchmark::DoNotOptimize(rvt::pdf2_surface(1, 2, ex(1), g, {}, exec_of(st)));
}

void BM_covariance(benchmark::State& st) {
    std::vector<Period> periods;
    for (Period n = 0; n <= 10; ++n) periods.push_back(n);
    for (auto _ : st) benchmark::DoNotOptimize(stats::covariance_surface(periods, ex(1), {}, exec_of(st)));
}

void BM_simulate_paths(benchmark::State& st) {
    mc::McConfig cfg;
    cfg.n_samples = 1'000'000;
    for (auto _ : st) benchmark::DoNotOptimize(mc::simulate_paths(ex(2), 20, cfg, std::vector<Period>{20}, exec_of(st)));
}

}  // namespace

BENCHMARK(BM_pdf1_curve)->ArgsProduct({{0, 1}, {1, 2}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_steady_curve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_pdf2_surface)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_covariance)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_simulate_paths)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
