#include <benchmark/benchmark.h>

#include <cmath>
#include <memory>

#include "inls/dichotomy.hpp"
#include "inls/evolution.hpp"
#include "inls/groundstate.hpp"
#include "inls/presets.hpp"

using namespace inls;

namespace {

std::shared_ptr<const RadialGrid> bench_grid(int N) {
    return std::make_shared<RadialGrid>(3, N, 40.0);
}

Field bench_field(std::shared_ptr<const RadialGrid> g, int l) {
    auto f = Field::zeros(g, l);
    for (int k = 0; k < l; ++k)
        for (int j = 0; j < g->points; ++j)
            f.comp[k][j] = Complex{std::exp(-g->r[j] * g->r[j]), 0.1};
    return f;
}

void BM_GridConstruction(benchmark::State& state) {
    for (auto _ : state) {
        RadialGrid g(3, static_cast<int>(state.range(0)), 40.0);
        benchmark::DoNotOptimize(g.quad_weight.data());
    }
}
BENCHMARK(BM_GridConstruction)->Arg(1024)->Arg(4096);

void BM_WeightedIntegral(benchmark::State& state) {
    auto g = bench_grid(static_cast<int>(state.range(0)));
    std::vector<double> v(g->points);
    for (int j = 0; j < g->points; ++j) v[j] = std::exp(-g->r[j]);
    for (auto _ : state) {
        double s = weighted_integral(*g, std::span<const double>(v), 0.5);
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_WeightedIntegral)->Arg(4096);

void BM_MetricLaplacian(benchmark::State& state) {
    auto g = bench_grid(static_cast<int>(state.range(0)));
    auto f = bench_field(g, 1);
    std::vector<Complex> out(g->points);
    for (auto _ : state) {
        laplacian_in_metric(*g, std::span<const Complex>(f.comp[0]), std::span<Complex>(out));
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(BM_MetricLaplacian)->Arg(1024)->Arg(4096);

void BM_GroundStateSolve(benchmark::State& state) {
    auto spec = two_wave(3, 0.6);
    auto g = bench_grid(static_cast<int>(state.range(0)));
    GroundStateOptions opts;
    for (auto _ : state) {
        auto gs = solve(spec, 1.0, g, opts);
        benchmark::DoNotOptimize(gs.iterations);
    }
}
BENCHMARK(BM_GroundStateSolve)->Unit(benchmark::kMillisecond)->Arg(1024)->Arg(4096);

void BM_StrangStep(benchmark::State& state) {
    auto spec = two_wave(3, 0.6);
    auto g = bench_grid(static_cast<int>(state.range(0)));
    auto u0 = bench_field(g, 2);
    EvolveOptions opts;
    opts.dt = 1e-4;
    opts.monitor_stride = 1 << 30;
    for (auto _ : state) {
        state.PauseTiming();
        opts.T = 100 * opts.dt;
        state.ResumeTiming();
        auto tr = evolve(spec, u0, opts);
        benchmark::DoNotOptimize(tr.rows.size());
    }
}
BENCHMARK(BM_StrangStep)->Unit(benchmark::kMillisecond)->Arg(1024)->Arg(4096);

void BM_VirialSample(benchmark::State& state) {
    auto spec = two_wave(3, 0.6);
    auto g = bench_grid(4096);
    auto u = bench_field(g, 2);
    auto cut = build_cutoff(*g, 10.0);
    for (auto _ : state) {
        auto s = virial_sample(spec, u, cut);
        benchmark::DoNotOptimize(s.V);
    }
}
BENCHMARK(BM_VirialSample);

void BM_CheckHypotheses(benchmark::State& state) {
    auto spec = three_wave_b(3, 0.5);
    for (auto _ : state) {
        auto rep = check_hypotheses(spec, 200, 7);
        benchmark::DoNotOptimize(rep.h4.residual);
    }
}
BENCHMARK(BM_CheckHypotheses)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
