#include <benchmark/benchmark.h>

#include <cmath>

#include "transquad/gallery.hpp"
#include "transquad/gauge.hpp"

using namespace transquad;

static void BM_GeometricSum(benchmark::State& state) {
    Family f = gallery::geometric_family(VectorValue::real(1.0));
    SumConfig cfg;
    cfg.tol = 1e-12;
    for (auto _ : state) {
        auto r = family_sum(f, cfg);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_GeometricSum);

static void BM_NestedSum(benchmark::State& state) {
    Family f = gallery::nested_alt_geometric_family(VectorValue::real(1.0));
    SumConfig cfg;
    cfg.tol = 1e-4;
    cfg.layer_budget = 200000;
    for (auto _ : state) {
        auto r = family_sum(f, cfg);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_NestedSum);

static void BM_OscEval(benchmark::State& state) {
    RegulatedMapping g = gallery::osc_base({64, static_cast<int>(state.range(0))});
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(g.eval(t += 1e-4));
        if (t > 1.9) t = 0.0;
    }
}
BENCHMARK(BM_OscEval)->Arg(128)->Arg(512);

static void BM_OscPartition(benchmark::State& state) {
    RegulatedMapping g = gallery::osc_base({8, 96});
    double eps = 1.0 / static_cast<double>(state.range(0));
    for (auto _ : state) {
        OscPartition p = build_partition(g, 0.0, 1.0, eps, 200000);
        benchmark::DoNotOptimize(p);
    }
}
BENCHMARK(BM_OscPartition)->Arg(2)->Arg(4)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_AdaptiveIntegral(benchmark::State& state) {
    RegulatedMapping g = gallery::osc_base({16, static_cast<int>(state.range(0))});
    for (auto _ : state) {
        AdaptiveResult r = integrate_adaptive(g, 0.0, 1.0, 1e-3);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_AdaptiveIntegral)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

static void BM_CousinPartition(benchmark::State& state) {
    StepMapping g = truncate_step_mapping(gallery::step_alt_harmonic(), 12);
    Gauge delta = canonical_step_gauge(g, 1e-4, std::ldexp(1.0, -static_cast<int>(state.range(0))));
    for (auto _ : state) {
        TaggedPartition p = cousin_partition(delta, g.domain_min(), g.domain_sup());
        benchmark::DoNotOptimize(p);
    }
}
BENCHMARK(BM_CousinPartition)->Arg(4)->Arg(8);

BENCHMARK_MAIN();
