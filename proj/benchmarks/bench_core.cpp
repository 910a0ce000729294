#include <benchmark/benchmark.h>

#include "fracsemi/engine.hpp"
#include "fracsemi/kernels.hpp"
#include "fracsemi/potential.hpp"
#include "fracsemi/subordinator.hpp"
#include "fracsemi/torus_grid.hpp"

using namespace fracsemi;

static void BM_multiplier_apply_1d(benchmark::State& state) {
    TorusGrid g(1, 40.0, static_cast<int>(state.range(0)));
    Field f = random_field(g, 1);
    auto table = semigroup_multiplier(g, FractionalOrder(0.5), 0.1);
    for (auto _ : state) {
        Field out = apply_multiplier(f, table);
        benchmark::DoNotOptimize(out.values.data());
    }
    state.SetItemsProcessed(state.iterations() * g.point_count());
}
BENCHMARK(BM_multiplier_apply_1d)->Arg(1024)->Arg(4096)->Arg(16384);

static void BM_multiplier_apply_2d(benchmark::State& state) {
    TorusGrid g(2, 20.0, static_cast<int>(state.range(0)));
    Field f = random_field(g, 1);
    auto table = semigroup_multiplier(g, FractionalOrder(0.5), 0.1);
    for (auto _ : state) {
        Field out = apply_multiplier(f, table);
        benchmark::DoNotOptimize(out.values.data());
    }
    state.SetItemsProcessed(state.iterations() * g.point_count());
}
BENCHMARK(BM_multiplier_apply_2d)->Arg(64)->Arg(128)->Arg(256);

static void BM_density_build(benchmark::State& state) {
    const double mu = static_cast<double>(state.range(0)) / 100.0;
    for (auto _ : state) {
        auto d = build_density(mu, 501);
        benchmark::DoNotOptimize(d.mass_defect);
    }
}
BENCHMARK(BM_density_build)->Arg(25)->Arg(50)->Arg(75)->Unit(benchmark::kMillisecond);

static void BM_kernel_profile(benchmark::State& state) {
    TorusGrid g(1, 80.0, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto p = build_profile(0.5, g);
        benchmark::DoNotOptimize(p.values.values.data());
    }
}
BENCHMARK(BM_kernel_profile)->Arg(2048)->Arg(8192)->Unit(benchmark::kMillisecond);

static void BM_dense_propagate(benchmark::State& state) {
    TorusGrid g(1, 20.0, static_cast<int>(state.range(0)));
    Potential V = make_well(g, 1.0, 2.0);
    DenseOperator op(g, V.values, FractionalOrder(0.5));
    Field u0 = random_field(g, 2);
    for (auto _ : state) {
        Field out = op.propagate(u0, 0.5);
        benchmark::DoNotOptimize(out.values.data());
    }
}
BENCHMARK(BM_dense_propagate)->Arg(256)->Arg(1024);

static void BM_splitting_step(benchmark::State& state) {
    TorusGrid g(1, 40.0, static_cast<int>(state.range(0)));
    Potential V = make_bump_array(g, 1.0, 0.5, 5.0);
    Field u0 = random_field(g, 3, 0.02, true);
    EvolutionConfig cfg;
    cfg.engine = EngineKind::splitting;
    cfg.dt = 0.01;
    for (auto _ : state) {
        auto r = evolve(u0, V, FractionalOrder(0.5), 0.1, cfg);
        benchmark::DoNotOptimize(r.final.values.data());
    }
}
BENCHMARK(BM_splitting_step)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
