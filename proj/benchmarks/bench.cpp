#include <benchmark/benchmark.h>

#include <cmath>

#include "percolab/graphs.hpp"
#include "percolab/index.hpp"
#include "percolab/percolation.hpp"
#include "percolab/procgen.hpp"
#include "percolab/radii.hpp"

using namespace percolab;

namespace {

PointConfiguration config_of_size(long n) {
    double side = std::sqrt(static_cast<double>(n));
    auto cfg = sample_poisson(1.0, Window::box(2, side), 12345);
    return attach_marks(std::move(cfg), MarkSpec::constant(1.0), 1);
}

void bm_index_build(benchmark::State& state) {
    auto cfg = config_of_size(state.range(0));
    for (auto _ : state) {
        SpatialIndex index(cfg);
        benchmark::DoNotOptimize(index);
    }
    state.SetItemsProcessed(state.iterations() * cfg.size());
}
BENCHMARK(bm_index_build)->Arg(1000)->Arg(10000);

void bm_query_ranked(benchmark::State& state) {
    auto cfg = config_of_size(state.range(0));
    SpatialIndex index(cfg);
    int i = 0;
    for (auto _ : state) {
        auto nn = index.query_ranked(cfg.coords(i), i, 8);
        benchmark::DoNotOptimize(nn);
        i = (i + 1) % cfg.size();
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(bm_query_ranked)->Arg(1000)->Arg(10000)->Arg(100000);

void bm_bknn(benchmark::State& state) {
    auto cfg = config_of_size(state.range(0));
    for (auto _ : state) {
        auto g = build_bknn(cfg, 5);
        benchmark::DoNotOptimize(g);
    }
    state.SetItemsProcessed(state.iterations() * cfg.size());
}
BENCHMARK(bm_bknn)->Arg(1000)->Arg(10000)->Arg(50000);

void bm_gilbert(benchmark::State& state) {
    auto cfg = config_of_size(state.range(0));
    for (auto _ : state) {
        auto g = build_gilbert(cfg, 1.5);
        benchmark::DoNotOptimize(g);
    }
    state.SetItemsProcessed(state.iterations() * cfg.size());
}
BENCHMARK(bm_gilbert)->Arg(1000)->Arg(10000)->Arg(50000);

void bm_sinr(benchmark::State& state) {
    auto cfg = config_of_size(state.range(0));
    SinrParams p{PathLoss::power_law(4.0), 0.5, 0.3, 0.01};
    for (auto _ : state) {
        auto g = build_sinr(cfg, p);
        benchmark::DoNotOptimize(g);
    }
    state.SetItemsProcessed(state.iterations() * cfg.size());
}
BENCHMARK(bm_sinr)->Arg(500)->Arg(2000);

void bm_components(benchmark::State& state) {
    auto cfg = config_of_size(state.range(0));
    auto g = build_bknn(cfg, 5);
    for (auto _ : state) {
        auto rep = components(g);
        benchmark::DoNotOptimize(rep);
    }
    state.SetItemsProcessed(state.iterations() * cfg.size());
}
BENCHMARK(bm_components)->Arg(10000)->Arg(100000);

void bm_gibbs_sweep(benchmark::State& state) {
    auto cfg = config_of_size(state.range(0));
    auto st = make_radii_state(std::move(cfg), 1.0, PriorSpec::exponential(1.0), 7);
    uint64_t sweep = 0;
    for (auto _ : state) {
        st = gibbs_sweep(std::move(st), sweep++);
        benchmark::DoNotOptimize(st.radii);
    }
    state.SetItemsProcessed(state.iterations() * st.config.size());
}
BENCHMARK(bm_gibbs_sweep)->Arg(500)->Arg(2000);

void bm_voronoi(benchmark::State& state) {
    double side = std::sqrt(static_cast<double>(state.range(0)));
    Window w = Window::box(2, side);
    auto gen = sample_poisson(1.0, w, 99);
    for (auto _ : state) {
        auto skel = voronoi_edges(gen, w);
        benchmark::DoNotOptimize(skel);
    }
    state.SetItemsProcessed(state.iterations() * gen.size());
}
BENCHMARK(bm_voronoi)->Arg(500)->Arg(2000);

}  // namespace

BENCHMARK_MAIN();
