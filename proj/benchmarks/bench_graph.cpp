#include <benchmark/benchmark.h>

#include <random>

#include "fixtures.hpp"
#include "trackgraph/graph.hpp"
#include "trackgraph/ptgraph.hpp"
#include "trackgraph/ttgraph.hpp"

using namespace trackgraph;

namespace {

Graph make_bipartite(int n_pub, int n_trk) {
    std::mt19937_64 rng(42);
    return fixtures::random_bipartite(rng, n_pub, n_trk, 12);
}

void BM_Betweenness(benchmark::State& state) {
    Graph g = lcc(make_bipartite(static_cast<int>(state.range(0)), state.range(0) / 8));
    for (auto _ : state) {
        auto bc = betweenness(g, 1);
        benchmark::DoNotOptimize(bc);
    }
    state.SetComplexityN(static_cast<int64_t>(g.node_count()));
}
BENCHMARK(BM_Betweenness)->Arg(256)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond)->Complexity();

void BM_BetweennessThreaded(benchmark::State& state) {
    Graph g = lcc(make_bipartite(1024, 128));
    for (auto _ : state) {
        auto bc = betweenness(g, static_cast<unsigned>(state.range(0)));
        benchmark::DoNotOptimize(bc);
    }
}
BENCHMARK(BM_BetweennessThreaded)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Coreness(benchmark::State& state) {
    Graph g = make_bipartite(static_cast<int>(state.range(0)), state.range(0) / 8);
    for (auto _ : state) {
        auto core = core_numbers(g);
        benchmark::DoNotOptimize(core);
    }
}
BENCHMARK(BM_Coreness)->Arg(1024)->Arg(4096)->Unit(benchmark::kMicrosecond);

void BM_Lcc(benchmark::State& state) {
    std::mt19937_64 rng(7);
    Graph g = fixtures::random_graph(rng, static_cast<int>(state.range(0)), 0.002, false);
    for (auto _ : state) {
        Graph l = lcc(g);
        benchmark::DoNotOptimize(l);
    }
}
BENCHMARK(BM_Lcc)->Arg(1024)->Arg(4096)->Unit(benchmark::kMicrosecond);

void BM_BuildTt(benchmark::State& state) {
    PtGraph pt{make_bipartite(static_cast<int>(state.range(0)), state.range(0) / 8)};
    for (auto _ : state) {
        auto tt = build_tt(pt, 2);
        benchmark::DoNotOptimize(tt);
    }
}
BENCHMARK(BM_BuildTt)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);

}  // namespace
