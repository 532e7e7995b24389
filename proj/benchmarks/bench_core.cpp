#include <benchmark/benchmark.h>

#include "loosecore/analytic.hpp"
#include "loosecore/cores.hpp"
#include "loosecore/factor_graph.hpp"
#include "loosecore/hypergraph.hpp"

using namespace loosecore;

static void BM_SampleHypergraph(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const auto h = sample_hypergraph(ModelParams::from_degree(3, n, 1.0, seed++));
    benchmark::DoNotOptimize(h.edge_count());
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_SampleHypergraph)->Arg(10000)->Arg(100000);

static void BM_ReducedCoreSync(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  const auto h = sample_hypergraph(ModelParams::from_degree(3, n, 1.0, 1));
  const auto g = FactorGraph::from_hypergraph(h);
  for (auto _ : state) {
    benchmark::DoNotOptimize(reduced_core(g, PeelMode::synchronous));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_ReducedCoreSync)->Arg(10000)->Arg(100000);

static void BM_ReducedCoreQueue(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  const auto h = sample_hypergraph(ModelParams::from_degree(3, n, 1.0, 1));
  const auto g = FactorGraph::from_hypergraph(h);
  for (auto _ : state) {
    benchmark::DoNotOptimize(reduced_core(g, PeelMode::queue));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_ReducedCoreQueue)->Arg(10000)->Arg(100000);

static void BM_LooseCoreDirect(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  const auto h = sample_hypergraph(ModelParams::from_degree(3, n, 1.0, 1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(loose_core_direct(h).edge_count());
  }
}
BENCHMARK(BM_LooseCoreDirect)->Arg(2000)->Arg(20000);

static void BM_FixedPointSolver(benchmark::State& state) {
  double d = 0.6;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_fixed_point(3, d, 1e-12));
    d = d >= 10.0 ? 0.6 : d + 0.1;
  }
}
BENCHMARK(BM_FixedPointSolver);

BENCHMARK_MAIN();
