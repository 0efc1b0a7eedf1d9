#include <benchmark/benchmark.h>

#include <vector>

#include "danopt/dsf.hpp"
#include "danopt/graph.hpp"

using namespace danopt;

namespace {

std::vector<TaggedMessage> unit_payloads(NodeId n) {
  std::vector<TaggedMessage> p(n);
  for (NodeId v = 0; v < n; ++v) p[v] = {v, {1.0}};
  return p;
}

void BM_flood_tree(benchmark::State& state) {
  const auto n = static_cast<NodeId>(state.range(0));
  const auto tree = generate_random_tree(n, 42);
  const auto payloads = unit_payloads(n);
  for (auto _ : state) {
    auto r = run_dsf(tree.graph, payloads);
    benchmark::DoNotOptimize(r.all_complete);
  }
  // one item = one transmission; a tree floods n origins over n-1 edges
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n) *
                          (n - 1));
}
BENCHMARK(BM_flood_tree)->Arg(8)->Arg(32)->Arg(128);

void BM_flood_directed_cycle(benchmark::State& state) {
  const auto n = static_cast<NodeId>(state.range(0));
  Graph g(n, true);
  for (NodeId v = 0; v < n; ++v) g.add_edge(v, (v + 1) % n);
  const auto payloads = unit_payloads(n);
  for (auto _ : state) {
    auto r = run_dsf(g, payloads);
    benchmark::DoNotOptimize(r.all_complete);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n) *
                          (n - 1));
}
BENCHMARK(BM_flood_directed_cycle)->Arg(8)->Arg(32)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
