// Copyright 2026 The indkg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <random>

#include <benchmark/benchmark.h>

#include "indkg/kg.hpp"
#include "indkg/subgraph.hpp"

namespace {

// Sparse random graph with `avg_degree` outgoing edges per entity.
indkg::TripleList random_triples(std::size_t entities, std::size_t relations,
                                 std::size_t avg_degree, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  indkg::TripleList out;
  for (indkg::EntityId h = 0; h < entities; ++h) {
    for (std::size_t j = 0; j < avg_degree; ++j) {
      out.push_back({h, static_cast<indkg::RelationId>(rng() % relations),
                     static_cast<indkg::EntityId>(rng() % entities)});
    }
  }
  return out;
}

void BM_ExtractEnclosingSubgraph(benchmark::State& state) {
  const auto k = static_cast<std::uint32_t>(state.range(0));
  const indkg::TripleList triples = random_triples(5000, 20, 4, 1);
  const indkg::IndexedGraph graph = indkg::build_graph(triples, 5000, 20);
  std::size_t i = 0;
  std::size_t nodes = 0;
  for (auto _ : state) {
    const indkg::Subgraph s = indkg::extract_enclosing_subgraph(graph, triples[i], k);
    nodes += s.num_nodes();
    i = (i + 1) % triples.size();
  }
  state.counters["nodes/subgraph"] =
      benchmark::Counter(static_cast<double>(nodes), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_ExtractEnclosingSubgraph)->Arg(1)->Arg(2)->Arg(3);

void BM_ExtractAllParallel(benchmark::State& state) {
  const indkg::TripleList triples = random_triples(2000, 10, 4, 2);
  const indkg::IndexedGraph graph = indkg::build_graph(triples, 2000, 10);
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(indkg::extract_all(graph, triples, 2, std::nullopt, threads));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * triples.size()));
}
BENCHMARK(BM_ExtractAllParallel)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
