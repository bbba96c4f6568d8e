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

#pragma once

// Shared fixtures and independent reference implementations ("oracles")
// for the unit and acceptance suites. The oracles deliberately use the
// plainest possible algorithms (walk enumeration, dense matrices, nested
// loops) so they share no code path with the library.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "indkg/autodiff.hpp"
#include "indkg/decoders.hpp"
#include "indkg/kg.hpp"
#include "indkg/layers.hpp"
#include "indkg/model.hpp"
#include "indkg/sampling.hpp"
#include "indkg/subgraph.hpp"

namespace indkg::testing {

struct RandomGraph {
  std::size_t num_entities = 0;
  std::size_t num_relations = 0;
  TripleList triples;
  IndexedGraph graph;
};

// Every ordered pair (u, v), u != v, carries an edge with probability
// `density`, with a uniformly drawn relation.
RandomGraph random_graph(std::mt19937_64& rng, std::size_t num_entities,
                         std::size_t num_relations, double density);

// Enclosing-subgraph node set by exhaustive walk enumeration: v is kept iff
// some walk h ~> v of length a and v ~> t of length b exist with a <= k,
// b <= k and a + b <= k + 1, never traversing the target triple.
std::set<EntityId> oracle_enclosing_nodes(const TripleList& triples, const Triple& target,
                                          std::uint32_t k);

// Dense-matrix references for the relational layers.
ad::Matrix dense_rgcn(std::size_t n, const std::vector<LocalEdge>& edges, const ad::Matrix& h,
                      const LayerParams& p, bool relu);
ad::Matrix dense_rel_att(std::size_t n, const std::vector<LocalEdge>& edges,
                         const ad::Matrix& h, const LayerParams& p, const ad::Matrix& rel_table,
                         RelationId target_rel, bool relu);
// Returns updated node features; `rel_out` receives e_r W_rel.
ad::Matrix dense_rel_comp(std::size_t n, const std::vector<LocalEdge>& edges,
                          const ad::Matrix& h, const ad::Matrix& rel_emb, const LayerParams& p,
                          CompositionOp op, bool relu, ad::Matrix* rel_out);
// O(d^2) circular correlation of two vectors.
std::vector<double> brute_correlation(const std::vector<double>& a, const std::vector<double>& b);
// The whole subgraph scorer, recomputed densely.
double dense_subgraph_score(const ModelParams& params, const LabeledSubgraph& input);

// Random matrix with entries uniform in [-scale, scale].
ad::Matrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols,
                         double scale = 1.0);
// Random connected-ish subgraph over n nodes with `m` edges and relations
// below num_relations; nodes[0] and nodes[1] act as head and tail.
Subgraph random_subgraph(std::mt19937_64& rng, std::size_t n, std::size_t m,
                         std::size_t num_relations, std::uint32_t k);

// Fresh empty directory under the system temp dir.
std::filesystem::path fresh_temp_dir(const std::string& name);

// Writes the TSV layout expected by load_raw_dataset.
void write_raw_dataset(const std::filesystem::path& root, const RawSplits& splits);

// Small inductive dataset with planted relational structure: a train graph
// over `train_entities` and a disjoint inductive graph over `test_entities`,
// both generated by the same rules, for CLI and protocol smoke runs.
RawSplits synthetic_inductive_splits(std::uint64_t seed, std::size_t train_entities,
                                     std::size_t test_entities, std::size_t num_relations,
                                     std::size_t triples_per_entity);

}  // namespace indkg::testing
