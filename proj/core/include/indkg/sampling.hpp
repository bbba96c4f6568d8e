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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "indkg/kg.hpp"
#include "indkg/subgraph.hpp"

namespace indkg {

using Rng = std::mt19937_64;

// Independent stream for work item `index` under a master seed. Parallel
// batch construction seeds one of these per item so results do not depend
// on scheduling.
Rng item_rng(std::uint64_t seed, std::uint64_t index);

enum class CorruptMode { kHead, kTail, kBoth };

struct NegativeSpec {
  CorruptMode mode = CorruptMode::kBoth;
  std::size_t num_neg = 1;
  bool filtered = true;
};

// Replaces the head or tail with an entity drawn uniformly from
// graph.entities(). The result always differs from the input; when filtered
// it is also absent from the graph's known triples. Gives up with
// kExhaustedRetries after 1000 rejected draws.
Triple corrupt_triple(const Triple& triple, const IndexedGraph& graph, CorruptMode mode,
                      Rng& rng, bool filtered);

struct LabeledSubgraph {
  Subgraph sub;
  std::vector<NodeLabel> labels;
  RelationId rel = 0;

  friend bool operator==(const LabeledSubgraph&, const LabeledSubgraph&) = default;
};

LabeledSubgraph make_labeled(const IndexedGraph& graph, const Triple& triple, std::uint32_t k,
                             std::optional<std::size_t> max_nodes = std::nullopt);
LabeledSubgraph make_labeled(Subgraph sub);

struct TrainInstance {
  Triple pos_triple;
  LabeledSubgraph pos;
  std::vector<Triple> neg_triples;
  std::vector<LabeledSubgraph> negs;

  friend bool operator==(const TrainInstance&, const TrainInstance&) = default;
};

TrainInstance make_train_instance(const IndexedGraph& graph, const Triple& triple,
                                  std::uint32_t k, const NegativeSpec& spec, Rng& rng,
                                  std::optional<std::size_t> max_nodes = std::nullopt);

// Negatives for an already-extracted positive; used by the trainer so the
// positive can come from the subgraph store.
TrainInstance make_train_instance(const IndexedGraph& graph, LabeledSubgraph pos,
                                  std::uint32_t k, const NegativeSpec& spec, Rng& rng,
                                  std::optional<std::size_t> max_nodes = std::nullopt);

// A scored item. `sub` is empty when the batch was built for a scorer that
// does not consume subgraphs.
struct Candidate {
  Triple triple;
  std::optional<LabeledSubgraph> sub;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

struct SampleOptions {
  std::uint32_t k = 3;
  std::optional<std::size_t> max_nodes;
  bool filtered = true;
  bool extract = true;
};

enum class RankDirection { kHead, kTail };

struct RankingBatch {
  RankDirection direction = RankDirection::kTail;
  std::vector<Candidate> candidates;
  std::size_t truth_idx = 0;
};

// 1 truth + num_neg negatives corrupting one side, drawn without replacement
// from distinct filtered candidates; the truth lands at a uniform position.
// With too few filtered candidates it warns and falls back to unfiltered
// ones (with replacement if even those run short).
RankingBatch make_ranking_batch(const IndexedGraph& graph, const Triple& triple,
                                RankDirection direction, std::size_t num_neg, Rng& rng,
                                const SampleOptions& opts);

struct ClassificationBatch {
  std::vector<Candidate> items;
  std::vector<std::uint8_t> labels01;
  std::size_t num_positive = 0;
};

// All positives first, then one negative per positive (head or tail with
// equal probability), negative i drawn from item_rng(seed, i).
ClassificationBatch make_classification_batch(const IndexedGraph& graph,
                                              std::span<const Triple> triples,
                                              std::uint64_t seed, const SampleOptions& opts,
                                              int threads = 1);

struct MetaTask {
  std::vector<EntityId> nodes;
  TripleList triples;
  TripleList support;
  TripleList query;
};

// Grows a BFS region from a uniform random entity until region_size triples
// are collected, splits it at round(support_frac * n) after a shuffle, then
// moves query triples whose entities are missing from support into support.
// Regions that are too small or end with an empty query are resampled, at
// most 100 times (kExhaustedRetries).
MetaTask sample_meta_task(const IndexedGraph& graph, std::size_t region_size,
                          double support_frac, Rng& rng);

}  // namespace indkg
