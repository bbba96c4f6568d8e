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
#include <span>
#include <unordered_map>
#include <vector>

#include "indkg/kg.hpp"
#include "indkg/types.hpp"

namespace indkg {

using DistanceMap = std::unordered_map<EntityId, std::uint32_t>;

// Undirected hop distances from `source`, truncated at `k` hops. Every triple
// is walked in both directions except `masked`, which is skipped both ways.
// Throws kIdOutOfBounds for a bad source, kInvalidArgument for k == 0.
DistanceMap bfs_distances(const IndexedGraph& graph, EntityId source, std::uint32_t k,
                          std::optional<Triple> masked = std::nullopt);

struct DistPair {
  std::uint32_t to_head = 0;
  std::uint32_t to_tail = 0;

  friend bool operator==(const DistPair&, const DistPair&) = default;
};

struct LocalEdge {
  std::uint32_t src = 0;
  std::uint32_t dst = 0;
  RelationId rel = 0;

  friend bool operator==(const LocalEdge&, const LocalEdge&) = default;
};

// Enclosing subgraph around a target pair. nodes[0] is the head and nodes[1]
// the tail (a self-loop target h == t collapses to one node). Distances
// that exceed k, or are unreachable, are stored as cap() == k + 1.
struct Subgraph {
  Triple target;
  std::uint32_t k = 0;
  std::vector<EntityId> nodes;
  std::vector<DistPair> dist;
  std::vector<LocalEdge> edges;
  // |N_k(h) ∪ N_k(t)| before the path-length prune; feeds the pruning ratio.
  std::uint64_t union_size = 0;

  std::uint32_t cap() const { return k + 1; }
  std::uint32_t head_local() const { return 0; }
  std::uint32_t tail_local() const { return target.head == target.tail ? 0 : 1; }
  std::size_t num_nodes() const { return nodes.size(); }

  friend bool operator==(const Subgraph&, const Subgraph&) = default;
};

// Keeps h, t and every node i with d_h(i) <= k, d_t(i) <= k and
// d_h(i) + d_t(i) <= k + 1, where distances are measured with the target
// triple masked. Edges are all graph triples between kept nodes, minus the
// target. With max_nodes set, surplus interior nodes are dropped keeping
// the smallest (d_h + d_t, id) first.
Subgraph extract_enclosing_subgraph(const IndexedGraph& graph, const Triple& target,
                                    std::uint32_t k,
                                    std::optional<std::size_t> max_nodes = std::nullopt);

// Extracts one subgraph per target on up to `threads` workers; output is in
// input order regardless of thread count.
std::vector<Subgraph> extract_all(const IndexedGraph& graph, std::span<const Triple> targets,
                                  std::uint32_t k, std::optional<std::size_t> max_nodes,
                                  int threads);

// One-hot distance buckets {0, ..., k, cap} to the head followed by the same
// to the tail: 2 * (k + 2) entries, exactly two of them set.
using NodeLabel = std::vector<std::uint8_t>;

std::size_t label_width(std::uint32_t k);
std::vector<NodeLabel> label_nodes(const Subgraph& sub);

}  // namespace indkg
