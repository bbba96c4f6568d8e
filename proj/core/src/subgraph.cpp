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

#include "indkg/subgraph.hpp"

#include <algorithm>
#include <deque>
#include <tuple>

#include "indkg/error.hpp"
#include "indkg/parallel.hpp"

namespace indkg {

DistanceMap bfs_distances(const IndexedGraph& graph, EntityId source, std::uint32_t k,
                          std::optional<Triple> masked) {
  if (source >= graph.num_entities()) {
    fail(ErrorCode::kIdOutOfBounds, "bfs source " + std::to_string(source));
  }
  if (k == 0) fail(ErrorCode::kInvalidArgument, "hop budget must be >= 1");
  DistanceMap dist;
  dist.emplace(source, 0);
  std::deque<EntityId> frontier{source};
  while (!frontier.empty()) {
    const EntityId u = frontier.front();
    frontier.pop_front();
    const std::uint32_t du = dist[u];
    if (du == k) continue;
    const auto visit = [&](EntityId v) {
      if (dist.try_emplace(v, du + 1).second) frontier.push_back(v);
    };
    for (const AdjEdge& e : graph.out_edges(u)) {
      if (masked && masked->head == u && masked->tail == e.neighbor && masked->rel == e.rel) {
        continue;
      }
      visit(e.neighbor);
    }
    for (const AdjEdge& e : graph.in_edges(u)) {
      if (masked && masked->head == e.neighbor && masked->tail == u && masked->rel == e.rel) {
        continue;
      }
      visit(e.neighbor);
    }
  }
  return dist;
}

Subgraph extract_enclosing_subgraph(const IndexedGraph& graph, const Triple& target,
                                    std::uint32_t k, std::optional<std::size_t> max_nodes) {
  const EntityId h = target.head;
  const EntityId t = target.tail;
  if (h >= graph.num_entities() || t >= graph.num_entities()) {
    fail(ErrorCode::kIdOutOfBounds, "target entity outside graph");
  }
  const DistanceMap dh = bfs_distances(graph, h, k, target);
  const DistanceMap dt = bfs_distances(graph, t, k, target);

  Subgraph sub;
  sub.target = target;
  sub.k = k;
  const std::uint32_t cap = sub.cap();
  const auto lookup = [cap](const DistanceMap& m, EntityId e) {
    auto it = m.find(e);
    return it == m.end() ? cap : it->second;
  };

  std::uint64_t union_size = dh.size();
  for (const auto& [e, d] : dt) {
    if (!dh.contains(e)) ++union_size;
  }
  sub.union_size = union_size;

  struct Interior {
    std::uint32_t sum;
    EntityId id;
    DistPair dist;
  };
  std::vector<Interior> interior;
  for (const auto& [e, d_head] : dh) {
    if (e == h || e == t) continue;
    auto it = dt.find(e);
    if (it == dt.end()) continue;
    if (d_head + it->second <= k + 1) interior.push_back({d_head + it->second, e, {d_head, it->second}});
  }
  if (max_nodes && interior.size() + 2 > *max_nodes) {
    const std::size_t keep = *max_nodes > 2 ? *max_nodes - 2 : 0;
    std::sort(interior.begin(), interior.end(), [](const Interior& a, const Interior& b) {
      return std::tie(a.sum, a.id) < std::tie(b.sum, b.id);
    });
    interior.resize(keep);
  }
  std::sort(interior.begin(), interior.end(),
            [](const Interior& a, const Interior& b) { return a.id < b.id; });

  sub.nodes.push_back(h);
  sub.dist.push_back({0, lookup(dt, h)});
  if (t != h) {
    sub.nodes.push_back(t);
    sub.dist.push_back({lookup(dh, t), 0});
  }
  for (const Interior& i : interior) {
    sub.nodes.push_back(i.id);
    sub.dist.push_back(i.dist);
  }

  std::unordered_map<EntityId, std::uint32_t> local;
  local.reserve(sub.nodes.size());
  for (std::uint32_t i = 0; i < sub.nodes.size(); ++i) local.emplace(sub.nodes[i], i);
  for (std::uint32_t i = 0; i < sub.nodes.size(); ++i) {
    const EntityId u = sub.nodes[i];
    for (const AdjEdge& e : graph.out_edges(u)) {
      auto it = local.find(e.neighbor);
      if (it == local.end()) continue;
      if (u == target.head && e.neighbor == target.tail && e.rel == target.rel) continue;
      sub.edges.push_back({i, it->second, e.rel});
    }
  }
  return sub;
}

std::vector<Subgraph> extract_all(const IndexedGraph& graph, std::span<const Triple> targets,
                                  std::uint32_t k, std::optional<std::size_t> max_nodes,
                                  int threads) {
  std::vector<Subgraph> out(targets.size());
  parallel_for(targets.size(), threads, [&](std::size_t i) {
    out[i] = extract_enclosing_subgraph(graph, targets[i], k, max_nodes);
  });
  return out;
}

std::size_t label_width(std::uint32_t k) { return 2 * (static_cast<std::size_t>(k) + 2); }

std::vector<NodeLabel> label_nodes(const Subgraph& sub) {
  const std::size_t half = sub.k + 2;
  std::vector<NodeLabel> labels(sub.nodes.size(), NodeLabel(2 * half, 0));
  for (std::size_t i = 0; i < sub.nodes.size(); ++i) {
    labels[i][std::min(sub.dist[i].to_head, sub.cap())] = 1;
    labels[i][half + std::min(sub.dist[i].to_tail, sub.cap())] = 1;
  }
  return labels;
}

}  // namespace indkg
