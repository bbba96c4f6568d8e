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

#include "indkg/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_set>

#include "indkg/error.hpp"
#include "indkg/logging.hpp"
#include "indkg/parallel.hpp"

namespace indkg {
namespace {

constexpr int kCorruptRetries = 1000;
constexpr int kMetaTaskAttempts = 100;

Triple replace_side(Triple t, bool head, EntityId e) {
  if (head) {
    t.head = e;
  } else {
    t.tail = e;
  }
  return t;
}

EntityId draw_entity(std::span<const EntityId> pool, Rng& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  return pool[pick(rng)];
}

// Picks `n` entries of `from` without replacement (partial Fisher-Yates).
std::vector<EntityId> sample_without_replacement(std::vector<EntityId> from, std::size_t n,
                                                 Rng& rng) {
  for (std::size_t i = 0; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, from.size() - 1);
    std::swap(from[i], from[pick(rng)]);
  }
  from.resize(n);
  return from;
}

}  // namespace

Rng item_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

Triple corrupt_triple(const Triple& triple, const IndexedGraph& graph, CorruptMode mode,
                      Rng& rng, bool filtered) {
  const auto pool = graph.entities();
  if (pool.empty()) fail(ErrorCode::kEmptyInput, "graph has no entities to sample from");
  std::bernoulli_distribution coin(0.5);
  for (int attempt = 0; attempt < kCorruptRetries; ++attempt) {
    const bool head = mode == CorruptMode::kHead || (mode == CorruptMode::kBoth && coin(rng));
    const Triple c = replace_side(triple, head, draw_entity(pool, rng));
    if (c == triple) continue;
    if (filtered && graph.contains(c)) continue;
    return c;
  }
  fail(ErrorCode::kExhaustedRetries,
       "no valid corruption after " + std::to_string(kCorruptRetries) + " draws");
}

LabeledSubgraph make_labeled(Subgraph sub) {
  LabeledSubgraph out;
  out.rel = sub.target.rel;
  out.labels = label_nodes(sub);
  out.sub = std::move(sub);
  return out;
}

LabeledSubgraph make_labeled(const IndexedGraph& graph, const Triple& triple, std::uint32_t k,
                             std::optional<std::size_t> max_nodes) {
  return make_labeled(extract_enclosing_subgraph(graph, triple, k, max_nodes));
}

TrainInstance make_train_instance(const IndexedGraph& graph, LabeledSubgraph pos,
                                  std::uint32_t k, const NegativeSpec& spec, Rng& rng,
                                  std::optional<std::size_t> max_nodes) {
  if (spec.num_neg == 0) fail(ErrorCode::kInvalidArgument, "num_neg must be >= 1");
  TrainInstance inst;
  inst.pos_triple = pos.sub.target;
  inst.pos = std::move(pos);
  for (std::size_t i = 0; i < spec.num_neg; ++i) {
    const Triple neg = corrupt_triple(inst.pos_triple, graph, spec.mode, rng, spec.filtered);
    inst.neg_triples.push_back(neg);
    inst.negs.push_back(make_labeled(graph, neg, k, max_nodes));
  }
  return inst;
}

TrainInstance make_train_instance(const IndexedGraph& graph, const Triple& triple,
                                  std::uint32_t k, const NegativeSpec& spec, Rng& rng,
                                  std::optional<std::size_t> max_nodes) {
  return make_train_instance(graph, make_labeled(graph, triple, k, max_nodes), k, spec, rng,
                             max_nodes);
}

RankingBatch make_ranking_batch(const IndexedGraph& graph, const Triple& triple,
                                RankDirection direction, std::size_t num_neg, Rng& rng,
                                const SampleOptions& opts) {
  if (num_neg == 0) fail(ErrorCode::kInvalidArgument, "num_neg must be >= 1");
  const bool head = direction == RankDirection::kHead;
  const EntityId original = head ? triple.head : triple.tail;

  std::vector<EntityId> allowed;
  std::vector<EntityId> distinct;
  for (EntityId e : graph.entities()) {
    if (e == original) continue;
    distinct.push_back(e);
    if (!opts.filtered || !graph.contains(replace_side(triple, head, e))) allowed.push_back(e);
  }

  std::vector<EntityId> chosen;
  if (allowed.size() >= num_neg) {
    chosen = sample_without_replacement(std::move(allowed), num_neg, rng);
  } else {
    if (distinct.empty()) {
      fail(ErrorCode::kExhaustedRetries, "no entity available to corrupt the query triple");
    }
    log::warn("only " + std::to_string(allowed.size()) + " filtered negatives for a ranking " +
              "query (need " + std::to_string(num_neg) + "); using unfiltered candidates");
    if (distinct.size() >= num_neg) {
      chosen = sample_without_replacement(std::move(distinct), num_neg, rng);
    } else {
      for (std::size_t i = 0; i < num_neg; ++i) chosen.push_back(draw_entity(distinct, rng));
    }
  }

  RankingBatch batch;
  batch.direction = direction;
  std::uniform_int_distribution<std::size_t> slot(0, num_neg);
  batch.truth_idx = slot(rng);
  std::vector<Triple> triples;
  triples.reserve(num_neg + 1);
  for (EntityId e : chosen) triples.push_back(replace_side(triple, head, e));
  triples.insert(triples.begin() + static_cast<std::ptrdiff_t>(batch.truth_idx), triple);
  for (const Triple& t : triples) {
    Candidate c{t, std::nullopt};
    if (opts.extract) c.sub = make_labeled(graph, t, opts.k, opts.max_nodes);
    batch.candidates.push_back(std::move(c));
  }
  return batch;
}

ClassificationBatch make_classification_batch(const IndexedGraph& graph,
                                              std::span<const Triple> triples,
                                              std::uint64_t seed, const SampleOptions& opts,
                                              int threads) {
  if (triples.empty()) fail(ErrorCode::kEmptyInput, "classification batch needs triples");
  const std::size_t n = triples.size();
  ClassificationBatch batch;
  batch.num_positive = n;
  batch.items.resize(2 * n);
  batch.labels01.assign(2 * n, 0);
  parallel_for(n, threads, [&](std::size_t i) {
    Rng rng = item_rng(seed, i);
    const Triple neg = corrupt_triple(triples[i], graph, CorruptMode::kBoth, rng, opts.filtered);
    Candidate pos{triples[i], std::nullopt};
    Candidate negc{neg, std::nullopt};
    if (opts.extract) {
      pos.sub = make_labeled(graph, triples[i], opts.k, opts.max_nodes);
      negc.sub = make_labeled(graph, neg, opts.k, opts.max_nodes);
    }
    batch.items[i] = std::move(pos);
    batch.items[n + i] = std::move(negc);
    batch.labels01[i] = 1;
  });
  return batch;
}

MetaTask sample_meta_task(const IndexedGraph& graph, std::size_t region_size,
                          double support_frac, Rng& rng) {
  if (region_size < 2) fail(ErrorCode::kInvalidArgument, "region_size must be >= 2");
  if (!(support_frac > 0.0 && support_frac < 1.0)) {
    fail(ErrorCode::kInvalidArgument, "support_frac must lie in (0, 1)");
  }
  const auto pool = graph.entities();
  if (pool.empty()) fail(ErrorCode::kEmptyInput, "graph has no entities");

  for (int attempt = 0; attempt < kMetaTaskAttempts; ++attempt) {
    // Region: BFS over entities, absorbing each visited entity's incident
    // triples in adjacency order.
    TripleList region;
    std::unordered_set<Triple> taken;
    std::unordered_set<EntityId> visited;
    std::deque<EntityId> frontier;
    const EntityId start = draw_entity(pool, rng);
    frontier.push_back(start);
    visited.insert(start);
    while (!frontier.empty() && region.size() < region_size) {
      const EntityId u = frontier.front();
      frontier.pop_front();
      const auto absorb = [&](const Triple& t, EntityId other) {
        if (region.size() < region_size && taken.insert(t).second) region.push_back(t);
        if (visited.insert(other).second) frontier.push_back(other);
      };
      for (const AdjEdge& e : graph.out_edges(u)) absorb({u, e.rel, e.neighbor}, e.neighbor);
      for (const AdjEdge& e : graph.in_edges(u)) absorb({e.neighbor, e.rel, u}, e.neighbor);
    }
    if (region.size() < region_size) continue;

    TripleList shuffled = region;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const std::size_t n = shuffled.size();
    std::size_t cut = static_cast<std::size_t>(std::llround(support_frac * static_cast<double>(n)));
    cut = std::clamp<std::size_t>(cut, 1, n - 1);
    TripleList support(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(cut));
    TripleList query(shuffled.begin() + static_cast<std::ptrdiff_t>(cut), shuffled.end());

    std::unordered_set<EntityId> covered;
    for (const Triple& t : support) {
      covered.insert(t.head);
      covered.insert(t.tail);
    }
    bool moved = true;
    while (moved) {
      moved = false;
      TripleList keep;
      for (const Triple& t : query) {
        if (covered.contains(t.head) && covered.contains(t.tail)) {
          keep.push_back(t);
        } else {
          support.push_back(t);
          covered.insert(t.head);
          covered.insert(t.tail);
          moved = true;
        }
      }
      query = std::move(keep);
    }
    if (query.empty()) continue;

    MetaTask task;
    task.triples = std::move(region);
    for (const Triple& t : task.triples) {
      task.nodes.push_back(t.head);
      task.nodes.push_back(t.tail);
    }
    std::sort(task.nodes.begin(), task.nodes.end());
    task.nodes.erase(std::unique(task.nodes.begin(), task.nodes.end()), task.nodes.end());
    task.support = std::move(support);
    task.query = std::move(query);
    return task;
  }
  fail(ErrorCode::kExhaustedRetries,
       "no valid meta-task after " + std::to_string(kMetaTaskAttempts) + " attempts");
}

}  // namespace indkg
