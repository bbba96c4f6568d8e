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

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <unordered_set>

#include <gtest/gtest.h>

#include "expect_error.hpp"
#include "indkg/logging.hpp"
#include "indkg/metrics.hpp"
#include "indkg/sampling.hpp"
#include "testing.hpp"

namespace indkg {
namespace {

// Ring 0 -> 1 -> ... -> n-1 -> 0 under relation 0.
IndexedGraph ring(std::size_t n) {
  TripleList t;
  for (EntityId i = 0; i < n; ++i) t.push_back({i, 0, static_cast<EntityId>((i + 1) % n)});
  return build_graph(t, n, 1);
}

TEST(Corrupt, TwoEntityGraphHasOneOption) {
  const IndexedGraph g = build_graph(TripleList{{0, 0, 1}}, 2, 1);
  Rng rng(1);
  for (int i = 0; i < 20; ++i) {
    EXPECT_EQ(corrupt_triple({0, 0, 1}, g, CorruptMode::kTail, rng, true), (Triple{0, 0, 0}));
  }
}

TEST(Corrupt, SingleEntityGraphExhausts) {
  const IndexedGraph g = build_graph(TripleList{{0, 0, 0}}, 1, 1);
  Rng rng(1);
  EXPECT_INDKG_ERROR(corrupt_triple({0, 0, 0}, g, CorruptMode::kTail, rng, true),
                     ErrorCode::kExhaustedRetries);
}

TEST(Corrupt, TailDrawsAreUniformOverAllowedIds) {
  const IndexedGraph g = ring(100);
  Rng rng(2024);
  std::map<EntityId, double> counts;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    const Triple c = corrupt_triple({0, 0, 1}, g, CorruptMode::kTail, rng, true);
    ASSERT_EQ(c.head, 0u);
    ASSERT_NE(c.tail, 1u);
    ASSERT_FALSE(g.contains(c));
    counts[c.tail] += 1.0;
  }
  const double allowed = 99.0;
  EXPECT_EQ(counts.size(), 99u);
  const double expected = draws / allowed;
  double chi2 = 0.0;
  for (EntityId e = 0; e < 100; ++e) {
    if (e == 1) continue;
    const double o = counts.count(e) ? counts[e] : 0.0;
    chi2 += (o - expected) * (o - expected) / expected;
  }
  // 0.999 quantile of chi-square with 98 degrees of freedom.
  EXPECT_LT(chi2, 147.01);
}

TEST(Corrupt, FilteredNeverHitsKnownTriples) {
  std::mt19937_64 gen(5);
  const auto rg = testing::random_graph(gen, 12, 2, 0.4);
  Rng rng(9);
  for (const Triple& t : rg.triples) {
    for (int i = 0; i < 5; ++i) {
      const Triple c = corrupt_triple(t, rg.graph, CorruptMode::kBoth, rng, true);
      EXPECT_FALSE(rg.graph.contains(c));
      EXPECT_TRUE(c.head == t.head || c.tail == t.tail);
      EXPECT_EQ(c.rel, t.rel);
    }
  }
}

TEST(TrainInstance, OneNegativeDifferentFromPositive) {
  const IndexedGraph g = ring(10);
  Rng rng(3);
  const TrainInstance inst = make_train_instance(g, Triple{0, 0, 1}, 2, NegativeSpec{}, rng);
  ASSERT_EQ(inst.negs.size(), 1u);
  ASSERT_EQ(inst.neg_triples.size(), 1u);
  EXPECT_NE(inst.neg_triples[0], inst.pos_triple);
  EXPECT_EQ(inst.negs[0].sub.target, inst.neg_triples[0]);
  EXPECT_EQ(inst.pos.rel, 0u);
}

TEST(TrainInstance, DisconnectedNegativeIsAccepted) {
  // Two components; the only corruption joins them.
  const IndexedGraph g = build_graph(TripleList{{0, 0, 1}, {2, 0, 3}}, 4, 1);
  Rng rng(4);
  NegativeSpec spec;
  spec.mode = CorruptMode::kTail;
  spec.num_neg = 3;
  const TrainInstance inst = make_train_instance(g, Triple{0, 0, 1}, 2, spec, rng);
  ASSERT_EQ(inst.negs.size(), 3u);
  for (const LabeledSubgraph& n : inst.negs) {
    EXPECT_GE(n.sub.num_nodes(), 1u);
    EXPECT_EQ(n.labels.size(), n.sub.num_nodes());
  }
}

TEST(TrainInstance, SeedDeterminism) {
  std::mt19937_64 gen(6);
  const auto rg = testing::random_graph(gen, 20, 3, 0.15);
  NegativeSpec spec;
  spec.num_neg = 4;
  Rng a(7), b(7);
  const auto x = make_train_instance(rg.graph, rg.triples[0], 2, spec, a);
  const auto y = make_train_instance(rg.graph, rg.triples[0], 2, spec, b);
  EXPECT_EQ(x, y);
}

TEST(Classification, PositivesThenNegatives) {
  const IndexedGraph g = ring(8);
  const TripleList pos{{0, 0, 1}, {1, 0, 2}};
  const ClassificationBatch b = make_classification_batch(g, pos, 11, SampleOptions{});
  ASSERT_EQ(b.items.size(), 4u);
  EXPECT_EQ(b.labels01, (std::vector<std::uint8_t>{1, 1, 0, 0}));
  EXPECT_EQ(b.items[0].triple, pos[0]);
  EXPECT_EQ(b.items[1].triple, pos[1]);
  EXPECT_FALSE(g.contains(b.items[2].triple));
  EXPECT_TRUE(b.items[2].sub.has_value());
}

TEST(Classification, EmptyInput) {
  const IndexedGraph g = ring(4);
  EXPECT_INDKG_ERROR(make_classification_batch(g, {}, 1, SampleOptions{}),
                     ErrorCode::kEmptyInput);
}

TEST(Classification, DeterministicAndThreadIndependent) {
  std::mt19937_64 gen(8);
  const auto rg = testing::random_graph(gen, 25, 3, 0.1);
  const auto a = make_classification_batch(rg.graph, rg.triples, 5, SampleOptions{}, 1);
  const auto b = make_classification_batch(rg.graph, rg.triples, 5, SampleOptions{}, 4);
  EXPECT_EQ(a.items, b.items);
  EXPECT_EQ(a.labels01, b.labels01);
}

TEST(Ranking, FiftyNegativesGiveFiftyOneCandidates) {
  const IndexedGraph g = ring(80);
  Rng rng(12);
  SampleOptions o;
  o.extract = false;
  const RankingBatch b = make_ranking_batch(g, {0, 0, 1}, RankDirection::kTail, 50, rng, o);
  ASSERT_EQ(b.candidates.size(), 51u);
  EXPECT_EQ(b.candidates[b.truth_idx].triple, (Triple{0, 0, 1}));
  std::set<Triple> distinct;
  for (std::size_t i = 0; i < b.candidates.size(); ++i) {
    distinct.insert(b.candidates[i].triple);
    if (i != b.truth_idx) {
      EXPECT_FALSE(g.contains(b.candidates[i].triple));
    }
  }
  EXPECT_EQ(distinct.size(), 51u);
}

TEST(Ranking, TwoEntityGraph) {
  const IndexedGraph g = build_graph(TripleList{{0, 0, 1}}, 2, 1);
  Rng rng(13);
  const RankingBatch b =
      make_ranking_batch(g, {0, 0, 1}, RankDirection::kTail, 1, rng, SampleOptions{});
  EXPECT_EQ(b.candidates.size(), 2u);
}

TEST(Ranking, FallsBackToUnfilteredWithWarning) {
  // Complete tail side: every (0, 0, t) is known, so nothing is filterable.
  TripleList t;
  for (EntityId v = 1; v < 5; ++v) t.push_back({0, 0, v});
  const IndexedGraph g = build_graph(t, 5, 1);
  Rng rng(14);
  SampleOptions o;
  o.extract = false;
  const std::size_t warnings = log::warning_count();
  const RankingBatch b = make_ranking_batch(g, {0, 0, 1}, RankDirection::kTail, 3, rng, o);
  EXPECT_EQ(b.candidates.size(), 4u);
  EXPECT_GT(log::warning_count(), warnings);
}

TEST(Ranking, OracleScorerRanksTruthFirst) {
  const IndexedGraph g = ring(60);
  SampleOptions o;
  o.extract = false;
  for (std::uint64_t s = 0; s < 50; ++s) {
    Rng rng(s);
    const RankingBatch b = make_ranking_batch(g, {3, 0, 4}, RankDirection::kHead, 50, rng, o);
    std::vector<double> scores;
    for (const Candidate& c : b.candidates) scores.push_back(c.triple == Triple{3, 0, 4} ? 1 : 0);
    EXPECT_EQ(compute_rank(scores, b.truth_idx), 1.0);
  }
}

TEST(Ranking, TruthPositionIsUniform) {
  const IndexedGraph g = ring(30);
  SampleOptions o;
  o.extract = false;
  std::vector<double> counts(5, 0.0);
  Rng rng(15);
  const int runs = 5000;
  for (int i = 0; i < runs; ++i) {
    counts[make_ranking_batch(g, {0, 0, 1}, RankDirection::kTail, 4, rng, o).truth_idx] += 1;
  }
  double chi2 = 0.0;
  for (double c : counts) chi2 += (c - runs / 5.0) * (c - runs / 5.0) / (runs / 5.0);
  EXPECT_LT(chi2, 18.47);  // 0.999 quantile, 4 degrees of freedom
}

TEST(MetaTask, TenTripleRegionSplitsEightTwo) {
  // A 10-triple cycle: every entity has two incident triples.
  const IndexedGraph g = ring(10);
  Rng rng(16);
  const MetaTask task = sample_meta_task(g, 10, 0.8, rng);
  EXPECT_EQ(task.triples.size(), 10u);
  // 8/2 before uncovered query triples migrate to support.
  EXPECT_GE(task.support.size(), 8u);
  EXPECT_GE(task.query.size(), 1u);
  EXPECT_EQ(task.support.size() + task.query.size(), 10u);
}

TEST(MetaTask, StarLeafTripleForcedIntoSupport) {
  // Star: centre 0 linked to leaves 1..9; each leaf appears in one triple,
  // so no triple can be a query.
  TripleList t;
  for (EntityId v = 1; v < 10; ++v) t.push_back({0, 0, v});
  // A second spoke layer gives some triples a chance to be queries.
  t.push_back({1, 0, 2});
  t.push_back({2, 0, 3});
  const IndexedGraph g = build_graph(t, 10, 1);
  for (std::uint64_t s = 0; s < 20; ++s) {
    Rng rng(s);
    const MetaTask task = sample_meta_task(g, 11, 0.5, rng);
    std::set<Triple> support(task.support.begin(), task.support.end());
    for (EntityId leaf = 4; leaf < 10; ++leaf) EXPECT_TRUE(support.contains({0, 0, leaf}));
  }
}

TEST(MetaTask, PartitionAndCoverageInvariants) {
  std::mt19937_64 gen(17);
  const auto rg = testing::random_graph(gen, 40, 3, 0.1);
  Rng rng(18);
  for (int i = 0; i < 1000; ++i) {
    const MetaTask task = sample_meta_task(rg.graph, 30, 0.8, rng);
    ASSERT_EQ(task.support.size() + task.query.size(), task.triples.size());
    ASSERT_FALSE(task.query.empty());
    std::set<Triple> sup(task.support.begin(), task.support.end());
    std::unordered_set<EntityId> sup_entities;
    for (const Triple& t : task.support) {
      sup_entities.insert(t.head);
      sup_entities.insert(t.tail);
    }
    for (const Triple& q : task.query) {
      ASSERT_FALSE(sup.contains(q));
      ASSERT_TRUE(sup_entities.contains(q.head) && sup_entities.contains(q.tail));
    }
  }
}

TEST(MetaTask, ExhaustsOnTooSmallGraph) {
  const IndexedGraph g = ring(3);
  Rng rng(19);
  EXPECT_INDKG_ERROR(sample_meta_task(g, 50, 0.8, rng), ErrorCode::kExhaustedRetries);
}

}  // namespace
}  // namespace indkg
