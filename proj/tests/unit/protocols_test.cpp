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

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "expect_error.hpp"
#include "indkg/protocols.hpp"
#include "testing.hpp"

namespace indkg {
namespace {

struct Fixture {
  IndexedGraph graph;
  TripleList queries;
};

// Support ring over 120 entities plus 20 held-out chords as queries; the
// queries are known (filtered) but not adjacency.
Fixture ring_with_queries() {
  Fixture f;
  TripleList support;
  const EntityId n = 120;
  for (EntityId i = 0; i < n; ++i) support.push_back({i, 0, static_cast<EntityId>((i + 1) % n)});
  for (EntityId i = 0; i < 20; ++i) f.queries.push_back({i * 5, 1, i * 5 + 2});
  f.graph = build_graph(support, n, 2, f.queries);
  return f;
}

ProtocolOptions options(std::uint64_t seed = 1) {
  ProtocolOptions o;
  o.k = 2;
  o.num_neg = 50;
  o.seed = seed;
  return o;
}

TEST(LinkPrediction, OracleRanksFirst) {
  const Fixture f = ring_with_queries();
  const OracleScorer oracle(f.queries);
  const MetricsReport r = run_link_prediction(f.graph, f.queries, oracle, options());
  EXPECT_EQ(*r.mrr, 1.0);
  EXPECT_EQ(r.hits.at(1), 1.0);
  EXPECT_EQ(r.n_queries, f.queries.size());
  EXPECT_FALSE(r.auc.has_value());
}

TEST(LinkPrediction, ConstantScorerGetsMiddleRank) {
  const Fixture f = ring_with_queries();
  const ConstantScorer c(0.25);
  const std::vector<RankResult> ranks = rank_queries(f.graph, f.queries, c, options());
  ASSERT_EQ(ranks.size(), 2 * f.queries.size());
  for (const RankResult& r : ranks) {
    EXPECT_EQ(r.num_candidates, 51u);
    EXPECT_EQ(r.rank, 26.0);
  }
  EXPECT_EQ(*run_link_prediction(f.graph, f.queries, c, options()).mrr, 1.0 / 26.0);
}

TEST(LinkPrediction, AntiOracleRanksLast) {
  const Fixture f = ring_with_queries();
  const OracleScorer oracle(f.queries);
  const NegatedScorer anti(oracle);
  const MetricsReport r = run_link_prediction(f.graph, f.queries, anti, options());
  EXPECT_DOUBLE_EQ(*r.mrr, 1.0 / 51.0);
  EXPECT_EQ(r.hits.at(10), 0.0);
}

TEST(LinkPrediction, HeadAndTailAlternate) {
  const Fixture f = ring_with_queries();
  const std::vector<RankResult> ranks =
      rank_queries(f.graph, f.queries, ConstantScorer(), options());
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    EXPECT_EQ(ranks[i].query, f.queries[i / 2]);
    EXPECT_EQ(ranks[i].direction, i % 2 == 0 ? RankDirection::kHead : RankDirection::kTail);
  }
}

TEST(LinkPrediction, ThreadCountDoesNotChangeResults) {
  const Fixture f = ring_with_queries();
  const RandomScorer random(3);
  ProtocolOptions a = options(5), b = options(5);
  b.threads = 4;
  EXPECT_EQ(*run_link_prediction(f.graph, f.queries, random, a).mrr,
            *run_link_prediction(f.graph, f.queries, random, b).mrr);
}

TEST(LinkPrediction, EmptyQueries) {
  const Fixture f = ring_with_queries();
  EXPECT_INDKG_ERROR(run_link_prediction(f.graph, {}, ConstantScorer(), options()),
                     ErrorCode::kEmptyInput);
}

TEST(TripleClassification, OracleAndAntiOracle) {
  const Fixture f = ring_with_queries();
  const OracleScorer oracle(f.queries);
  const MetricsReport good = run_triple_classification(f.graph, f.queries, oracle, options());
  EXPECT_EQ(*good.auc, 1.0);
  EXPECT_EQ(*good.auc_pr, 1.0);
  EXPECT_EQ(good.n_classified, 2 * f.queries.size());
  const NegatedScorer anti(oracle);
  EXPECT_EQ(*run_triple_classification(f.graph, f.queries, anti, options()).auc, 0.0);
  EXPECT_EQ(*run_triple_classification(f.graph, f.queries, ConstantScorer(), options()).auc,
            0.5);
}

TEST(RandomScorer, DeterministicAndInUnitInterval) {
  const RandomScorer a(1), b(1), c(2);
  int differ = 0;
  for (EntityId i = 0; i < 200; ++i) {
    const Candidate cand{{i, 0, i + 1}, std::nullopt};
    const double s = a.score(cand);
    EXPECT_GE(s, 0.0);
    EXPECT_LT(s, 1.0);
    EXPECT_EQ(s, b.score(cand));
    differ += s != c.score(cand);
  }
  EXPECT_GT(differ, 190);
}

TEST(ModelScorers, SubgraphModelProducesFiniteScores) {
  const Fixture f = ring_with_queries();
  ModelConfig c;
  c.k = 2;
  c.dim = 4;
  c.rel_dim = 4;
  c.num_layers = 1;
  c.num_bases = 1;
  c.num_relations = 2;
  const ModelParams p = init_model(c, 1);
  const SubgraphModelScorer scorer(p);
  EXPECT_TRUE(scorer.needs_subgraphs());
  const TripleList few(f.queries.begin(), f.queries.begin() + 3);
  const MetricsReport r = run_link_prediction(f.graph, few, scorer, options());
  EXPECT_GT(*r.mrr, 0.0);
  EXPECT_LE(*r.mrr, 1.0);
}

TEST(ModelScorers, EntityModelProducesFiniteScores) {
  const Fixture f = ring_with_queries();
  ModelConfig c;
  c.family = ModelFamily::kEntity;
  c.decoder.type = DecoderType::kTransE;
  c.dim = 4;
  c.num_relations = 2;
  const ModelParams p = init_model(c, 1);
  const EntityModelScorer scorer(p, f.graph);
  EXPECT_FALSE(scorer.needs_subgraphs());
  const MetricsReport r = run_triple_classification(f.graph, f.queries, scorer, options());
  EXPECT_TRUE(std::isfinite(*r.auc));
}

}  // namespace
}  // namespace indkg
