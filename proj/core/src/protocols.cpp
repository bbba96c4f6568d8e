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

#include "indkg/protocols.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <vector>

#include "indkg/error.hpp"
#include "indkg/logging.hpp"
#include "indkg/parallel.hpp"

namespace indkg {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

SampleOptions sample_options(const ProtocolOptions& o, const Scorer& scorer) {
  SampleOptions s;
  s.k = o.k;
  s.max_nodes = o.max_nodes;
  s.filtered = o.filtered;
  s.extract = scorer.needs_subgraphs();
  return s;
}

}  // namespace

double SubgraphModelScorer::score(const Candidate& c) const {
  if (!c.sub) fail(ErrorCode::kInvalidArgument, "subgraph scorer needs extracted candidates");
  return subgraph_score(params_, *c.sub);
}

EntityModelScorer::EntityModelScorer(const ModelParams& params, const IndexedGraph& support)
    : params_(params), embeddings_(support.num_entities(), params.config.dim) {
  if (params.config.family != ModelFamily::kEntity) {
    fail(ErrorCode::kInvalidArgument, "entity scorer needs an entity-encoding model");
  }
  std::vector<bool> has_edge(support.num_entities(), false);
  for (const Triple& t : support.triples()) {
    has_edge[t.head] = true;
    has_edge[t.tail] = true;
  }
  std::vector<EntityId> covered;
  for (EntityId e = 0; e < support.num_entities(); ++e) {
    if (has_edge[e]) covered.push_back(e);
  }
  // Entities the protocol may rank (those of known triples) but that no
  // support triple reaches.
  std::size_t isolated = 0;
  for (EntityId e : support.entities()) isolated += has_edge[e] ? 0 : 1;
  if (isolated > 0) {
    log::warn(std::to_string(isolated) +
              " evaluated entities have no support triples; using zero embeddings");
  }
  if (covered.empty()) return;
  const ad::Matrix emb = init_entity_embeddings(support, params.entity_psi, covered);
  for (std::size_t i = 0; i < covered.size(); ++i) {
    std::copy(emb.row(i).begin(), emb.row(i).end(), embeddings_.row(covered[i]).begin());
  }
}

double EntityModelScorer::score(const Candidate& c) const {
  const Triple& t = c.triple;
  if (t.head >= embeddings_.rows || t.tail >= embeddings_.rows) {
    fail(ErrorCode::kIdOutOfBounds, "entity outside the support graph");
  }
  const ad::Tensor& rel = params_.decoder_rel;
  if (t.rel >= rel.rows()) fail(ErrorCode::kIdOutOfBounds, "relation " + std::to_string(t.rel));
  const std::span<const double> r(rel.data.data() + t.rel * rel.cols(), rel.cols());
  return kge_score(params_.config.decoder, embeddings_.row(t.head), r, embeddings_.row(t.tail));
}

double RandomScorer::score(const Candidate& c) const {
  const std::uint64_t h = splitmix64(seed_ ^ splitmix64(std::hash<Triple>{}(c.triple)));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

std::vector<double> score_candidates(const Scorer& scorer, std::span<const Candidate> candidates,
                                     int threads) {
  std::vector<double> scores(candidates.size());
  parallel_for(candidates.size(), threads,
               [&](std::size_t i) { scores[i] = scorer.score(candidates[i]); });
  return scores;
}

std::vector<RankResult> rank_queries(const IndexedGraph& graph, std::span<const Triple> queries,
                                     const Scorer& scorer, const ProtocolOptions& o) {
  const SampleOptions sopt = sample_options(o, scorer);
  std::vector<RankResult> ranks(2 * queries.size());
  parallel_for(ranks.size(), o.threads, [&](std::size_t i) {
    const Triple& q = queries[i / 2];
    const RankDirection dir = i % 2 == 0 ? RankDirection::kHead : RankDirection::kTail;
    Rng rng = item_rng(o.seed, i);
    const RankingBatch batch = make_ranking_batch(graph, q, dir, o.num_neg, rng, sopt);
    const std::vector<double> scores = score_candidates(scorer, batch.candidates, 1);
    for (double s : scores) {
      if (!std::isfinite(s)) fail(ErrorCode::kNonFiniteValue, "candidate score");
    }
    ranks[i] = RankResult{q, dir, compute_rank(scores, batch.truth_idx), scores.size()};
  });
  return ranks;
}

MetricsReport run_link_prediction(const IndexedGraph& graph, std::span<const Triple> queries,
                                  const Scorer& scorer, const ProtocolOptions& o) {
  const auto start = std::chrono::steady_clock::now();
  if (queries.empty()) fail(ErrorCode::kEmptyInput, "no query triples for link prediction");
  const std::vector<RankResult> results = rank_queries(graph, queries, scorer, o);
  std::vector<double> ranks;
  ranks.reserve(results.size());
  for (const RankResult& r : results) ranks.push_back(r.rank);
  const RankingSummary summary = ranking_metrics(ranks);
  MetricsReport report;
  report.mrr = summary.mrr;
  report.hits = summary.hits;
  report.n_queries = queries.size();
  report.seed = o.seed;
  report.wall_ms = elapsed_ms(start);
  return report;
}

MetricsReport run_triple_classification(const IndexedGraph& graph,
                                        std::span<const Triple> queries, const Scorer& scorer,
                                        const ProtocolOptions& o) {
  const auto start = std::chrono::steady_clock::now();
  const ClassificationBatch batch =
      make_classification_batch(graph, queries, o.seed, sample_options(o, scorer), o.threads);
  const std::vector<double> scores = score_candidates(scorer, batch.items, o.threads);
  for (double s : scores) {
    if (!std::isfinite(s)) fail(ErrorCode::kNonFiniteValue, "candidate score");
  }
  const ClassificationSummary summary = classification_metrics(scores, batch.labels01);
  MetricsReport report;
  report.auc = summary.auc;
  report.auc_pr = summary.auc_pr;
  report.n_classified = batch.items.size();
  report.seed = o.seed;
  report.wall_ms = elapsed_ms(start);
  return report;
}

}  // namespace indkg
