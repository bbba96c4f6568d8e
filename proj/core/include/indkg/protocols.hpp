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
#include <memory>
#include <optional>
#include <span>
#include <unordered_set>
#include <vector>

#include "indkg/kg.hpp"
#include "indkg/metrics.hpp"
#include "indkg/model.hpp"
#include "indkg/sampling.hpp"

namespace indkg {

// Scores one candidate; higher means more plausible. Implementations must be
// safe to call concurrently.
class Scorer {
 public:
  virtual ~Scorer() = default;
  // Whether candidates must carry an extracted, labelled subgraph.
  virtual bool needs_subgraphs() const { return false; }
  virtual double score(const Candidate& candidate) const = 0;
};

// Subgraph-predicting model: subgraph_score on the candidate's subgraph.
class SubgraphModelScorer final : public Scorer {
 public:
  explicit SubgraphModelScorer(const ModelParams& params) : params_(params) {}
  bool needs_subgraphs() const override { return true; }
  double score(const Candidate& candidate) const override;

 private:
  const ModelParams& params_;
};

// Entity-encoding model: embeddings derived once from `support`'s triples,
// then the KGE decoder. Entities without support triples get a zero vector
// (logged once as a warning).
class EntityModelScorer final : public Scorer {
 public:
  EntityModelScorer(const ModelParams& params, const IndexedGraph& support);
  double score(const Candidate& candidate) const override;

 private:
  const ModelParams& params_;
  ad::Matrix embeddings_;  // one row per entity id
};

class ConstantScorer final : public Scorer {
 public:
  explicit ConstantScorer(double value = 0.0) : value_(value) {}
  double score(const Candidate&) const override { return value_; }

 private:
  double value_;
};

// Uniform [0, 1) score that is a pure function of (seed, triple).
class RandomScorer final : public Scorer {
 public:
  explicit RandomScorer(std::uint64_t seed) : seed_(seed) {}
  double score(const Candidate& candidate) const override;

 private:
  std::uint64_t seed_;
};

// 1 for the given true triples, 0 otherwise.
class OracleScorer final : public Scorer {
 public:
  explicit OracleScorer(std::span<const Triple> truths) : truths_(truths.begin(), truths.end()) {}
  double score(const Candidate& candidate) const override {
    return truths_.contains(candidate.triple) ? 1.0 : 0.0;
  }

 private:
  std::unordered_set<Triple> truths_;
};

class NegatedScorer final : public Scorer {
 public:
  explicit NegatedScorer(const Scorer& inner) : inner_(inner) {}
  bool needs_subgraphs() const override { return inner_.needs_subgraphs(); }
  double score(const Candidate& candidate) const override { return -inner_.score(candidate); }

 private:
  const Scorer& inner_;
};

struct ProtocolOptions {
  std::uint32_t k = 3;
  std::optional<std::size_t> max_nodes;
  std::size_t num_neg = 50;
  bool filtered = true;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct RankResult {
  Triple query;
  RankDirection direction = RankDirection::kTail;
  double rank = 0.0;
  std::size_t num_candidates = 0;
};

std::vector<double> score_candidates(const Scorer& scorer, std::span<const Candidate> candidates,
                                     int threads = 1);

// Head- and tail-direction ranking batches for every query (query i uses
// item_rng(seed, 2i) and item_rng(seed, 2i + 1)); ranks in query order,
// head before tail.
std::vector<RankResult> rank_queries(const IndexedGraph& graph, std::span<const Triple> queries,
                                     const Scorer& scorer, const ProtocolOptions& options);

// Pools both directions' ranks into MRR and Hit@{1,5,10}.
MetricsReport run_link_prediction(const IndexedGraph& graph, std::span<const Triple> queries,
                                  const Scorer& scorer, const ProtocolOptions& options);

// One corruption per query triple; AUC and AUC-PR.
MetricsReport run_triple_classification(const IndexedGraph& graph,
                                        std::span<const Triple> queries, const Scorer& scorer,
                                        const ProtocolOptions& options);

}  // namespace indkg
