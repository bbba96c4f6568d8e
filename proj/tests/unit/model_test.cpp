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
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "expect_error.hpp"
#include "indkg/model.hpp"
#include "indkg/optim.hpp"
#include "testing.hpp"

namespace indkg {
namespace {

ModelConfig small_config(LayerKind layer, DecoderType decoder = DecoderType::kNone) {
  ModelConfig c;
  c.layer = layer;
  c.decoder.type = decoder;
  c.decoder.gamma = 4.0;
  c.k = 2;
  c.dim = 6;
  c.rel_dim = 6;
  c.num_layers = 2;
  c.num_bases = 2;
  c.num_relations = 4;
  return c;
}

LabeledSubgraph random_input(std::mt19937_64& rng, std::size_t n, std::size_t m,
                             std::uint32_t k = 2) {
  LabeledSubgraph in = make_labeled(testing::random_subgraph(rng, n, m, 4, k));
  in.rel = static_cast<RelationId>(rng() % 4);
  return in;
}

// Relabels every node other than head and tail.
LabeledSubgraph permute_interior(const LabeledSubgraph& in, std::mt19937_64& rng) {
  const std::size_t n = in.sub.num_nodes();
  std::vector<std::uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  std::shuffle(perm.begin() + 2, perm.end(), rng);
  LabeledSubgraph out = in;
  for (std::size_t i = 0; i < n; ++i) {
    out.sub.nodes[perm[i]] = in.sub.nodes[i];
    out.sub.dist[perm[i]] = in.sub.dist[i];
    out.labels[perm[i]] = in.labels[i];
  }
  for (LocalEdge& e : out.sub.edges) {
    e.src = perm[e.src];
    e.dst = perm[e.dst];
  }
  std::shuffle(out.sub.edges.begin(), out.sub.edges.end(), rng);
  return out;
}

const LayerKind kAllLayers[] = {LayerKind::kRgcn, LayerKind::kAttention,
                                LayerKind::kComposition};

TEST(SubgraphModel, ZeroReadoutScoresZero) {
  std::mt19937_64 rng(1);
  ModelParams p = init_model(small_config(LayerKind::kAttention), 3);
  p.readout.data.assign(p.readout.size(), 0.0);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(subgraph_score(p, random_input(rng, 5, 8)), 0.0);
}

TEST(SubgraphModel, HeadTailOnlyAndSelfLoopAreDefined) {
  for (LayerKind layer : kAllLayers) {
    const ModelParams p = init_model(small_config(layer, DecoderType::kTransE), 4);
    Subgraph pair;
    pair.target = {10, 1, 11};
    pair.k = 2;
    pair.nodes = {10, 11};
    pair.dist = {{0, 3}, {3, 0}};
    LabeledSubgraph in = make_labeled(pair);
    in.rel = 1;
    EXPECT_TRUE(std::isfinite(subgraph_score(p, in)));

    Subgraph loop;
    loop.target = {10, 1, 10};
    loop.k = 2;
    loop.nodes = {10};
    loop.dist = {{0, 0}};
    LabeledSubgraph self = make_labeled(loop);
    self.rel = 1;
    EXPECT_TRUE(std::isfinite(subgraph_score(p, self)));
  }
}

TEST(SubgraphModel, InteriorPermutationInvariance) {
  std::mt19937_64 rng(5);
  for (LayerKind layer : kAllLayers) {
    const ModelParams p = init_model(small_config(layer, DecoderType::kDistMult), 6);
    for (int trial = 0; trial < 20; ++trial) {
      const LabeledSubgraph in = random_input(rng, 3 + trial % 8, 12);
      const double a = subgraph_score(p, in);
      const double b = subgraph_score(p, permute_interior(in, rng));
      EXPECT_NEAR(a, b, 1e-10 * std::max(1.0, std::fabs(a)));
    }
  }
}

TEST(SubgraphModel, MatchesDenseReference) {
  std::mt19937_64 rng(7);
  for (LayerKind layer : kAllLayers) {
    for (DecoderType dec : {DecoderType::kNone, DecoderType::kTransE, DecoderType::kDistMult,
                            DecoderType::kRotatE}) {
      const ModelParams p = init_model(small_config(layer, dec), 8);
      for (int trial = 0; trial < 5; ++trial) {
        const LabeledSubgraph in = random_input(rng, 2 + trial * 2, 3 + trial * 4);
        EXPECT_NEAR(subgraph_score(p, in), testing::dense_subgraph_score(p, in), 1e-12)
            << to_string(layer) << " " << to_string(dec);
      }
    }
  }
}

TEST(SubgraphModel, RejectsBadInputs) {
  std::mt19937_64 rng(9);
  const ModelParams p = init_model(small_config(LayerKind::kRgcn), 1);
  LabeledSubgraph in = random_input(rng, 4, 5);
  in.rel = 99;
  EXPECT_INDKG_ERROR(subgraph_score(p, in), ErrorCode::kIdOutOfBounds);
  in.rel = 0;
  in.labels[0].push_back(0);
  EXPECT_INDKG_ERROR(subgraph_score(p, in), ErrorCode::kShapeMismatch);
  ModelConfig comp = small_config(LayerKind::kComposition);
  comp.rel_dim = 5;
  EXPECT_INDKG_ERROR(init_model(comp, 1), ErrorCode::kShapeMismatch);
  ModelConfig entity = small_config(LayerKind::kRgcn);
  entity.family = ModelFamily::kEntity;
  EXPECT_INDKG_ERROR(init_model(entity, 1), ErrorCode::kInvalidArgument);
}

TEST(SubgraphModel, InitIsSeedDeterministic) {
  const ModelConfig c = small_config(LayerKind::kAttention, DecoderType::kRotatE);
  const ModelParams a = init_model(c, 11), b = init_model(c, 11), d = init_model(c, 12);
  std::vector<double> va, vb, vd;
  a.for_each_tensor([&](const std::string&, const ad::Tensor& t) {
    va.insert(va.end(), t.data.begin(), t.data.end());
  });
  b.for_each_tensor([&](const std::string&, const ad::Tensor& t) {
    vb.insert(vb.end(), t.data.begin(), t.data.end());
  });
  d.for_each_tensor([&](const std::string&, const ad::Tensor& t) {
    vd.insert(vd.end(), t.data.begin(), t.data.end());
  });
  EXPECT_EQ(va, vb);
  EXPECT_NE(va, vd);
  EXPECT_EQ(va.size(), a.num_parameters());
}

TEST(SubgraphModel, GradientsMatchFiniteDifferences) {
  std::mt19937_64 rng(13);
  for (LayerKind layer : kAllLayers) {
    ModelParams p = init_model(small_config(layer, DecoderType::kTransE), 14);
    const LabeledSubgraph pos = random_input(rng, 10, 18);
    const LabeledSubgraph neg = random_input(rng, 10, 18);
    GradCheckOptions opts;
    opts.sample_frac = 0.3;
    opts.seed = 15;
    const GradCheckResult r = gradient_check(
        p,
        [&](ad::Tape& tape, const BoundModel& m) {
          return margin_loss(subgraph_score(tape, m, pos), subgraph_score(tape, m, neg), 10.0);
        },
        opts);
    EXPECT_GT(r.checked, 0u);
    EXPECT_LE(r.max_rel_error, 1e-4) << to_string(layer) << " " << r.worst;
  }
}

TEST(EntityModel, EmbeddingIsMeanOfIncidentRelationVectors) {
  ModelConfig c = small_config(LayerKind::kRgcn, DecoderType::kTransE);
  c.family = ModelFamily::kEntity;
  c.dim = 2;
  c.num_relations = 2;
  ModelParams p = init_model(c, 1);
  // psi[r][dir] = (10 r + dir, 1)
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t d = 0; d < 2; ++d) {
      p.entity_psi.data[(2 * r + d) * 2] = 10.0 * r + d;
      p.entity_psi.data[(2 * r + d) * 2 + 1] = 1.0;
    }
  }
  const IndexedGraph g = build_graph(TripleList{{0, 0, 1}, {2, 1, 0}}, 3, 2);
  const std::vector<EntityId> ents{0, 1, 2};
  const ad::Matrix emb = init_entity_embeddings(g, p.entity_psi, ents);
  // entity 0: forward r0 (0, 1) and inverse r1 (11, 1)
  EXPECT_EQ(emb(0, 0), 5.5);
  EXPECT_EQ(emb(0, 1), 1.0);
  EXPECT_EQ(emb(1, 0), 1.0);   // inverse r0
  EXPECT_EQ(emb(2, 0), 10.0);  // forward r1
}

TEST(EntityModel, IsolatedEntityIsRejected) {
  const TripleList t{{0, 0, 1}};
  const std::vector<EntityId> ents{0, 1, 2};
  EXPECT_INDKG_ERROR(build_incidence(t, ents), ErrorCode::kIsolatedEntity);
}

TEST(EntityModel, ScoresMatchPlainDecoder) {
  ModelConfig c = small_config(LayerKind::kRgcn, DecoderType::kDistMult);
  c.family = ModelFamily::kEntity;
  const ModelParams p = init_model(c, 2);
  EXPECT_TRUE(p.input_proj.empty());
  const IndexedGraph g = build_graph(TripleList{{0, 0, 1}, {1, 2, 2}, {2, 3, 0}}, 3, 4);
  const std::vector<EntityId> ents{0, 1, 2};
  const ad::Matrix emb = init_entity_embeddings(g, p.entity_psi, ents);
  ad::Tape tape;
  const BoundModel m = bind_model_constant(tape, p);
  const ad::Matrix s =
      entity_triple_scores(m, tape.constant(emb), {0, 1}, {0, 3}, {1, 0}).value();
  const ad::Matrix rel = p.decoder_rel.as_matrix();
  EXPECT_NEAR(s(0, 0), kge_score(c.decoder, emb.row(0), rel.row(0), emb.row(1)), 1e-12);
  EXPECT_NEAR(s(1, 0), kge_score(c.decoder, emb.row(1), rel.row(3), emb.row(0)), 1e-12);
}

}  // namespace
}  // namespace indkg
