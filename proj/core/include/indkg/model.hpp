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
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "indkg/autodiff.hpp"
#include "indkg/decoders.hpp"
#include "indkg/kg.hpp"
#include "indkg/layers.hpp"
#include "indkg/sampling.hpp"

namespace indkg {

// Subgraph-predicting models score an enclosing subgraph; entity-encoding
// models derive entity vectors from incident relations and score triples
// with a KGE decoder.
enum class ModelFamily { kSubgraph, kEntity };

ModelFamily parse_model_family(std::string_view s);
std::string_view to_string(ModelFamily f);

struct ModelConfig {
  ModelFamily family = ModelFamily::kSubgraph;
  LayerKind layer = LayerKind::kAttention;
  CompositionOp comp_op = CompositionOp::kCorr;
  DecoderKind decoder;
  std::uint32_t k = 3;
  std::size_t dim = 32;
  std::size_t rel_dim = 32;
  std::size_t num_layers = 3;
  std::size_t num_bases = 4;
  std::size_t num_relations = 0;
};

struct ModelParams {
  ModelConfig config;
  ad::Tensor input_proj;  // (2(k+2), dim)
  std::vector<LayerParams> layers;
  ad::Tensor rel_emb;      // (|R|, rel_dim)
  ad::Tensor decoder_rel;  // (|R|, decoder width); empty without a decoder
  ad::Tensor readout;      // (3 dim + rel_dim)
  ad::Tensor entity_psi;   // (|R|, 2, dim); entity family only

  // Visits every populated tensor in a fixed order with a stable name.
  void for_each_tensor(const std::function<void(const std::string&, ad::Tensor&)>& fn);
  void for_each_tensor(
      const std::function<void(const std::string&, const ad::Tensor&)>& fn) const;
  void zero_grad();
  std::size_t num_parameters() const;
};

ModelParams init_model(const ModelConfig& config, std::uint64_t seed);

// Model tensors as leaves of one tape: parameters (gradients flow back into
// the ModelParams) or constants (inference only).
struct BoundModel {
  const ModelConfig* config = nullptr;
  ad::Var input_proj;
  std::vector<BoundLayer> layers;
  ad::Var rel_emb;
  ad::Var decoder_rel;
  ad::Var readout;
  ad::Var entity_psi;
};

BoundModel bind_model(ad::Tape& tape, ModelParams& params);
BoundModel bind_model_constant(ad::Tape& tape, const ModelParams& params);

// Input projection of the node labels, the configured relational layers
// (attention layers attend with target_rel = the candidate relation), then
//   score = w . [meanpool(H_L) ; H_L(head) ; H_L(tail) ; e_rel]
// plus the decoder term kge(H_L(head), r, H_L(tail)) when a decoder is set.
ad::Var subgraph_score(ad::Tape& tape, const BoundModel& model, const LabeledSubgraph& input);
double subgraph_score(const ModelParams& params, const LabeledSubgraph& input);

// Averaging plan: entity i's vector is the mean of psi rows
// relation_slot(r, dir) over its incident triples, with dir = kForward when
// the entity is the head and kInverse when it is the tail.
struct Incidence {
  std::size_t num_entities = 0;
  std::vector<std::uint32_t> psi_row;
  std::vector<std::uint32_t> owner;
  std::vector<double> weight;
};

// kIsolatedEntity if some requested entity has no incident triple.
Incidence build_incidence(std::span<const Triple> triples, std::span<const EntityId> entities);

ad::Var entity_embeddings(ad::Var psi, const Incidence& incidence);

// Embeddings for `entities` (row order) from the support graph's triples.
ad::Matrix init_entity_embeddings(const IndexedGraph& support, const ad::Tensor& psi,
                                  std::span<const EntityId> entities);

// Decoder scores for triples whose entities are given as row indices into
// `embeddings`.
ad::Var entity_triple_scores(const BoundModel& model, ad::Var embeddings,
                             std::vector<std::uint32_t> head_rows,
                             std::vector<std::uint32_t> rels,
                             std::vector<std::uint32_t> tail_rows);

}  // namespace indkg
