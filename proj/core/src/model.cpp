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

#include "indkg/model.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <tuple>
#include <unordered_map>

#include "indkg/error.hpp"

namespace indkg {
namespace {

ad::Tensor glorot(std::vector<std::size_t> shape, std::size_t fan_in, std::size_t fan_out,
                  std::mt19937_64& rng) {
  ad::Tensor t(std::move(shape));
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::uniform_real_distribution<double> u(-limit, limit);
  for (double& x : t.data) x = u(rng);
  return t;
}

template <typename Params, typename Fn>
void visit_tensors(Params& p, Fn&& fn) {
  if (!p.input_proj.empty()) fn("input_proj", p.input_proj);
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    const std::string prefix = "layer" + std::to_string(l) + ".";
    const_cast<LayerParams&>(p.layers[l])
        .for_each_tensor([&](const std::string& name, ad::Tensor& t) { fn(prefix + name, t); });
  }
  if (!p.rel_emb.empty()) fn("rel_emb", p.rel_emb);
  if (!p.decoder_rel.empty()) fn("decoder_rel", p.decoder_rel);
  if (!p.readout.empty()) fn("readout", p.readout);
  if (!p.entity_psi.empty()) fn("entity_psi", p.entity_psi);
}

template <typename BindFn>
BoundModel bind_with(const ModelParams& params, BindFn&& bind) {
  BoundModel b;
  b.config = &params.config;
  b.input_proj = bind(params.input_proj);
  for (const LayerParams& lp : params.layers) {
    BoundLayer bl;
    for (const ad::Tensor& t : lp.bases) bl.bases.push_back(bind(t));
    bl.coeffs = bind(lp.coeffs);
    bl.self_weight = bind(lp.self_weight);
    bl.attention = bind(lp.attention);
    bl.w_fwd = bind(lp.w_fwd);
    bl.w_bwd = bind(lp.w_bwd);
    bl.w_self = bind(lp.w_self);
    bl.w_rel = bind(lp.w_rel);
    b.layers.push_back(std::move(bl));
  }
  b.rel_emb = bind(params.rel_emb);
  b.decoder_rel = bind(params.decoder_rel);
  b.readout = bind(params.readout);
  b.entity_psi = bind(params.entity_psi);
  return b;
}

}  // namespace

ModelFamily parse_model_family(std::string_view s) {
  if (s == "subgraph") return ModelFamily::kSubgraph;
  if (s == "entity") return ModelFamily::kEntity;
  fail(ErrorCode::kInvalidArgument, "unknown model family '" + std::string(s) + "'");
}

std::string_view to_string(ModelFamily f) {
  return f == ModelFamily::kSubgraph ? "subgraph" : "entity";
}

void ModelParams::for_each_tensor(
    const std::function<void(const std::string&, ad::Tensor&)>& fn) {
  visit_tensors(*this, fn);
}

void ModelParams::for_each_tensor(
    const std::function<void(const std::string&, const ad::Tensor&)>& fn) const {
  visit_tensors(*this, fn);
}

void ModelParams::zero_grad() {
  for_each_tensor([](const std::string&, ad::Tensor& t) { t.zero_grad(); });
}

std::size_t ModelParams::num_parameters() const {
  std::size_t n = 0;
  for_each_tensor([&n](const std::string&, const ad::Tensor& t) { n += t.size(); });
  return n;
}

ModelParams init_model(const ModelConfig& c, std::uint64_t seed) {
  if (c.num_relations == 0) fail(ErrorCode::kInvalidArgument, "model needs num_relations > 0");
  if (c.dim == 0) fail(ErrorCode::kInvalidArgument, "model dim must be > 0");
  std::mt19937_64 rng(seed);
  ModelParams p;
  p.config = c;
  const std::size_t nr = c.num_relations;

  if (c.decoder.type != DecoderType::kNone) {
    const std::size_t w = decoder_relation_width(c.decoder, c.dim);
    if (c.decoder.type == DecoderType::kRotatE) {
      p.decoder_rel = ad::Tensor({nr, w});
      std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
      for (double& x : p.decoder_rel.data) x = wrap_phase(phase(rng));
    } else {
      p.decoder_rel = glorot({nr, w}, nr, w, rng);
    }
  }

  if (c.family == ModelFamily::kEntity) {
    if (c.decoder.type == DecoderType::kNone) {
      fail(ErrorCode::kInvalidArgument, "entity-encoding family needs a decoder");
    }
    p.entity_psi = glorot({nr, 2, c.dim}, 2 * nr, c.dim, rng);
    return p;
  }

  if (c.num_layers == 0) fail(ErrorCode::kInvalidArgument, "need at least one layer");
  if (c.layer == LayerKind::kComposition && c.rel_dim != c.dim) {
    fail(ErrorCode::kShapeMismatch, "composition layers need rel_dim == dim");
  }
  const std::size_t label_dim = label_width(c.k);
  p.input_proj = glorot({label_dim, c.dim}, label_dim, c.dim, rng);
  for (std::size_t l = 0; l < c.num_layers; ++l) {
    LayerShape shape;
    shape.kind = c.layer;
    shape.d_in = c.dim;
    shape.d_out = c.dim;
    shape.d_rel = c.rel_dim;
    shape.num_relations = nr;
    shape.num_bases = c.num_bases;
    p.layers.push_back(init_layer(shape, rng));
  }
  p.rel_emb = glorot({nr, c.rel_dim}, nr, c.rel_dim, rng);
  const std::size_t width = 3 * c.dim + c.rel_dim;
  p.readout = glorot({width}, width, 1, rng);
  return p;
}

BoundModel bind_model(ad::Tape& tape, ModelParams& params) {
  return bind_with(params, [&tape](const ad::Tensor& t) {
    return t.empty() ? ad::Var{} : tape.param(const_cast<ad::Tensor&>(t));
  });
}

BoundModel bind_model_constant(ad::Tape& tape, const ModelParams& params) {
  return bind_with(params, [&tape](const ad::Tensor& t) {
    return t.empty() ? ad::Var{} : tape.constant(t.as_matrix());
  });
}

ad::Var subgraph_score(ad::Tape& tape, const BoundModel& model, const LabeledSubgraph& input) {
  const ModelConfig& c = *model.config;
  if (c.family != ModelFamily::kSubgraph) {
    fail(ErrorCode::kInvalidArgument, "subgraph_score on an entity-encoding model");
  }
  const Subgraph& sub = input.sub;
  const std::size_t n = sub.num_nodes();
  const std::size_t width = label_width(c.k);
  if (input.labels.size() != n) fail(ErrorCode::kShapeMismatch, "one label per node required");
  if (input.rel >= c.num_relations) {
    fail(ErrorCode::kIdOutOfBounds, "relation " + std::to_string(input.rel));
  }
  ad::Matrix x(n, width);
  for (std::size_t i = 0; i < n; ++i) {
    if (input.labels[i].size() != width) {
      fail(ErrorCode::kShapeMismatch, "label width " + std::to_string(input.labels[i].size()) +
                                          " != 2(k+2) = " + std::to_string(width));
    }
    for (std::size_t j = 0; j < width; ++j) x(i, j) = input.labels[i][j];
  }
  const MessageList msgs = build_messages(sub);
  ad::Var h = ad::matmul(tape.constant(std::move(x)), model.input_proj);
  ad::Var rel = model.rel_emb;
  for (const BoundLayer& layer : model.layers) {
    switch (c.layer) {
      case LayerKind::kRgcn: h = rgcn_layer(msgs, h, layer); break;
      case LayerKind::kAttention: h = rel_att_layer(msgs, h, layer, model.rel_emb, input.rel); break;
      case LayerKind::kComposition: std::tie(h, rel) = rel_comp_layer(msgs, h, rel, layer, c.comp_op); break;
    }
  }
  const ad::Var head = ad::gather_rows(h, {sub.head_local()});
  const ad::Var tail = ad::gather_rows(h, {sub.tail_local()});
  const ad::Var e_rel = ad::gather_rows(rel, {input.rel});
  const ad::Var z = ad::hconcat({ad::mean_rows(h), head, tail, e_rel});
  ad::Var score = ad::matmul(z, model.readout);
  if (c.decoder.type != DecoderType::kNone) {
    const ad::Var r = ad::gather_rows(model.decoder_rel, {input.rel});
    score = ad::add(score, kge_score(c.decoder, head, r, tail));
  }
  return score;
}

double subgraph_score(const ModelParams& params, const LabeledSubgraph& input) {
  ad::Tape tape;
  const BoundModel model = bind_model_constant(tape, params);
  return subgraph_score(tape, model, input).scalar();
}

Incidence build_incidence(std::span<const Triple> triples, std::span<const EntityId> entities) {
  std::unordered_map<EntityId, std::uint32_t> row_of;
  for (std::uint32_t i = 0; i < entities.size(); ++i) row_of.emplace(entities[i], i);
  Incidence inc;
  inc.num_entities = entities.size();
  std::vector<std::size_t> degree(entities.size(), 0);
  const auto add = [&](EntityId e, RelationId r, Direction d) {
    auto it = row_of.find(e);
    if (it == row_of.end()) return;
    inc.psi_row.push_back(relation_slot(r, d));
    inc.owner.push_back(it->second);
    ++degree[it->second];
  };
  for (const Triple& t : triples) {
    add(t.head, t.rel, Direction::kForward);
    add(t.tail, t.rel, Direction::kInverse);
  }
  for (std::size_t i = 0; i < entities.size(); ++i) {
    if (degree[i] == 0) {
      fail(ErrorCode::kIsolatedEntity, "entity " + std::to_string(entities[i]) +
                                           " has no incident support triple");
    }
  }
  inc.weight.reserve(inc.owner.size());
  for (std::uint32_t o : inc.owner) inc.weight.push_back(1.0 / static_cast<double>(degree[o]));
  return inc;
}

ad::Var entity_embeddings(ad::Var psi, const Incidence& inc) {
  return ad::scatter_add_rows(ad::gather_rows(psi, inc.psi_row), inc.owner, inc.weight,
                              inc.num_entities);
}

ad::Matrix init_entity_embeddings(const IndexedGraph& support, const ad::Tensor& psi,
                                  std::span<const EntityId> entities) {
  const Incidence inc = build_incidence(support.triples(), entities);
  ad::Tape tape;
  return entity_embeddings(tape.constant(psi.as_matrix()), inc).value();
}

ad::Var entity_triple_scores(const BoundModel& model, ad::Var embeddings,
                             std::vector<std::uint32_t> head_rows,
                             std::vector<std::uint32_t> rels,
                             std::vector<std::uint32_t> tail_rows) {
  const ModelConfig& c = *model.config;
  const ad::Var h = ad::gather_rows(embeddings, std::move(head_rows));
  const ad::Var t = ad::gather_rows(embeddings, std::move(tail_rows));
  const ad::Var r = ad::gather_rows(model.decoder_rel, std::move(rels));
  return kge_score(c.decoder, h, r, t);
}

}  // namespace indkg
