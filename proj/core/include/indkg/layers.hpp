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
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "indkg/autodiff.hpp"
#include "indkg/subgraph.hpp"

namespace indkg {

enum class LayerKind { kRgcn, kAttention, kComposition };
enum class CompositionOp { kSub, kMult, kCorr };

LayerKind parse_layer_kind(std::string_view s);
std::string_view to_string(LayerKind k);
CompositionOp parse_composition_op(std::string_view s);  // kUnknownCompositionOp
std::string_view to_string(CompositionOp op);

// Relation r owns two weight slots: 2r for messages along the triple
// (src -> dst) and 2r + 1 for the inverse message (dst -> src).
inline std::uint32_t relation_slot(RelationId r, Direction d) {
  return 2 * r + static_cast<std::uint32_t>(d);
}

// Two messages per subgraph edge. norm[m] = 1 / c(dst[m], slot[m]), the
// number of messages reaching dst[m] through the same slot.
struct MessageList {
  std::size_t num_nodes = 0;
  std::vector<std::uint32_t> src;
  std::vector<std::uint32_t> dst;
  std::vector<std::uint32_t> slot;
  std::vector<RelationId> rel;
  std::vector<Direction> dir;
  std::vector<double> norm;

  std::size_t size() const { return src.size(); }
};

MessageList build_messages(std::size_t num_nodes, const std::vector<LocalEdge>& edges);
inline MessageList build_messages(const Subgraph& sub) {
  return build_messages(sub.num_nodes(), sub.edges);
}

// Weights of one relational layer. Which tensors are populated depends on
// the layer kind: basis layers (rgcn, attention) use bases/coeffs/self_weight,
// attention adds `attention`, composition uses the w_* matrices.
struct LayerParams {
  std::vector<ad::Tensor> bases;  // num_bases x (d_in, d_out)
  ad::Tensor coeffs;              // (2 * |R|, num_bases)
  ad::Tensor self_weight;         // (d_in, d_out)
  ad::Tensor attention;           // (2 * d_out + 2 * d_rel)
  ad::Tensor w_fwd;               // (d_in, d_out)
  ad::Tensor w_bwd;
  ad::Tensor w_self;
  ad::Tensor w_rel;               // (d_rel, d_out)

  void for_each_tensor(const std::function<void(const std::string&, ad::Tensor&)>& fn);
};

struct LayerShape {
  LayerKind kind = LayerKind::kRgcn;
  std::size_t d_in = 0;
  std::size_t d_out = 0;
  std::size_t d_rel = 0;
  std::size_t num_relations = 0;
  std::size_t num_bases = 1;
};

// Glorot-uniform weights from `rng`.
LayerParams init_layer(const LayerShape& shape, std::mt19937_64& rng);

// Layer tensors bound as leaves on one tape.
struct BoundLayer {
  std::vector<ad::Var> bases;
  ad::Var coeffs;
  ad::Var self_weight;
  ad::Var attention;
  ad::Var w_fwd;
  ad::Var w_bwd;
  ad::Var w_self;
  ad::Var w_rel;
};

BoundLayer bind_layer(ad::Tape& tape, LayerParams& params);

// H'_i = relu(H_i S + sum_m norm_m * H_src W_slot), W_slot = sum_b coeffs[slot, b] B_b.
ad::Var rgcn_layer(const MessageList& msgs, ad::Var h, const BoundLayer& p,
                   bool apply_relu = true);

// As rgcn_layer with every message scaled by
//   alpha = sigmoid(a . [W h_src ; W h_dst ; e_rel ; e_target]).
// rel_table is (|R|, d_rel).
ad::Var rel_att_layer(const MessageList& msgs, ad::Var h, const BoundLayer& p,
                      ad::Var rel_table, RelationId target_rel, bool apply_relu = true);

// Per-message attention coefficients of rel_att_layer, exposed for tests.
ad::Var attention_coefficients(const MessageList& msgs, ad::Var h, const BoundLayer& p,
                               ad::Var rel_table, RelationId target_rel);

// Composition layer:
//   H'_i = relu(H_i W_self + sum_fwd phi(H_j, e_r) W_fwd + sum_bwd phi(H_j, e_r) W_bwd)
// and e'_r = e_r W_rel. Requires d_rel == d_in.
std::pair<ad::Var, ad::Var> rel_comp_layer(const MessageList& msgs, ad::Var h,
                                           ad::Var rel_emb, const BoundLayer& p,
                                           CompositionOp op, bool apply_relu = true);

ad::Var compose(ad::Var h, ad::Var e, CompositionOp op);

}  // namespace indkg
