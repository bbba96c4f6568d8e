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

#include "indkg/layers.hpp"

#include <cmath>
#include <map>

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

void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorCode::kShapeMismatch, what);
}

}  // namespace

LayerKind parse_layer_kind(std::string_view s) {
  if (s == "rgcn") return LayerKind::kRgcn;
  if (s == "att" || s == "attention") return LayerKind::kAttention;
  if (s == "comp" || s == "composition") return LayerKind::kComposition;
  fail(ErrorCode::kInvalidArgument, "unknown layer kind '" + std::string(s) + "'");
}

std::string_view to_string(LayerKind k) {
  switch (k) {
    case LayerKind::kRgcn: return "rgcn";
    case LayerKind::kAttention: return "att";
    case LayerKind::kComposition: return "comp";
  }
  return "?";
}

CompositionOp parse_composition_op(std::string_view s) {
  if (s == "sub") return CompositionOp::kSub;
  if (s == "mult") return CompositionOp::kMult;
  if (s == "corr") return CompositionOp::kCorr;
  fail(ErrorCode::kUnknownCompositionOp, std::string(s));
}

std::string_view to_string(CompositionOp op) {
  switch (op) {
    case CompositionOp::kSub: return "sub";
    case CompositionOp::kMult: return "mult";
    case CompositionOp::kCorr: return "corr";
  }
  return "?";
}

MessageList build_messages(std::size_t num_nodes, const std::vector<LocalEdge>& edges) {
  MessageList m;
  m.num_nodes = num_nodes;
  const std::size_t n = 2 * edges.size();
  m.src.reserve(n);
  m.dst.reserve(n);
  m.slot.reserve(n);
  m.rel.reserve(n);
  m.dir.reserve(n);
  const auto push = [&](std::uint32_t s, std::uint32_t d, RelationId r, Direction dir) {
    m.src.push_back(s);
    m.dst.push_back(d);
    m.slot.push_back(relation_slot(r, dir));
    m.rel.push_back(r);
    m.dir.push_back(dir);
  };
  for (const LocalEdge& e : edges) {
    if (e.src >= num_nodes || e.dst >= num_nodes) {
      fail(ErrorCode::kShapeMismatch, "edge endpoint outside node range");
    }
    push(e.src, e.dst, e.rel, Direction::kForward);
    push(e.dst, e.src, e.rel, Direction::kInverse);
  }
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> count;
  for (std::size_t i = 0; i < m.src.size(); ++i) ++count[{m.dst[i], m.slot[i]}];
  m.norm.resize(m.src.size());
  for (std::size_t i = 0; i < m.src.size(); ++i) {
    m.norm[i] = 1.0 / static_cast<double>(count[{m.dst[i], m.slot[i]}]);
  }
  return m;
}

void LayerParams::for_each_tensor(
    const std::function<void(const std::string&, ad::Tensor&)>& fn) {
  for (std::size_t b = 0; b < bases.size(); ++b) fn("basis" + std::to_string(b), bases[b]);
  const std::pair<const char*, ad::Tensor*> named[] = {
      {"coeffs", &coeffs}, {"self_weight", &self_weight}, {"attention", &attention},
      {"w_fwd", &w_fwd},   {"w_bwd", &w_bwd},             {"w_self", &w_self},
      {"w_rel", &w_rel}};
  for (const auto& [name, t] : named) {
    if (!t->empty()) fn(name, *t);
  }
}

LayerParams init_layer(const LayerShape& s, std::mt19937_64& rng) {
  LayerParams p;
  if (s.d_in == 0 || s.d_out == 0) fail(ErrorCode::kInvalidArgument, "layer dims must be > 0");
  const std::size_t slots = 2 * s.num_relations;
  if (s.kind == LayerKind::kComposition) {
    if (s.d_rel != s.d_in) {
      fail(ErrorCode::kShapeMismatch, "composition layer needs d_rel == d_in");
    }
    p.w_fwd = glorot({s.d_in, s.d_out}, s.d_in, s.d_out, rng);
    p.w_bwd = glorot({s.d_in, s.d_out}, s.d_in, s.d_out, rng);
    p.w_self = glorot({s.d_in, s.d_out}, s.d_in, s.d_out, rng);
    p.w_rel = glorot({s.d_rel, s.d_out}, s.d_rel, s.d_out, rng);
    return p;
  }
  if (s.num_bases == 0 || s.num_bases > slots) {
    fail(ErrorCode::kInvalidArgument, "need 1 <= num_bases <= 2|R| (got " +
                                          std::to_string(s.num_bases) + ", 2|R| = " +
                                          std::to_string(slots) + ")");
  }
  for (std::size_t b = 0; b < s.num_bases; ++b) {
    p.bases.push_back(glorot({s.d_in, s.d_out}, s.d_in, s.d_out, rng));
  }
  p.coeffs = glorot({slots, s.num_bases}, s.num_bases, slots, rng);
  p.self_weight = glorot({s.d_in, s.d_out}, s.d_in, s.d_out, rng);
  if (s.kind == LayerKind::kAttention) {
    const std::size_t width = 2 * s.d_out + 2 * s.d_rel;
    p.attention = glorot({width}, width, 1, rng);
  }
  return p;
}

BoundLayer bind_layer(ad::Tape& tape, LayerParams& p) {
  BoundLayer b;
  for (ad::Tensor& t : p.bases) b.bases.push_back(tape.param(t));
  const auto bind = [&tape](ad::Tensor& t) { return t.empty() ? ad::Var{} : tape.param(t); };
  b.coeffs = bind(p.coeffs);
  b.self_weight = bind(p.self_weight);
  b.attention = bind(p.attention);
  b.w_fwd = bind(p.w_fwd);
  b.w_bwd = bind(p.w_bwd);
  b.w_self = bind(p.w_self);
  b.w_rel = bind(p.w_rel);
  return b;
}

namespace {

ad::Var stacked_bases(ad::Var h, const BoundLayer& p) {
  require(!p.bases.empty() && p.coeffs.valid() && p.self_weight.valid(),
          "layer has no basis weights");
  require(h.cols() == p.bases[0].rows(), "node features do not match basis input dim");
  return ad::matmul(h, ad::hconcat(std::span<const ad::Var>(p.bases)));
}

}  // namespace

ad::Var rgcn_layer(const MessageList& msgs, ad::Var h, const BoundLayer& p, bool apply_relu) {
  require(h.rows() == msgs.num_nodes, "feature rows != node count");
  const std::size_t d_out = p.self_weight.cols();
  const ad::Var hb = stacked_bases(h, p);
  const ad::Var m = ad::basis_transform(hb, p.coeffs, msgs.src, msgs.slot, d_out);
  const ad::Var agg = ad::scatter_add_rows(m, msgs.dst, msgs.norm, msgs.num_nodes);
  const ad::Var out = ad::add(ad::matmul(h, p.self_weight), agg);
  return apply_relu ? ad::relu(out) : out;
}

namespace {

struct AttentionParts {
  ad::Var alpha;
  ad::Var m_src;
};

AttentionParts attention_parts(const MessageList& msgs, ad::Var h, const BoundLayer& p,
                               ad::Var rel_table, RelationId target_rel) {
  require(h.rows() == msgs.num_nodes, "feature rows != node count");
  require(p.attention.valid(), "layer has no attention vector");
  require(target_rel < rel_table.rows(), "target relation outside relation table");
  const std::size_t d_out = p.self_weight.cols();
  require(p.attention.rows() == 2 * d_out + 2 * rel_table.cols(),
          "attention vector length != 2*d_out + 2*d_rel");
  const ad::Var hb = stacked_bases(h, p);
  const ad::Var m_src = ad::basis_transform(hb, p.coeffs, msgs.src, msgs.slot, d_out);
  const ad::Var m_dst = ad::basis_transform(hb, p.coeffs, msgs.dst, msgs.slot, d_out);
  const ad::Var e_rel = ad::gather_rows(rel_table, msgs.rel);
  const ad::Var e_tgt =
      ad::gather_rows(rel_table, std::vector<std::uint32_t>(msgs.size(), target_rel));
  const ad::Var feats = ad::hconcat({m_src, m_dst, e_rel, e_tgt});
  return {ad::sigmoid(ad::matmul(feats, p.attention)), m_src};
}

}  // namespace

ad::Var attention_coefficients(const MessageList& msgs, ad::Var h, const BoundLayer& p,
                               ad::Var rel_table, RelationId target_rel) {
  return attention_parts(msgs, h, p, rel_table, target_rel).alpha;
}

ad::Var rel_att_layer(const MessageList& msgs, ad::Var h, const BoundLayer& p,
                      ad::Var rel_table, RelationId target_rel, bool apply_relu) {
  const AttentionParts parts = attention_parts(msgs, h, p, rel_table, target_rel);
  const ad::Var agg = ad::scatter_add_rows(ad::row_scale(parts.m_src, parts.alpha), msgs.dst,
                                           msgs.norm, msgs.num_nodes);
  const ad::Var out = ad::add(ad::matmul(h, p.self_weight), agg);
  return apply_relu ? ad::relu(out) : out;
}

ad::Var compose(ad::Var h, ad::Var e, CompositionOp op) {
  switch (op) {
    case CompositionOp::kSub: return ad::sub(h, e);
    case CompositionOp::kMult: return ad::mul(h, e);
    case CompositionOp::kCorr: return ad::circular_correlation(h, e);
  }
  fail(ErrorCode::kUnknownCompositionOp, "unhandled composition op");
}

std::pair<ad::Var, ad::Var> rel_comp_layer(const MessageList& msgs, ad::Var h,
                                           ad::Var rel_emb, const BoundLayer& p,
                                           CompositionOp op, bool apply_relu) {
  require(p.w_fwd.valid() && p.w_bwd.valid() && p.w_self.valid() && p.w_rel.valid(),
          "layer has no composition weights");
  require(h.rows() == msgs.num_nodes, "feature rows != node count");
  require(rel_emb.cols() == h.cols(), "composition needs d_rel == d_in");
  ad::Var out = ad::matmul(h, p.w_self);
  for (Direction dir : {Direction::kForward, Direction::kInverse}) {
    std::vector<std::uint32_t> src, dst, rel;
    for (std::size_t i = 0; i < msgs.size(); ++i) {
      if (msgs.dir[i] != dir) continue;
      src.push_back(msgs.src[i]);
      dst.push_back(msgs.dst[i]);
      rel.push_back(msgs.rel[i]);
    }
    if (src.empty()) continue;
    const ad::Var phi =
        compose(ad::gather_rows(h, std::move(src)), ad::gather_rows(rel_emb, std::move(rel)), op);
    const ad::Var w = dir == Direction::kForward ? p.w_fwd : p.w_bwd;
    out = ad::add(out, ad::scatter_add_rows(ad::matmul(phi, w), std::move(dst), {},
                                            msgs.num_nodes));
  }
  const ad::Var rel_out = ad::matmul(rel_emb, p.w_rel);
  return {apply_relu ? ad::relu(out) : out, rel_out};
}

}  // namespace indkg
