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

#include "indkg/optim.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "indkg/error.hpp"

namespace indkg {

double margin_loss(std::span<const double> pos, std::span<const double> neg, double gamma) {
  if (pos.size() != neg.size()) {
    fail(ErrorCode::kLengthMismatch, std::to_string(pos.size()) + " positive vs " +
                                         std::to_string(neg.size()) + " negative scores");
  }
  if (pos.empty()) fail(ErrorCode::kEmptyInput, "margin_loss over zero pairs");
  double total = 0.0;
  for (std::size_t i = 0; i < pos.size(); ++i) total += std::max(0.0, neg[i] - pos[i] + gamma);
  return total / static_cast<double>(pos.size());
}

ad::Var margin_loss(ad::Var pos, ad::Var neg, double gamma) {
  if (pos.rows() != neg.rows() || pos.cols() != 1 || neg.cols() != 1) {
    fail(ErrorCode::kLengthMismatch, std::to_string(pos.rows()) + " positive vs " +
                                         std::to_string(neg.rows()) + " negative scores");
  }
  if (pos.rows() == 0) fail(ErrorCode::kEmptyInput, "margin_loss over zero pairs");
  return ad::mean(ad::relu(ad::add_scalar(ad::sub(neg, pos), gamma)));
}

void adam_step(ad::Tensor& param, AdamMoments& mom, const AdamConfig& c, std::uint64_t t) {
  const std::size_t n = param.size();
  if (param.grad.size() != n) param.grad.assign(n, 0.0);
  if (mom.m.size() != n) {
    mom.m.assign(n, 0.0);
    mom.v.assign(n, 0.0);
  }
  const double bc1 = 1.0 - std::pow(c.beta1, static_cast<double>(t));
  const double bc2 = 1.0 - std::pow(c.beta2, static_cast<double>(t));
  std::vector<double> m(n), v(n), next(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double g = param.grad[i];
    m[i] = c.beta1 * mom.m[i] + (1.0 - c.beta1) * g;
    v[i] = c.beta2 * mom.v[i] + (1.0 - c.beta2) * g * g;
    const double m_hat = m[i] / bc1;
    const double v_hat = v[i] / bc2;
    next[i] = param.data[i] - c.lr * m_hat / (std::sqrt(v_hat) + c.eps);
    if (!std::isfinite(next[i])) {
      fail(ErrorCode::kNonFiniteUpdate, "entry " + std::to_string(i) + " at step " +
                                            std::to_string(t));
    }
  }
  param.data = std::move(next);
  mom.m = std::move(m);
  mom.v = std::move(v);
  param.zero_grad();
}

void Adam::step(ModelParams& params) {
  ++t_;
  params.for_each_tensor([this](const std::string& name, ad::Tensor& t) {
    try {
      adam_step(t, moments_[name], config_, t_);
    } catch (const Error& e) {
      fail(e.code(), name + ": " + e.detail());
    }
  });
  if (params.config.decoder.type == DecoderType::kRotatE) {
    for (double& x : params.decoder_rel.data) x = wrap_phase(x);
  }
}

GradCheckResult gradient_check(std::span<ad::Tensor* const> tensors,
                               std::span<const std::string> names, const LossFn& loss,
                               const GradCheckOptions& opt) {
  if (names.size() != tensors.size()) {
    fail(ErrorCode::kLengthMismatch, "one name per tensor required");
  }
  const auto evaluate = [&](bool with_grad) {
    ad::Tape tape;
    std::vector<ad::Var> vars;
    vars.reserve(tensors.size());
    for (ad::Tensor* t : tensors) {
      vars.push_back(with_grad ? tape.param(*t) : tape.constant(t->as_matrix()));
    }
    ad::Var l = loss(tape, vars);
    const double value = l.scalar();
    if (with_grad) tape.backward(l);
    return value;
  };

  for (ad::Tensor* t : tensors) t->zero_grad();
  evaluate(true);

  std::mt19937_64 rng(opt.seed);
  GradCheckResult result;
  for (std::size_t ti = 0; ti < tensors.size(); ++ti) {
    ad::Tensor& t = *tensors[ti];
    if (t.empty()) continue;
    const auto count = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(opt.sample_frac * static_cast<double>(t.size()))));
    std::vector<std::size_t> idx(t.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(std::min(count, idx.size()));
    for (std::size_t i : idx) {
      const double saved = t.data[i];
      t.data[i] = saved + opt.eps;
      const double plus = evaluate(false);
      t.data[i] = saved - opt.eps;
      const double minus = evaluate(false);
      t.data[i] = saved;
      const double numeric = (plus - minus) / (2.0 * opt.eps);
      const double analytic = t.grad[i];
      const double denom = std::max({std::abs(analytic), std::abs(numeric), opt.floor});
      const double rel = std::abs(analytic - numeric) / denom;
      ++result.checked;
      if (result.worst.empty() || rel > result.max_rel_error) {
        result.max_rel_error = rel;
        result.worst = names[ti] + "[" + std::to_string(i) + "]";
      }
    }
  }
  for (ad::Tensor* t : tensors) t->zero_grad();
  return result;
}

GradCheckResult gradient_check(ModelParams& params,
                               const std::function<ad::Var(ad::Tape&, const BoundModel&)>& loss,
                               const GradCheckOptions& options) {
  std::vector<ad::Tensor*> tensors;
  std::vector<std::string> names;
  params.for_each_tensor([&](const std::string& name, ad::Tensor& t) {
    tensors.push_back(&t);
    names.push_back(name);
  });
  // Rebuild a BoundModel whose leaves are the Vars created by the generic
  // checker, in for_each_tensor order.
  const LossFn wrapped = [&](ad::Tape& tape, std::span<const ad::Var> vars) {
    std::size_t next = 0;
    ModelParams& p = params;
    BoundModel b;
    b.config = &p.config;
    const auto take = [&](const ad::Tensor& t) { return t.empty() ? ad::Var{} : vars[next++]; };
    b.input_proj = take(p.input_proj);
    for (LayerParams& lp : p.layers) {
      BoundLayer bl;
      for (const ad::Tensor& t : lp.bases) bl.bases.push_back(take(t));
      bl.coeffs = take(lp.coeffs);
      bl.self_weight = take(lp.self_weight);
      bl.attention = take(lp.attention);
      bl.w_fwd = take(lp.w_fwd);
      bl.w_bwd = take(lp.w_bwd);
      bl.w_self = take(lp.w_self);
      bl.w_rel = take(lp.w_rel);
      b.layers.push_back(std::move(bl));
    }
    b.rel_emb = take(p.rel_emb);
    b.decoder_rel = take(p.decoder_rel);
    b.readout = take(p.readout);
    b.entity_psi = take(p.entity_psi);
    return loss(tape, b);
  };
  return gradient_check(tensors, names, wrapped, options);
}

}  // namespace indkg
