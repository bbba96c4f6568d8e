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
#include <unordered_map>
#include <vector>

#include "indkg/autodiff.hpp"
#include "indkg/model.hpp"

namespace indkg {

// mean_i max(0, neg_i - pos_i + gamma); kLengthMismatch on unequal lengths.
double margin_loss(std::span<const double> pos, std::span<const double> neg, double gamma);
// Tape version over (m x 1) score columns.
ad::Var margin_loss(ad::Var pos, ad::Var neg, double gamma);

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// First and second moment buffers of one tensor.
struct AdamMoments {
  std::vector<double> m;
  std::vector<double> v;
};

// One bias-corrected Adam update at step t >= 1, then the gradient is
// zeroed. The tensor is left untouched and kNonFiniteUpdate is thrown if any
// updated entry would be non-finite.
void adam_step(ad::Tensor& param, AdamMoments& moments, const AdamConfig& config,
               std::uint64_t t);

// Adam over every tensor of a model. After each step RotatE relation phases
// are wrapped back into (-pi, pi].
class Adam {
 public:
  explicit Adam(AdamConfig config) : config_(config) {}

  void step(ModelParams& params);
  std::uint64_t steps() const { return t_; }
  const AdamConfig& config() const { return config_; }

 private:
  AdamConfig config_;
  std::uint64_t t_ = 0;
  std::unordered_map<std::string, AdamMoments> moments_;
};

struct GradCheckOptions {
  double eps = 1e-5;
  // Fraction of each tensor's entries probed (at least one per tensor).
  double sample_frac = 0.05;
  // Denominator floor of the relative error |a - n| / max(|a|, |n|, floor),
  // so entries whose true gradient is ~0 are judged on absolute error.
  double floor = 1e-3;
  std::uint64_t seed = 0;
};

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
  std::string worst;  // "tensor[index]" of the largest error
};

// Loss builder: binds the given tensors on the tape (same order) and returns
// a 1 x 1 loss.
using LossFn = std::function<ad::Var(ad::Tape&, std::span<const ad::Var>)>;

// Compares reverse-mode gradients with central differences
// (f(x + eps) - f(x - eps)) / 2 eps on a random sample of entries.
GradCheckResult gradient_check(std::span<ad::Tensor* const> tensors,
                               std::span<const std::string> names, const LossFn& loss,
                               const GradCheckOptions& options = {});

// Whole-model variant; `loss` receives the model bound as parameters.
GradCheckResult gradient_check(ModelParams& params,
                               const std::function<ad::Var(ad::Tape&, const BoundModel&)>& loss,
                               const GradCheckOptions& options = {});

}  // namespace indkg
