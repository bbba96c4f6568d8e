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
#include "indkg/optim.hpp"

namespace indkg {
namespace {

using ad::Tape;
using ad::Tensor;
using ad::Var;

Tensor scalar_tensor(double v) {
  Tensor t({1, 1});
  t.data = {v};
  return t;
}

TEST(MarginLoss, Examples) {
  EXPECT_EQ(margin_loss(std::vector<double>{1.0}, std::vector<double>{0.0}, 1.0), 0.0);
  EXPECT_EQ(margin_loss(std::vector<double>{0.0}, std::vector<double>{0.0}, 1.0), 1.0);
  EXPECT_EQ(margin_loss(std::vector<double>{0.0, 5.0}, std::vector<double>{2.0, 0.0}, 1.0), 1.5);
  EXPECT_INDKG_ERROR(margin_loss(std::vector<double>{0.0}, std::vector<double>{}, 1.0),
                     ErrorCode::kLengthMismatch);
  EXPECT_INDKG_ERROR(margin_loss(std::vector<double>{}, std::vector<double>{}, 1.0),
                     ErrorCode::kEmptyInput);
}

TEST(MarginLoss, TapeVersionAgrees) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> p(7), q(7);
    for (double& x : p) x = n(rng);
    for (double& x : q) x = n(rng);
    Tape tape;
    const Var vp = tape.constant(ad::Matrix(7, 1, p));
    const Var vq = tape.constant(ad::Matrix(7, 1, q));
    EXPECT_NEAR(margin_loss(vp, vq, 2.0).scalar(), margin_loss(p, q, 2.0), 1e-12);
  }
}

TEST(Adam, FirstStepMovesByLearningRate) {
  for (double g : {-3.0, 0.01, 250.0}) {
    Tensor t = scalar_tensor(1.0);
    t.grad = {g};
    AdamMoments m;
    adam_step(t, m, AdamConfig{0.1, 0.9, 0.999, 1e-8}, 1);
    EXPECT_NEAR(t.data[0] - 1.0, g > 0 ? -0.1 : 0.1, 1e-6);
    EXPECT_EQ(t.grad[0], 0.0);
  }
}

TEST(Adam, SquareGradientIsTwoTheta) {
  Tensor t = scalar_tensor(3.0);
  Tape tape;
  const Var x = tape.param(t);
  tape.backward(ad::sum(ad::square(x)));
  EXPECT_DOUBLE_EQ(t.grad[0], 6.0);
}

TEST(Adam, MinimisesSquare) {
  Tensor t = scalar_tensor(5.0);
  AdamMoments m;
  const AdamConfig c{0.1, 0.9, 0.999, 1e-8};
  for (std::uint64_t step = 1; step <= 500; ++step) {
    t.grad = {2.0 * t.data[0]};
    adam_step(t, m, c, step);
  }
  EXPECT_LT(std::fabs(t.data[0]), 0.05);
}

TEST(Adam, NonFiniteUpdateIsRejected) {
  Tensor t = scalar_tensor(1.0);
  t.grad = {std::nan("")};
  AdamMoments m;
  EXPECT_INDKG_ERROR(adam_step(t, m, AdamConfig{}, 1), ErrorCode::kNonFiniteUpdate);
  EXPECT_EQ(t.data[0], 1.0);
}

TEST(Adam, SmallStepsRarelyIncreaseLoss) {
  // Convex quadratics: a small first step along -sign(g) is a descent step.
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0.0, 1.0);
  int violations = 0;
  const int trials = 500;
  for (int trial = 0; trial < trials; ++trial) {
    Tensor t({6, 1});
    std::vector<double> a(6);
    for (std::size_t i = 0; i < 6; ++i) {
      t.data[i] = n(rng);
      a[i] = 0.1 + std::fabs(n(rng));
    }
    const auto loss = [&](const std::vector<double>& x) {
      double s = 0.0;
      for (std::size_t i = 0; i < 6; ++i) s += a[i] * x[i] * x[i];
      return s;
    };
    const double before = loss(t.data);
    t.grad.resize(6);
    for (std::size_t i = 0; i < 6; ++i) t.grad[i] = 2.0 * a[i] * t.data[i];
    AdamMoments m;
    adam_step(t, m, AdamConfig{1e-3, 0.9, 0.999, 1e-8}, 1);
    if (loss(t.data) > before) ++violations;
  }
  EXPECT_LE(violations, trials / 50);
}

TEST(GradientCheck, DetectsWrongGradient) {
  Tensor t({3, 1});
  t.data = {0.5, -1.0, 2.0};
  std::vector<Tensor*> tensors{&t};
  std::vector<std::string> names{"x"};
  const LossFn good = [](Tape&, std::span<const Var> v) { return ad::sum(ad::square(v[0])); };
  GradCheckOptions opts;
  opts.sample_frac = 1.0;
  EXPECT_LT(gradient_check(tensors, names, good, opts).max_rel_error, 1e-8);
  // A custom op whose backward is off by a factor of two.
  const LossFn bad = [](Tape& tape, std::span<const Var> v) {
    const Var x = v[0];
    ad::Matrix val = x.value();
    for (double& y : val.data) y = y * y;
    const Var sq = tape.record(val, {x}, [x](Tape& tp, const ad::Matrix& g) {
      ad::Matrix& gx = tp.grad(x);
      for (std::size_t i = 0; i < g.size(); ++i) gx.data[i] += 4.0 * tp.value(x).data[i] * g.data[i];
    });
    return ad::sum(sq);
  };
  const GradCheckResult r = gradient_check(tensors, names, bad, opts);
  EXPECT_GT(r.max_rel_error, 0.3);
  EXPECT_EQ(r.checked, 3u);
  EXPECT_EQ(r.worst.rfind("x[", 0), 0u);
}

}  // namespace
}  // namespace indkg
