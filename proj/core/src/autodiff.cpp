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

#include "indkg/autodiff.hpp"

#include <cmath>
#include <numeric>

#include "indkg/error.hpp"

namespace indkg::ad {
namespace {

std::string shape_str(const Matrix& m) {
  return std::to_string(m.rows) + "x" + std::to_string(m.cols);
}

void require_same_shape(Var a, Var b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    fail(ErrorCode::kShapeMismatch,
         std::string(op) + ": " + shape_str(a.value()) + " vs " + shape_str(b.value()));
  }
}

Tape& tape_of(Var a) {
  if (!a.valid()) fail(ErrorCode::kInvalidArgument, "operation on an unbound Var");
  return *a.tape();
}

// c (n x m) += a (n x k) * b (k x m)
void gemm_nn(const Matrix& a, const Matrix& b, Matrix& c) {
  for (std::size_t i = 0; i < a.rows; ++i) {
    double* ci = c.data.data() + i * c.cols;
    for (std::size_t p = 0; p < a.cols; ++p) {
      const double aip = a.data[i * a.cols + p];
      if (aip == 0.0) continue;
      const double* bp = b.data.data() + p * b.cols;
      for (std::size_t j = 0; j < b.cols; ++j) ci[j] += aip * bp[j];
    }
  }
}

// c (n x k) += g (n x m) * b^T, b is (k x m)
void gemm_nt(const Matrix& g, const Matrix& b, Matrix& c) {
  for (std::size_t i = 0; i < g.rows; ++i) {
    const double* gi = g.data.data() + i * g.cols;
    double* ci = c.data.data() + i * c.cols;
    for (std::size_t p = 0; p < b.rows; ++p) {
      const double* bp = b.data.data() + p * b.cols;
      double acc = 0.0;
      for (std::size_t j = 0; j < g.cols; ++j) acc += gi[j] * bp[j];
      ci[p] += acc;
    }
  }
}

// c (k x m) += a^T * g, a is (n x k), g is (n x m)
void gemm_tn(const Matrix& a, const Matrix& g, Matrix& c) {
  for (std::size_t i = 0; i < a.rows; ++i) {
    const double* gi = g.data.data() + i * g.cols;
    for (std::size_t p = 0; p < a.cols; ++p) {
      const double aip = a.data[i * a.cols + p];
      if (aip == 0.0) continue;
      double* cp = c.data.data() + p * c.cols;
      for (std::size_t j = 0; j < g.cols; ++j) cp[j] += aip * gi[j];
    }
  }
}

template <typename F, typename D>
Var unary(Var a, F forward, D derivative) {
  Tape& t = tape_of(a);
  const Matrix& x = a.value();
  Matrix y(x.rows, x.cols);
  for (std::size_t i = 0; i < x.size(); ++i) y.data[i] = forward(x.data[i]);
  return t.record(std::move(y), {a}, [a, derivative](Tape& tp, const Matrix& g) {
    const Matrix& xv = tp.value(a);
    Matrix& ga = tp.grad(a);
    for (std::size_t i = 0; i < g.size(); ++i) ga.data[i] += g.data[i] * derivative(xv.data[i]);
  });
}

}  // namespace

Matrix::Matrix(std::size_t r, std::size_t c, std::vector<double> values)
    : rows(r), cols(c), data(std::move(values)) {
  if (data.size() != r * c) {
    fail(ErrorCode::kShapeMismatch, "matrix " + std::to_string(r) + "x" + std::to_string(c) +
                                        " given " + std::to_string(data.size()) + " values");
  }
}

Tensor::Tensor(std::vector<std::size_t> s) : shape(std::move(s)) {
  const std::size_t n =
      std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
  data.assign(shape.empty() ? 0 : n, 0.0);
  grad.assign(data.size(), 0.0);
}

std::size_t Tensor::rows() const {
  if (shape.size() <= 1) return shape.empty() ? 0 : shape[0];
  return std::accumulate(shape.begin(), shape.end() - 1, std::size_t{1}, std::multiplies<>());
}

std::size_t Tensor::cols() const {
  if (shape.empty()) return 0;
  return shape.size() == 1 ? 1 : shape.back();
}

void Tensor::zero_grad() { grad.assign(data.size(), 0.0); }

Matrix Tensor::as_matrix() const { return Matrix(rows(), cols(), data); }

const Matrix& Var::value() const { return tape_->value(*this); }

double Var::scalar() const {
  const Matrix& m = value();
  if (m.rows != 1 || m.cols != 1) {
    fail(ErrorCode::kShapeMismatch, "scalar() on a " + shape_str(m) + " node");
  }
  return m.data[0];
}

Var Tape::constant(Matrix value) {
  nodes_.push_back(Node{std::move(value), {}, nullptr, nullptr, false});
  return Var(this, static_cast<std::uint32_t>(nodes_.size() - 1));
}

Var Tape::param(Tensor& tensor) {
  if (tensor.grad.size() != tensor.data.size()) tensor.zero_grad();
  nodes_.push_back(Node{tensor.as_matrix(), {}, nullptr, &tensor, true});
  return Var(this, static_cast<std::uint32_t>(nodes_.size() - 1));
}

Var Tape::record(Matrix value, std::initializer_list<Var> inputs, Backward fn) {
  return record(std::move(value), std::span<const Var>(inputs.begin(), inputs.size()),
                std::move(fn));
}

Var Tape::record(Matrix value, std::span<const Var> inputs, Backward fn) {
  bool rg = false;
  for (Var v : inputs) {
    if (v.tape() != this) fail(ErrorCode::kInvalidArgument, "mixing Vars from different tapes");
    rg = rg || nodes_[v.id()].requires_grad;
  }
  nodes_.push_back(Node{std::move(value), {}, rg ? std::move(fn) : nullptr, nullptr, rg});
  return Var(this, static_cast<std::uint32_t>(nodes_.size() - 1));
}

Matrix& Tape::grad(Var v) {
  Node& n = nodes_[v.id()];
  if (n.grad.size() != n.value.size() || n.grad.rows != n.value.rows) {
    n.grad = Matrix(n.value.rows, n.value.cols);
  }
  return n.grad;
}

void Tape::backward(Var loss) {
  if (loss.tape() != this) fail(ErrorCode::kInvalidArgument, "loss belongs to another tape");
  const Matrix& lv = value(loss);
  if (lv.rows != 1 || lv.cols != 1) {
    fail(ErrorCode::kShapeMismatch, "backward() needs a 1x1 loss, got " + shape_str(lv));
  }
  grad(loss).data[0] += 1.0;
  for (std::size_t i = loss.id() + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (!n.requires_grad || n.grad.size() == 0) continue;
    if (n.backward) n.backward(*this, n.grad);
  }
  for (Node& n : nodes_) {
    if (n.param == nullptr || n.grad.size() == 0) continue;
    for (std::size_t j = 0; j < n.grad.size(); ++j) {
      const double g = n.grad.data[j];
      if (!std::isfinite(g)) fail(ErrorCode::kNonFiniteGradient, "non-finite parameter gradient");
      n.param->grad[j] += g;
    }
  }
}

Var matmul(Var a, Var b) {
  Tape& t = tape_of(a);
  const Matrix& av = a.value();
  const Matrix& bv = b.value();
  if (av.cols != bv.rows) {
    fail(ErrorCode::kShapeMismatch, "matmul " + shape_str(av) + " * " + shape_str(bv));
  }
  Matrix c(av.rows, bv.cols);
  gemm_nn(av, bv, c);
  return t.record(std::move(c), {a, b}, [a, b](Tape& tp, const Matrix& g) {
    if (tp.requires_grad(a)) gemm_nt(g, tp.value(b), tp.grad(a));
    if (tp.requires_grad(b)) gemm_tn(tp.value(a), g, tp.grad(b));
  });
}

Var add(Var a, Var b) {
  require_same_shape(a, b, "add");
  Matrix c = a.value();
  const Matrix& bv = b.value();
  for (std::size_t i = 0; i < c.size(); ++i) c.data[i] += bv.data[i];
  return tape_of(a).record(std::move(c), {a, b}, [a, b](Tape& tp, const Matrix& g) {
    for (Var v : {a, b}) {
      if (!tp.requires_grad(v)) continue;
      Matrix& gv = tp.grad(v);
      for (std::size_t i = 0; i < g.size(); ++i) gv.data[i] += g.data[i];
    }
  });
}

Var sub(Var a, Var b) {
  require_same_shape(a, b, "sub");
  Matrix c = a.value();
  const Matrix& bv = b.value();
  for (std::size_t i = 0; i < c.size(); ++i) c.data[i] -= bv.data[i];
  return tape_of(a).record(std::move(c), {a, b}, [a, b](Tape& tp, const Matrix& g) {
    if (tp.requires_grad(a)) {
      Matrix& ga = tp.grad(a);
      for (std::size_t i = 0; i < g.size(); ++i) ga.data[i] += g.data[i];
    }
    if (tp.requires_grad(b)) {
      Matrix& gb = tp.grad(b);
      for (std::size_t i = 0; i < g.size(); ++i) gb.data[i] -= g.data[i];
    }
  });
}

Var mul(Var a, Var b) {
  require_same_shape(a, b, "mul");
  Matrix c = a.value();
  const Matrix& bv = b.value();
  for (std::size_t i = 0; i < c.size(); ++i) c.data[i] *= bv.data[i];
  return tape_of(a).record(std::move(c), {a, b}, [a, b](Tape& tp, const Matrix& g) {
    const Matrix& av = tp.value(a);
    const Matrix& bv2 = tp.value(b);
    if (tp.requires_grad(a)) {
      Matrix& ga = tp.grad(a);
      for (std::size_t i = 0; i < g.size(); ++i) ga.data[i] += g.data[i] * bv2.data[i];
    }
    if (tp.requires_grad(b)) {
      Matrix& gb = tp.grad(b);
      for (std::size_t i = 0; i < g.size(); ++i) gb.data[i] += g.data[i] * av.data[i];
    }
  });
}

Var add_row(Var a, Var row) {
  const Matrix& av = a.value();
  const Matrix& rv = row.value();
  if (rv.rows != 1 || rv.cols != av.cols) {
    fail(ErrorCode::kShapeMismatch, "add_row " + shape_str(av) + " + " + shape_str(rv));
  }
  Matrix c = av;
  for (std::size_t i = 0; i < c.rows; ++i) {
    for (std::size_t j = 0; j < c.cols; ++j) c(i, j) += rv.data[j];
  }
  return tape_of(a).record(std::move(c), {a, row}, [a, row](Tape& tp, const Matrix& g) {
    if (tp.requires_grad(a)) {
      Matrix& ga = tp.grad(a);
      for (std::size_t i = 0; i < g.size(); ++i) ga.data[i] += g.data[i];
    }
    if (tp.requires_grad(row)) {
      Matrix& gr = tp.grad(row);
      for (std::size_t i = 0; i < g.rows; ++i) {
        for (std::size_t j = 0; j < g.cols; ++j) gr.data[j] += g(i, j);
      }
    }
  });
}

Var scale(Var a, double s) {
  return unary(a, [s](double x) { return s * x; }, [s](double) { return s; });
}

Var add_scalar(Var a, double s) {
  return unary(a, [s](double x) { return x + s; }, [](double) { return 1.0; });
}

Var neg(Var a) { return scale(a, -1.0); }

Var relu(Var a) {
  return unary(
      a, [](double x) { return x > 0.0 ? x : 0.0; }, [](double x) { return x > 0.0 ? 1.0 : 0.0; });
}

Var sigmoid(Var a) {
  const auto f = [](double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
  };
  return unary(a, f, [f](double x) {
    const double y = f(x);
    return y * (1.0 - y);
  });
}

Var sin(Var a) {
  return unary(a, [](double x) { return std::sin(x); }, [](double x) { return std::cos(x); });
}

Var cos(Var a) {
  return unary(a, [](double x) { return std::cos(x); }, [](double x) { return -std::sin(x); });
}

Var square(Var a) {
  return unary(a, [](double x) { return x * x; }, [](double x) { return 2.0 * x; });
}

Var sqrt(Var a) {
  return unary(
      a, [](double x) { return x > 0.0 ? std::sqrt(x) : 0.0; },
      [](double x) { return x > 0.0 ? 0.5 / std::sqrt(x) : 0.0; });
}

Var abs(Var a) {
  return unary(
      a, [](double x) { return std::fabs(x); },
      [](double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); });
}

Var sum(Var a) {
  const Matrix& av = a.value();
  double s = 0.0;
  for (double x : av.data) s += x;
  return tape_of(a).record(Matrix(1, 1, s), {a}, [a](Tape& tp, const Matrix& g) {
    Matrix& ga = tp.grad(a);
    for (double& x : ga.data) x += g.data[0];
  });
}

Var mean(Var a) {
  const std::size_t n = a.value().size();
  if (n == 0) fail(ErrorCode::kShapeMismatch, "mean of an empty matrix");
  return scale(sum(a), 1.0 / static_cast<double>(n));
}

Var mean_rows(Var a) {
  const Matrix& av = a.value();
  if (av.rows == 0) fail(ErrorCode::kShapeMismatch, "mean_rows of an empty matrix");
  Matrix m(1, av.cols);
  for (std::size_t i = 0; i < av.rows; ++i) {
    for (std::size_t j = 0; j < av.cols; ++j) m.data[j] += av(i, j);
  }
  const double inv = 1.0 / static_cast<double>(av.rows);
  for (double& x : m.data) x *= inv;
  return tape_of(a).record(std::move(m), {a}, [a, inv](Tape& tp, const Matrix& g) {
    Matrix& ga = tp.grad(a);
    for (std::size_t i = 0; i < ga.rows; ++i) {
      for (std::size_t j = 0; j < ga.cols; ++j) ga(i, j) += g.data[j] * inv;
    }
  });
}

Var sum_cols(Var a) {
  const Matrix& av = a.value();
  Matrix s(av.rows, 1);
  for (std::size_t i = 0; i < av.rows; ++i) {
    for (std::size_t j = 0; j < av.cols; ++j) s.data[i] += av(i, j);
  }
  return tape_of(a).record(std::move(s), {a}, [a](Tape& tp, const Matrix& g) {
    Matrix& ga = tp.grad(a);
    for (std::size_t i = 0; i < ga.rows; ++i) {
      for (std::size_t j = 0; j < ga.cols; ++j) ga(i, j) += g.data[i];
    }
  });
}

Var pnorm_rows(Var a, int p) {
  if (p == 1) return sum_cols(abs(a));
  if (p == 2) return sqrt(sum_cols(square(a)));
  fail(ErrorCode::kInvalidArgument, "pnorm_rows supports p = 1 or 2, got " + std::to_string(p));
}

Var gather_rows(Var a, std::vector<std::uint32_t> index) {
  const Matrix& av = a.value();
  Matrix out(index.size(), av.cols);
  for (std::size_t e = 0; e < index.size(); ++e) {
    if (index[e] >= av.rows) fail(ErrorCode::kShapeMismatch, "gather_rows index out of range");
    const auto src = av.row(index[e]);
    std::copy(src.begin(), src.end(), out.row(e).begin());
  }
  return tape_of(a).record(std::move(out), {a},
                           [a, index = std::move(index)](Tape& tp, const Matrix& g) {
                             Matrix& ga = tp.grad(a);
                             for (std::size_t e = 0; e < index.size(); ++e) {
                               auto dst = ga.row(index[e]);
                               const auto src = g.row(e);
                               for (std::size_t j = 0; j < src.size(); ++j) dst[j] += src[j];
                             }
                           });
}

Var scatter_add_rows(Var a, std::vector<std::uint32_t> index, std::vector<double> weight,
                     std::size_t n_out) {
  const Matrix& av = a.value();
  if (index.size() != av.rows || (!weight.empty() && weight.size() != av.rows)) {
    fail(ErrorCode::kShapeMismatch, "scatter_add_rows index/weight length");
  }
  Matrix out(n_out, av.cols);
  for (std::size_t e = 0; e < index.size(); ++e) {
    if (index[e] >= n_out) fail(ErrorCode::kShapeMismatch, "scatter_add_rows index out of range");
    const double w = weight.empty() ? 1.0 : weight[e];
    auto dst = out.row(index[e]);
    const auto src = av.row(e);
    for (std::size_t j = 0; j < src.size(); ++j) dst[j] += w * src[j];
  }
  return tape_of(a).record(
      std::move(out), {a},
      [a, index = std::move(index), weight = std::move(weight)](Tape& tp, const Matrix& g) {
        Matrix& ga = tp.grad(a);
        for (std::size_t e = 0; e < index.size(); ++e) {
          const double w = weight.empty() ? 1.0 : weight[e];
          auto dst = ga.row(e);
          const auto src = g.row(index[e]);
          for (std::size_t j = 0; j < src.size(); ++j) dst[j] += w * src[j];
        }
      });
}

Var row_scale(Var a, Var s) {
  const Matrix& av = a.value();
  const Matrix& sv = s.value();
  if (sv.rows != av.rows || sv.cols != 1) {
    fail(ErrorCode::kShapeMismatch, "row_scale " + shape_str(av) + " by " + shape_str(sv));
  }
  Matrix out = av;
  for (std::size_t i = 0; i < out.rows; ++i) {
    for (double& x : out.row(i)) x *= sv.data[i];
  }
  return tape_of(a).record(std::move(out), {a, s}, [a, s](Tape& tp, const Matrix& g) {
    const Matrix& av2 = tp.value(a);
    const Matrix& sv2 = tp.value(s);
    if (tp.requires_grad(a)) {
      Matrix& ga = tp.grad(a);
      for (std::size_t i = 0; i < g.rows; ++i) {
        for (std::size_t j = 0; j < g.cols; ++j) ga(i, j) += g(i, j) * sv2.data[i];
      }
    }
    if (tp.requires_grad(s)) {
      Matrix& gs = tp.grad(s);
      for (std::size_t i = 0; i < g.rows; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < g.cols; ++j) acc += g(i, j) * av2(i, j);
        gs.data[i] += acc;
      }
    }
  });
}

Var hconcat(std::span<const Var> parts) {
  if (parts.empty()) fail(ErrorCode::kShapeMismatch, "hconcat of nothing");
  const std::size_t rows = parts[0].rows();
  std::size_t cols = 0;
  for (Var p : parts) {
    if (p.rows() != rows) fail(ErrorCode::kShapeMismatch, "hconcat row counts differ");
    cols += p.cols();
  }
  Matrix out(rows, cols);
  std::vector<std::size_t> offsets;
  std::size_t off = 0;
  for (Var p : parts) {
    offsets.push_back(off);
    const Matrix& pv = p.value();
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < pv.cols; ++j) out(i, off + j) = pv(i, j);
    }
    off += pv.cols;
  }
  std::vector<Var> inputs(parts.begin(), parts.end());
  return tape_of(parts[0]).record(
      std::move(out), inputs,
      [inputs, offsets = std::move(offsets)](Tape& tp, const Matrix& g) {
        for (std::size_t k = 0; k < inputs.size(); ++k) {
          if (!tp.requires_grad(inputs[k])) continue;
          Matrix& gp = tp.grad(inputs[k]);
          for (std::size_t i = 0; i < gp.rows; ++i) {
            for (std::size_t j = 0; j < gp.cols; ++j) gp(i, j) += g(i, offsets[k] + j);
          }
        }
      });
}

Var hconcat(std::initializer_list<Var> parts) {
  return hconcat(std::span<const Var>(parts.begin(), parts.size()));
}

Var slice_cols(Var a, std::size_t begin, std::size_t end) {
  const Matrix& av = a.value();
  if (begin > end || end > av.cols) fail(ErrorCode::kShapeMismatch, "slice_cols range");
  Matrix out(av.rows, end - begin);
  for (std::size_t i = 0; i < av.rows; ++i) {
    for (std::size_t j = begin; j < end; ++j) out(i, j - begin) = av(i, j);
  }
  return tape_of(a).record(std::move(out), {a}, [a, begin](Tape& tp, const Matrix& g) {
    Matrix& ga = tp.grad(a);
    for (std::size_t i = 0; i < g.rows; ++i) {
      for (std::size_t j = 0; j < g.cols; ++j) ga(i, begin + j) += g(i, j);
    }
  });
}

Var basis_transform(Var hb, Var coeffs, std::vector<std::uint32_t> node,
                    std::vector<std::uint32_t> slot, std::size_t d) {
  const Matrix& hv = hb.value();
  const Matrix& cv = coeffs.value();
  const std::size_t nb = cv.cols;
  if (node.size() != slot.size() || hv.cols != nb * d) {
    fail(ErrorCode::kShapeMismatch, "basis_transform: hb " + shape_str(hv) + ", coeffs " +
                                        shape_str(cv) + ", d " + std::to_string(d));
  }
  Matrix out(node.size(), d);
  for (std::size_t e = 0; e < node.size(); ++e) {
    if (node[e] >= hv.rows || slot[e] >= cv.rows) {
      fail(ErrorCode::kShapeMismatch, "basis_transform index out of range");
    }
    double* o = out.data.data() + e * d;
    const double* h = hv.data.data() + node[e] * hv.cols;
    for (std::size_t b = 0; b < nb; ++b) {
      const double c = cv(slot[e], b);
      for (std::size_t j = 0; j < d; ++j) o[j] += c * h[b * d + j];
    }
  }
  return tape_of(hb).record(
      std::move(out), {hb, coeffs},
      [hb, coeffs, node = std::move(node), slot = std::move(slot), d, nb](Tape& tp,
                                                                         const Matrix& g) {
        const Matrix& hv2 = tp.value(hb);
        const Matrix& cv2 = tp.value(coeffs);
        const bool g_h = tp.requires_grad(hb);
        const bool g_c = tp.requires_grad(coeffs);
        Matrix* gh = g_h ? &tp.grad(hb) : nullptr;
        Matrix* gc = g_c ? &tp.grad(coeffs) : nullptr;
        for (std::size_t e = 0; e < node.size(); ++e) {
          const double* ge = g.data.data() + e * d;
          for (std::size_t b = 0; b < nb; ++b) {
            if (g_h) {
              const double c = cv2(slot[e], b);
              double* dst = gh->data.data() + node[e] * hv2.cols + b * d;
              for (std::size_t j = 0; j < d; ++j) dst[j] += c * ge[j];
            }
            if (g_c) {
              const double* h = hv2.data.data() + node[e] * hv2.cols + b * d;
              double acc = 0.0;
              for (std::size_t j = 0; j < d; ++j) acc += h[j] * ge[j];
              (*gc)(slot[e], b) += acc;
            }
          }
        }
      });
}

Var circular_correlation(Var a, Var b) {
  require_same_shape(a, b, "circular_correlation");
  const Matrix& av = a.value();
  const Matrix& bv = b.value();
  const std::size_t d = av.cols;
  Matrix out(av.rows, d);
  for (std::size_t i = 0; i < av.rows; ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      double acc = 0.0;
      for (std::size_t j = 0; j < d; ++j) acc += av(i, j) * bv(i, (j + k) % d);
      out(i, k) = acc;
    }
  }
  return tape_of(a).record(std::move(out), {a, b}, [a, b, d](Tape& tp, const Matrix& g) {
    const Matrix& av2 = tp.value(a);
    const Matrix& bv2 = tp.value(b);
    const bool g_a = tp.requires_grad(a);
    const bool g_b = tp.requires_grad(b);
    Matrix* ga = g_a ? &tp.grad(a) : nullptr;
    Matrix* gb = g_b ? &tp.grad(b) : nullptr;
    for (std::size_t i = 0; i < g.rows; ++i) {
      for (std::size_t k = 0; k < d; ++k) {
        const double gik = g(i, k);
        for (std::size_t j = 0; j < d; ++j) {
          const std::size_t m = (j + k) % d;
          if (g_a) (*ga)(i, j) += gik * bv2(i, m);
          if (g_b) (*gb)(i, m) += gik * av2(i, j);
        }
      }
    }
  });
}

}  // namespace indkg::ad
