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
#include <vector>

namespace indkg::ad {

// Dense row-major matrix of doubles. Vectors are 1 x n or n x 1 matrices.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}
  Matrix(std::size_t r, std::size_t c, std::vector<double> values);

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
  std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }
  std::size_t size() const { return data.size(); }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

// A trainable parameter: shape, values and a same-sized gradient
// accumulator. On a tape a tensor is seen as a matrix with
// prod(shape[:-1]) rows and shape.back() columns; 1-D tensors are columns.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> data;
  std::vector<double> grad;

  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> s);

  std::size_t size() const { return data.size(); }
  std::size_t rows() const;
  std::size_t cols() const;
  bool empty() const { return data.empty(); }
  void zero_grad();
  Matrix as_matrix() const;
};

class Tape;

// Handle to a node on a tape. Cheap to copy; valid while the tape lives.
class Var {
 public:
  Var() = default;

  const Matrix& value() const;
  std::size_t rows() const { return value().rows; }
  std::size_t cols() const { return value().cols; }
  double scalar() const;  // value of a 1 x 1 node
  Tape* tape() const { return tape_; }
  std::uint32_t id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

 private:
  friend class Tape;
  Var(Tape* tape, std::uint32_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::uint32_t id_ = 0;
};

// Records a computation as it runs and replays it backwards. Gradients of
// parameter leaves are added into Tensor::grad by backward(); tensors must
// outlive the tape.
class Tape {
 public:
  using Backward = std::function<void(Tape&, const Matrix& out_grad)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Matrix value);
  Var scalar(double v) { return constant(Matrix(1, 1, v)); }
  Var param(Tensor& tensor);

  // Used by op implementations. `fn` is dropped when no input needs a
  // gradient.
  Var record(Matrix value, std::initializer_list<Var> inputs, Backward fn);
  Var record(Matrix value, std::span<const Var> inputs, Backward fn);

  const Matrix& value(Var v) const { return nodes_[v.id()].value; }
  bool requires_grad(Var v) const { return nodes_[v.id()].requires_grad; }
  // Gradient buffer of v, allocated as zeros on first use.
  Matrix& grad(Var v);

  // Seeds d(loss)/d(loss) = 1 on a 1 x 1 node and propagates. Throws
  // kNonFiniteGradient if any parameter gradient is NaN or infinite.
  void backward(Var loss);

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    Backward backward;
    Tensor* param = nullptr;
    bool requires_grad = false;
  };
  std::vector<Node> nodes_;
};

// Linear algebra.
Var matmul(Var a, Var b);
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);            // elementwise
Var add_row(Var a, Var row);      // a (n x c) + row (1 x c) on every row
Var scale(Var a, double s);
Var add_scalar(Var a, double s);
Var neg(Var a);

// Elementwise nonlinearities. relu'(0) = 0; abs'(0) = 0; sqrt uses a zero
// subgradient at 0.
Var relu(Var a);
Var sigmoid(Var a);
Var sin(Var a);
Var cos(Var a);
Var square(Var a);
Var sqrt(Var a);
Var abs(Var a);

// Reductions.
Var sum(Var a);        // 1 x 1
Var mean(Var a);       // 1 x 1
Var mean_rows(Var a);  // 1 x c, column means
Var sum_cols(Var a);   // n x 1, row sums
Var pnorm_rows(Var a, int p);  // n x 1, p in {1, 2}

// Structure.
Var gather_rows(Var a, std::vector<std::uint32_t> index);
// out (n_out x c): out[index[e]] += weight[e] * a[e]; empty weights mean 1.
Var scatter_add_rows(Var a, std::vector<std::uint32_t> index, std::vector<double> weight,
                     std::size_t n_out);
Var row_scale(Var a, Var s);  // a (n x c) * s (n x 1)
Var hconcat(std::span<const Var> parts);
Var hconcat(std::initializer_list<Var> parts);
Var slice_cols(Var a, std::size_t begin, std::size_t end);

// Per-edge basis-decomposed transform. hb holds H * [B_0 | ... | B_{nb-1}]
// (n x nb*d), coeffs is (slots x nb). Row e of the result is
//   sum_b coeffs[slot[e], b] * hb[node[e], b*d : (b+1)*d].
Var basis_transform(Var hb, Var coeffs, std::vector<std::uint32_t> node,
                    std::vector<std::uint32_t> slot, std::size_t d);

// Row-wise circular correlation: out[i][k] = sum_j a[i][j] * b[i][(j+k) mod d].
Var circular_correlation(Var a, Var b);

}  // namespace indkg::ad
