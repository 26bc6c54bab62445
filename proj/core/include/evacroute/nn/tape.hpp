// Copyright 2026 The evacroute Authors
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
#ifndef EVACROUTE_NN_TAPE_HPP_
#define EVACROUTE_NN_TAPE_HPP_

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace evacroute::nn {

using Matrix = Eigen::MatrixXd;
using RowMajorMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Handle to a value recorded on a Tape.
struct Var {
  int id = -1;
};

/// Reverse-mode differentiation over dense matrices.
///
/// Every op computes its value eagerly. When the tape is recording, ops whose
/// inputs depend on a parameter also store a backward closure; backward()
/// then replays them in reverse creation order. A non-recording tape runs the
/// identical forward arithmetic without keeping any gradient state, which is
/// how inference and the greedy baseline are evaluated.
///
/// Parameters are views into a flat weight vector: a rows x cols block stored
/// row-major starting at some offset.
class Tape {
 public:
  explicit Tape(bool record = true) : record_(record) {}

  bool recording() const noexcept { return record_; }
  std::size_t size() const noexcept { return nodes_.size(); }

  Var constant(Matrix value);
  Var parameter(std::span<const double> weights, std::size_t offset,
                Eigen::Index rows, Eigen::Index cols);

  const Matrix& value(Var v) const { return nodes_[v.id].value; }
  double scalar(Var v) const { return nodes_[v.id].value(0, 0); }

  Var matmul(Var a, Var b);     // a * b
  Var matmul_nt(Var a, Var b);  // a * b^T
  Var add(Var a, Var b);
  Var add_row(Var a, Var row);  // row broadcast over a's rows
  Var scale(Var a, double s);
  Var relu(Var a);
  Var tanh(Var a);
  Var cols(Var a, Eigen::Index start, Eigen::Index count);
  Var row(Var a, Eigen::Index r);
  Var hcat(std::span<const Var> parts);
  Var vcat(Var top, Var bottom);
  Var mean_rows(Var a);
  // Row-wise softmax; columns flagged in mask get probability zero.
  Var softmax_rows(Var a, const std::vector<bool>* mask = nullptr);
  // log softmax(a)[index] of a 1 x N row, ignoring masked columns.
  Var log_softmax_pick(Var a, const std::vector<bool>& mask, Eigen::Index index);
  Var layer_norm(Var a, Var gain, Var bias, double eps = 1e-5);
  Var sum_scalars(std::span<const Var> parts);

  // Seeds d(out) with `seed` (out must be 1 x 1) and propagates.
  void backward(Var out, double seed = 1.0);
  // Adds parameter gradients into grad at their offsets.
  void accumulate_parameter_grads(std::span<double> grad) const;

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    std::function<void()> backward;
    bool needs_grad = false;
    std::ptrdiff_t param_offset = -1;
  };

  Var push(Matrix value, bool needs_grad);
  bool needs(Var v) const { return record_ && nodes_[v.id].needs_grad; }
  void accumulate(Var v, const Matrix& g);
  template <typename F>
  void on_backward(Var out, F&& fn) {
    if (nodes_[out.id].needs_grad) nodes_[out.id].backward = std::forward<F>(fn);
  }

  bool record_;
  std::vector<Node> nodes_;
};

// Softmax probabilities of a single row, zero where masked.
Eigen::RowVectorXd masked_softmax(const Eigen::RowVectorXd& logits,
                                  const std::vector<bool>& mask);

}  // namespace evacroute::nn

#endif  // EVACROUTE_NN_TAPE_HPP_
