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
#include "evacroute/nn/tape.hpp"

#include <cassert>
#include <cmath>
#include <limits>

#include "evacroute/error.hpp"

namespace evacroute::nn {

Var Tape::push(Matrix value, bool needs_grad) {
  Node node;
  node.value = std::move(value);
  node.needs_grad = record_ && needs_grad;
  nodes_.push_back(std::move(node));
  return Var{static_cast<int>(nodes_.size() - 1)};
}

void Tape::accumulate(Var v, const Matrix& g) {
  Node& node = nodes_[v.id];
  if (!node.needs_grad) return;
  if (node.grad.size() == 0) {
    node.grad = g;
  } else {
    node.grad += g;
  }
}

Var Tape::constant(Matrix value) { return push(std::move(value), false); }

Var Tape::parameter(std::span<const double> weights, std::size_t offset,
                    Eigen::Index rows, Eigen::Index cols) {
  if (offset + static_cast<std::size_t>(rows * cols) > weights.size()) {
    throw Error(ErrorCode::kShapeMismatch, "parameter block outside weight vector");
  }
  Matrix m = Eigen::Map<const RowMajorMatrix>(weights.data() + offset, rows, cols);
  const Var v = push(std::move(m), true);
  if (record_) nodes_[v.id].param_offset = static_cast<std::ptrdiff_t>(offset);
  return v;
}

Var Tape::matmul(Var a, Var b) {
  const Var out = push(value(a) * value(b), needs(a) || needs(b));
  on_backward(out, [this, a, b, out] {
    const Matrix& g = nodes_[out.id].grad;
    if (needs(a)) accumulate(a, g * value(b).transpose());
    if (needs(b)) accumulate(b, value(a).transpose() * g);
  });
  return out;
}

Var Tape::matmul_nt(Var a, Var b) {
  const Var out = push(value(a) * value(b).transpose(), needs(a) || needs(b));
  on_backward(out, [this, a, b, out] {
    const Matrix& g = nodes_[out.id].grad;
    if (needs(a)) accumulate(a, g * value(b));
    if (needs(b)) accumulate(b, g.transpose() * value(a));
  });
  return out;
}

Var Tape::add(Var a, Var b) {
  assert(value(a).rows() == value(b).rows() && value(a).cols() == value(b).cols());
  const Var out = push(value(a) + value(b), needs(a) || needs(b));
  on_backward(out, [this, a, b, out] {
    const Matrix& g = nodes_[out.id].grad;
    accumulate(a, g);
    accumulate(b, g);
  });
  return out;
}

Var Tape::add_row(Var a, Var row) {
  Matrix v = value(a);
  v.rowwise() += value(row).row(0);
  const Var out = push(std::move(v), needs(a) || needs(row));
  on_backward(out, [this, a, row, out] {
    const Matrix& g = nodes_[out.id].grad;
    accumulate(a, g);
    if (needs(row)) accumulate(row, g.colwise().sum());
  });
  return out;
}

Var Tape::scale(Var a, double s) {
  const Var out = push(value(a) * s, needs(a));
  on_backward(out, [this, a, s, out] { accumulate(a, nodes_[out.id].grad * s); });
  return out;
}

Var Tape::relu(Var a) {
  const Var out = push(value(a).cwiseMax(0.0), needs(a));
  on_backward(out, [this, a, out] {
    const Matrix mask = (value(a).array() > 0.0).cast<double>().matrix();
    accumulate(a, nodes_[out.id].grad.cwiseProduct(mask));
  });
  return out;
}

Var Tape::tanh(Var a) {
  const Var out = push(value(a).array().tanh().matrix(), needs(a));
  on_backward(out, [this, a, out] {
    const Matrix& y = value(out);
    const Matrix d = (1.0 - y.array().square()).matrix();
    accumulate(a, nodes_[out.id].grad.cwiseProduct(d));
  });
  return out;
}

Var Tape::cols(Var a, Eigen::Index start, Eigen::Index count) {
  const Var out = push(value(a).middleCols(start, count), needs(a));
  on_backward(out, [this, a, start, count, out] {
    Matrix g = Matrix::Zero(value(a).rows(), value(a).cols());
    g.middleCols(start, count) = nodes_[out.id].grad;
    accumulate(a, g);
  });
  return out;
}

Var Tape::row(Var a, Eigen::Index r) {
  const Var out = push(value(a).row(r), needs(a));
  on_backward(out, [this, a, r, out] {
    Matrix g = Matrix::Zero(value(a).rows(), value(a).cols());
    g.row(r) = nodes_[out.id].grad;
    accumulate(a, g);
  });
  return out;
}

Var Tape::hcat(std::span<const Var> parts) {
  Eigen::Index rows = value(parts.front()).rows();
  Eigen::Index total = 0;
  bool grad = false;
  for (const Var p : parts) {
    total += value(p).cols();
    grad = grad || needs(p);
  }
  Matrix v(rows, total);
  Eigen::Index at = 0;
  for (const Var p : parts) {
    v.middleCols(at, value(p).cols()) = value(p);
    at += value(p).cols();
  }
  const Var out = push(std::move(v), grad);
  on_backward(out, [this, ps = std::vector<Var>(parts.begin(), parts.end()), out] {
    const Matrix& g = nodes_[out.id].grad;
    Eigen::Index at = 0;
    for (const Var p : ps) {
      const auto c = value(p).cols();
      if (needs(p)) accumulate(p, g.middleCols(at, c));
      at += c;
    }
  });
  return out;
}

Var Tape::vcat(Var top, Var bottom) {
  Matrix v(value(top).rows() + value(bottom).rows(), value(top).cols());
  v << value(top), value(bottom);
  const Var out = push(std::move(v), needs(top) || needs(bottom));
  on_backward(out, [this, top, bottom, out] {
    const Matrix& g = nodes_[out.id].grad;
    const auto rt = value(top).rows();
    if (needs(top)) accumulate(top, g.topRows(rt));
    if (needs(bottom)) accumulate(bottom, g.bottomRows(g.rows() - rt));
  });
  return out;
}

Var Tape::mean_rows(Var a) {
  const double n = static_cast<double>(value(a).rows());
  const Var out = push(value(a).colwise().mean(), needs(a));
  on_backward(out, [this, a, n, out] {
    Matrix g = nodes_[out.id].grad.replicate(value(a).rows(), 1) / n;
    accumulate(a, g);
  });
  return out;
}

Var Tape::softmax_rows(Var a, const std::vector<bool>* mask) {
  const Matrix& x = value(a);
  Matrix y(x.rows(), x.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    if (mask) {
      y.row(r) = masked_softmax(x.row(r), *mask);
    } else {
      const double m = x.row(r).maxCoeff();
      Eigen::RowVectorXd e = (x.row(r).array() - m).exp();
      y.row(r) = e / e.sum();
    }
  }
  const Var out = push(std::move(y), needs(a));
  on_backward(out, [this, a, out] {
    const Matrix& y = value(out);
    const Matrix& g = nodes_[out.id].grad;
    Matrix d = y.cwiseProduct(g);
    const Eigen::VectorXd dot = d.rowwise().sum();
    d -= y.cwiseProduct(dot.replicate(1, y.cols()));
    accumulate(a, d);
  });
  return out;
}

Var Tape::log_softmax_pick(Var a, const std::vector<bool>& mask, Eigen::Index index) {
  const Eigen::RowVectorXd x = value(a).row(0);
  const Eigen::RowVectorXd p = masked_softmax(x, mask);
  double m = -std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (!mask[j]) m = std::max(m, x[j]);
  }
  double s = 0.0;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (!mask[j]) s += std::exp(x[j] - m);
  }
  Matrix v(1, 1);
  v(0, 0) = x[index] - m - std::log(s);
  const Var out = push(std::move(v), needs(a));
  on_backward(out, [this, a, p, index, out] {
    const double g = nodes_[out.id].grad(0, 0);
    Matrix d = -g * p;
    d(0, index) += g;
    accumulate(a, d);
  });
  return out;
}

Var Tape::layer_norm(Var a, Var gain, Var bias, double eps) {
  const Matrix& x = value(a);
  const Eigen::Index cols = x.cols();
  Matrix xhat(x.rows(), cols);
  Eigen::VectorXd inv_std(x.rows());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const double mu = x.row(r).mean();
    const double var = (x.row(r).array() - mu).square().mean();
    inv_std[r] = 1.0 / std::sqrt(var + eps);
    xhat.row(r) = (x.row(r).array() - mu) * inv_std[r];
  }
  Matrix y = xhat.array().rowwise() * value(gain).row(0).array();
  y.rowwise() += value(bias).row(0);
  const Var out = push(std::move(y), needs(a) || needs(gain) || needs(bias));
  on_backward(out, [this, a, gain, bias, xhat, inv_std, cols, out] {
    const Matrix& g = nodes_[out.id].grad;
    if (needs(gain)) accumulate(gain, g.cwiseProduct(xhat).colwise().sum());
    if (needs(bias)) accumulate(bias, g.colwise().sum());
    if (needs(a)) {
      const Matrix dxhat = g.array().rowwise() * value(gain).row(0).array();
      Matrix dx(dxhat.rows(), cols);
      for (Eigen::Index r = 0; r < dxhat.rows(); ++r) {
        const double m1 = dxhat.row(r).mean();
        const double m2 = dxhat.row(r).cwiseProduct(xhat.row(r)).mean();
        dx.row(r) = (dxhat.row(r).array() - m1 - xhat.row(r).array() * m2) * inv_std[r];
      }
      accumulate(a, dx);
    }
  });
  return out;
}

Var Tape::sum_scalars(std::span<const Var> parts) {
  Matrix v = Matrix::Zero(1, 1);
  bool grad = false;
  for (const Var p : parts) {
    v(0, 0) += scalar(p);
    grad = grad || needs(p);
  }
  const Var out = push(std::move(v), grad);
  on_backward(out, [this, ps = std::vector<Var>(parts.begin(), parts.end()), out] {
    for (const Var p : ps) accumulate(p, nodes_[out.id].grad);
  });
  return out;
}

void Tape::backward(Var out, double seed) {
  if (!record_) return;
  Node& root = nodes_[out.id];
  if (!root.needs_grad) return;
  root.grad = Matrix::Constant(root.value.rows(), root.value.cols(), seed);
  for (int id = out.id; id >= 0; --id) {
    Node& node = nodes_[id];
    if (node.backward && node.grad.size() != 0) node.backward();
  }
}

void Tape::accumulate_parameter_grads(std::span<double> grad) const {
  for (const Node& node : nodes_) {
    if (node.param_offset < 0 || node.grad.size() == 0) continue;
    Eigen::Map<RowMajorMatrix> dst(grad.data() + node.param_offset, node.grad.rows(),
                                   node.grad.cols());
    dst += node.grad;
  }
}

Eigen::RowVectorXd masked_softmax(const Eigen::RowVectorXd& logits,
                                  const std::vector<bool>& mask) {
  double m = -std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < logits.size(); ++j) {
    if (!mask[j]) m = std::max(m, logits[j]);
  }
  Eigen::RowVectorXd p = Eigen::RowVectorXd::Zero(logits.size());
  double s = 0.0;
  for (Eigen::Index j = 0; j < logits.size(); ++j) {
    if (!mask[j]) {
      p[j] = std::exp(logits[j] - m);
      s += p[j];
    }
  }
  return p / s;
}

}  // namespace evacroute::nn
