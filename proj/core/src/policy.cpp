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
#include "evacroute/nn/policy.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "evacroute/error.hpp"

namespace evacroute::nn {

void check_architecture(const Architecture& arch) {
  if (arch.embed_dim <= 0 || arch.n_heads <= 0 || arch.n_encoder_layers <= 0 ||
      arch.feedforward_dim <= 0) {
    throw Error(ErrorCode::kShapeMismatch, "architecture sizes must be positive");
  }
  if (arch.embed_dim % arch.n_heads != 0) {
    throw Error(ErrorCode::kShapeMismatch,
                fmt::format("embed_dim {} is not divisible by n_heads {}",
                            arch.embed_dim, arch.n_heads));
  }
}

ParameterLayout::ParameterLayout(const Architecture& arch) {
  check_architecture(arch);
  const Eigen::Index d = arch.embed_dim;
  const Eigen::Index ff = arch.feedforward_dim;
  auto block = [this](Eigen::Index rows, Eigen::Index cols) {
    Block b{total, rows, cols};
    total += static_cast<std::size_t>(rows * cols);
    return b;
  };
  depot_w = block(3, d);
  depot_b = block(1, d);
  house_w = block(3, d);
  house_b = block(1, d);
  for (int l = 0; l < arch.n_encoder_layers; ++l) {
    EncoderLayer layer;
    layer.query = block(d, d);
    layer.key = block(d, d);
    layer.value = block(d, d);
    layer.out = block(d, d);
    layer.norm1_gain = block(1, d);
    layer.norm1_bias = block(1, d);
    layer.ff1_w = block(d, ff);
    layer.ff1_b = block(1, ff);
    layer.ff2_w = block(ff, d);
    layer.ff2_b = block(1, d);
    layer.norm2_gain = block(1, d);
    layer.norm2_bias = block(1, d);
    layers.push_back(layer);
  }
  node_proj = block(d, 3 * d);
  graph_proj = block(d, d);
  step_proj = block(d + 1, d);
  glimpse_out = block(d, d);
}

std::size_t parameter_count(const Architecture& arch) {
  return ParameterLayout(arch).total;
}

void check_params(const PolicyParams& params) {
  const std::size_t expected = parameter_count(params.arch);
  if (params.weights.size() != expected) {
    throw Error(ErrorCode::kShapeMismatch,
                fmt::format("{} weights for an architecture with {} parameters",
                            params.weights.size(), expected));
  }
}

PolicyParams init_params(const Architecture& arch, std::uint64_t seed) {
  const ParameterLayout layout(arch);
  std::vector<double> w(layout.total, 0.0);
  std::mt19937_64 rng(seed);
  auto fill = [&](const ParameterLayout::Block& b, Eigen::Index fan_in) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (Eigen::Index i = 0; i < b.rows * b.cols; ++i) {
      w[b.offset + i] = (2.0 * uniform01(rng) - 1.0) * bound;
    }
  };
  auto ones = [&](const ParameterLayout::Block& b) {
    std::fill_n(w.begin() + b.offset, b.rows * b.cols, 1.0);
  };
  fill(layout.depot_w, 3);
  fill(layout.depot_b, 3);
  fill(layout.house_w, 3);
  fill(layout.house_b, 3);
  for (const auto& layer : layout.layers) {
    for (const auto* b : {&layer.query, &layer.key, &layer.value, &layer.out}) {
      fill(*b, b->rows);
    }
    ones(layer.norm1_gain);
    fill(layer.ff1_w, layer.ff1_w.rows);
    fill(layer.ff1_b, layer.ff1_w.rows);
    fill(layer.ff2_w, layer.ff2_w.rows);
    fill(layer.ff2_b, layer.ff2_w.rows);
    ones(layer.norm2_gain);
  }
  fill(layout.node_proj, layout.node_proj.rows);
  fill(layout.graph_proj, layout.graph_proj.rows);
  fill(layout.step_proj, layout.step_proj.rows);
  fill(layout.glimpse_out, layout.glimpse_out.rows);

  PolicyParams params;
  params.arch = arch;
  params.seed = seed;
  params.weights.assign(w.begin(), w.end());
  return params;
}

DecoderState::DecoderState(std::size_t n_houses, int cap)
    : visited(n_houses, false), capacity(cap), remaining_capacity(cap) {}

std::vector<bool> DecoderState::mask(std::span<const int> demands) const {
  std::vector<bool> m(visited.size() + 1, false);
  // No depot-to-depot hops.
  m[0] = current == 0;
  for (std::size_t h = 0; h < visited.size(); ++h) {
    m[h + 1] = visited[h] || demands[h] > remaining_capacity;
  }
  return m;
}

void DecoderState::apply(std::size_t action, std::span<const int> demands) {
  if (action == 0) {
    remaining_capacity = capacity;
  } else {
    visited[action - 1] = true;
    ++n_visited;
    remaining_capacity -= demands[action - 1];
  }
  current = action;
}

struct AttentionModel::Encoded {
  Var nodes;
  Var fixed_context;
  std::vector<Var> glimpse_keys;    // per head
  std::vector<Var> glimpse_values;  // per head
  Var logit_keys;
  Var step_proj;
  Var glimpse_out;
};

AttentionModel::AttentionModel(const Architecture& arch, std::vector<double> weights)
    : arch_(arch), layout_(arch), weights_(std::move(weights)) {
  if (weights_.size() != layout_.total) {
    throw Error(ErrorCode::kShapeMismatch,
                fmt::format("{} weights for an architecture with {} parameters",
                            weights_.size(), layout_.total));
  }
}

AttentionModel::AttentionModel(const PolicyParams& params)
    : AttentionModel(params.arch,
                     std::vector<double>(params.weights.begin(), params.weights.end())) {}

PolicyParams AttentionModel::to_params(std::uint64_t seed) const {
  PolicyParams p;
  p.arch = arch_;
  p.seed = seed;
  p.weights.assign(weights_.begin(), weights_.end());
  return p;
}

Var AttentionModel::param(Tape& tape, const ParameterLayout::Block& b) const {
  return tape.parameter(weights_, b.offset, b.rows, b.cols);
}

Var AttentionModel::encode_on(Tape& tape, const NormalizedInstance& inst,
                              int capacity) const {
  const EvacInstance& base = inst.base;
  const auto n = static_cast<Eigen::Index>(base.size());
  const Eigen::Index d = arch_.embed_dim;
  const Eigen::Index dk = d / arch_.n_heads;
  const double inv_sqrt_dk = 1.0 / std::sqrt(static_cast<double>(dk));

  Matrix depot_x(1, 3);
  depot_x << base.depot.x, base.depot.y, 0.0;
  Matrix house_x(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    house_x(i, 0) = base.houses[i].x;
    house_x(i, 1) = base.houses[i].y;
    house_x(i, 2) = static_cast<double>(base.demands[i]) / capacity;
  }
  const Var depot_h = tape.add_row(
      tape.matmul(tape.constant(std::move(depot_x)), param(tape, layout_.depot_w)),
      param(tape, layout_.depot_b));
  const Var house_h = tape.add_row(
      tape.matmul(tape.constant(std::move(house_x)), param(tape, layout_.house_w)),
      param(tape, layout_.house_b));
  Var h = tape.vcat(depot_h, house_h);

  for (const auto& layer : layout_.layers) {
    const Var q = tape.matmul(h, param(tape, layer.query));
    const Var k = tape.matmul(h, param(tape, layer.key));
    const Var v = tape.matmul(h, param(tape, layer.value));
    std::vector<Var> heads;
    heads.reserve(arch_.n_heads);
    for (int head = 0; head < arch_.n_heads; ++head) {
      const Eigen::Index at = head * dk;
      const Var scores = tape.scale(
          tape.matmul_nt(tape.cols(q, at, dk), tape.cols(k, at, dk)), inv_sqrt_dk);
      heads.push_back(tape.matmul(tape.softmax_rows(scores), tape.cols(v, at, dk)));
    }
    const Var attended = tape.matmul(tape.hcat(heads), param(tape, layer.out));
    const Var h1 = tape.layer_norm(tape.add(h, attended), param(tape, layer.norm1_gain),
                                   param(tape, layer.norm1_bias));
    const Var hidden = tape.relu(
        tape.add_row(tape.matmul(h1, param(tape, layer.ff1_w)), param(tape, layer.ff1_b)));
    const Var ff = tape.add_row(tape.matmul(hidden, param(tape, layer.ff2_w)),
                                param(tape, layer.ff2_b));
    h = tape.layer_norm(tape.add(h1, ff), param(tape, layer.norm2_gain),
                        param(tape, layer.norm2_bias));
  }
  return h;
}

AttentionModel::Encoded AttentionModel::prepare(Tape& tape, Var nodes) const {
  const Eigen::Index d = arch_.embed_dim;
  const Eigen::Index dk = d / arch_.n_heads;
  Encoded enc;
  enc.nodes = nodes;
  enc.fixed_context =
      tape.matmul(tape.mean_rows(nodes), param(tape, layout_.graph_proj));
  const Var projected = tape.matmul(nodes, param(tape, layout_.node_proj));
  const Var keys = tape.cols(projected, 0, d);
  const Var values = tape.cols(projected, d, d);
  enc.logit_keys = tape.cols(projected, 2 * d, d);
  for (int head = 0; head < arch_.n_heads; ++head) {
    enc.glimpse_keys.push_back(tape.cols(keys, head * dk, dk));
    enc.glimpse_values.push_back(tape.cols(values, head * dk, dk));
  }
  enc.step_proj = param(tape, layout_.step_proj);
  enc.glimpse_out = param(tape, layout_.glimpse_out);
  return enc;
}

Var AttentionModel::step_logits(Tape& tape, const Encoded& enc,
                                const DecoderState& state,
                                const std::vector<bool>& mask) const {
  const Eigen::Index d = arch_.embed_dim;
  const Eigen::Index dk = d / arch_.n_heads;
  Matrix load(1, 1);
  load(0, 0) = static_cast<double>(state.remaining_capacity) / state.capacity;
  const Var ctx_in[] = {tape.row(enc.nodes, static_cast<Eigen::Index>(state.current)),
                        tape.constant(std::move(load))};
  const Var query =
      tape.add(enc.fixed_context, tape.matmul(tape.hcat(ctx_in), enc.step_proj));

  const double inv_sqrt_dk = 1.0 / std::sqrt(static_cast<double>(dk));
  std::vector<Var> heads;
  heads.reserve(arch_.n_heads);
  for (int head = 0; head < arch_.n_heads; ++head) {
    const Var qh = tape.cols(query, head * dk, dk);
    const Var scores =
        tape.scale(tape.matmul_nt(qh, enc.glimpse_keys[head]), inv_sqrt_dk);
    heads.push_back(
        tape.matmul(tape.softmax_rows(scores, &mask), enc.glimpse_values[head]));
  }
  const Var glimpse = tape.matmul(tape.hcat(heads), enc.glimpse_out);
  const Var compat = tape.scale(tape.matmul_nt(glimpse, enc.logit_keys),
                                1.0 / std::sqrt(static_cast<double>(d)));
  return tape.scale(tape.tanh(compat), kLogitClip);
}

Decoding AttentionModel::run_decoder(Tape& tape, const Encoded& enc,
                                     const NormalizedInstance& inst, int capacity,
                                     Mode mode, std::mt19937_64* rng,
                                     std::span<const std::size_t> forced,
                                     Var* log_prob_var) const {
  const EvacInstance& base = inst.base;
  if (capacity < 1 || base.max_demand() > capacity) {
    throw Error(ErrorCode::kDemandExceedsCapacity,
                fmt::format("largest household {} exceeds capacity {}",
                            base.max_demand(), capacity));
  }
  DecoderState state(base.size(), capacity);
  Decoding out;
  std::vector<Var> step_log_probs;
  std::size_t forced_at = 0;

  while (!state.done()) {
    const std::vector<bool> mask = state.mask(base.demands);
    std::size_t action = 0;
    const auto open = std::count(mask.begin(), mask.end(), false);
    if (mode == Mode::kForced) {
      if (forced_at >= forced.size()) {
        throw Error(ErrorCode::kInvalidPlan, "action sequence ends before all houses");
      }
      action = forced[forced_at++];
      if (action >= mask.size() || mask[action]) {
        throw Error(ErrorCode::kInvalidPlan,
                    fmt::format("action {} is masked at step {}", action, forced_at - 1));
      }
    }
    if (open == 1) {
      // Forced move: probability one, no contribution to the log-probability.
      if (mode != Mode::kForced) {
        action = static_cast<std::size_t>(std::find(mask.begin(), mask.end(), false) -
                                          mask.begin());
      }
    } else {
      const Var logits = step_logits(tape, enc, state, mask);
      const Eigen::RowVectorXd row = tape.value(logits).row(0);
      if (mode == Mode::kGreedy) {
        double best = -std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < row.size(); ++j) {
          if (!mask[j] && row[j] > best) {
            best = row[j];
            action = static_cast<std::size_t>(j);
          }
        }
      } else if (mode == Mode::kSample) {
        const Eigen::RowVectorXd p = masked_softmax(row, mask);
        const double u = uniform01(*rng);
        double acc = 0.0;
        std::size_t last_open = 0;
        bool picked = false;
        for (Eigen::Index j = 0; j < p.size(); ++j) {
          if (mask[j]) continue;
          last_open = static_cast<std::size_t>(j);
          acc += p[j];
          if (u < acc) {
            action = last_open;
            picked = true;
            break;
          }
        }
        if (!picked) action = last_open;
      }
      const Var lp = tape.log_softmax_pick(logits, mask, static_cast<Eigen::Index>(action));
      out.log_prob += tape.scalar(lp);
      step_log_probs.push_back(lp);
    }
    out.actions.push_back(action);
    state.apply(action, base.demands);
  }
  if (mode == Mode::kForced && forced_at != forced.size()) {
    throw Error(ErrorCode::kInvalidPlan, "action sequence continues past completion");
  }

  out.plan.instance_name = base.name;
  out.plan.capacity = capacity;
  std::vector<std::size_t> current;
  for (const std::size_t a : out.actions) {
    if (a == 0) {
      if (!current.empty()) out.plan.routes.push_back(make_route(std::move(current), inst));
      current.clear();
    } else {
      current.push_back(a - 1);
    }
  }
  if (log_prob_var) {
    if (step_log_probs.empty()) {
      *log_prob_var = tape.constant(Matrix::Zero(1, 1));
    } else {
      *log_prob_var = tape.sum_scalars(step_log_probs);
    }
  }
  return out;
}

Eigen::MatrixXd AttentionModel::encode(const NormalizedInstance& inst, int capacity) const {
  check_instance(inst.base);
  if (capacity < 1) throw Error(ErrorCode::kShapeMismatch, "capacity must be >= 1");
  Tape tape(false);
  return tape.value(encode_on(tape, inst, capacity));
}

namespace {

void check_embeddings(const Eigen::MatrixXd& emb, const NormalizedInstance& inst,
                      const Architecture& arch) {
  if (emb.rows() != static_cast<Eigen::Index>(inst.size() + 1) ||
      emb.cols() != arch.embed_dim) {
    throw Error(ErrorCode::kShapeMismatch,
                fmt::format("embeddings are {}x{}, expected {}x{}", emb.rows(),
                            emb.cols(), inst.size() + 1, arch.embed_dim));
  }
}

}  // namespace

Decoding AttentionModel::decode_greedy(const Eigen::MatrixXd& embeddings,
                                       const NormalizedInstance& inst,
                                       int capacity) const {
  check_embeddings(embeddings, inst, arch_);
  Tape tape(false);
  const Encoded enc = prepare(tape, tape.constant(embeddings));
  return run_decoder(tape, enc, inst, capacity, Mode::kGreedy, nullptr, {}, nullptr);
}

Decoding AttentionModel::decode_sample(const Eigen::MatrixXd& embeddings,
                                       const NormalizedInstance& inst, int capacity,
                                       std::uint64_t seed) const {
  check_embeddings(embeddings, inst, arch_);
  Tape tape(false);
  std::mt19937_64 rng(seed);
  const Encoded enc = prepare(tape, tape.constant(embeddings));
  return run_decoder(tape, enc, inst, capacity, Mode::kSample, &rng, {}, nullptr);
}

Decoding AttentionModel::greedy(const NormalizedInstance& inst, int capacity) const {
  return decode_greedy(encode(inst, capacity), inst, capacity);
}

Decoding AttentionModel::sample(const NormalizedInstance& inst, int capacity,
                                std::uint64_t seed) const {
  return decode_sample(encode(inst, capacity), inst, capacity, seed);
}

Decoding AttentionModel::rollout(Tape& tape, const NormalizedInstance& inst, int capacity,
                                 Mode mode, std::mt19937_64* rng,
                                 std::span<const std::size_t> forced,
                                 Var* log_prob_var) const {
  check_instance(inst.base);
  const Encoded enc = prepare(tape, encode_on(tape, inst, capacity));
  return run_decoder(tape, enc, inst, capacity, mode, rng, forced, log_prob_var);
}

Eigen::RowVectorXd AttentionModel::action_probabilities(
    const NormalizedInstance& inst, int capacity,
    std::span<const std::size_t> prefix) const {
  check_instance(inst.base);
  Tape tape(false);
  const Encoded enc = prepare(tape, encode_on(tape, inst, capacity));
  DecoderState state(inst.size(), capacity);
  for (const std::size_t a : prefix) {
    const auto mask = state.mask(inst.base.demands);
    if (a >= mask.size() || mask[a]) {
      throw Error(ErrorCode::kInvalidPlan, fmt::format("prefix action {} is masked", a));
    }
    state.apply(a, inst.base.demands);
  }
  if (state.done()) throw Error(ErrorCode::kInvalidPlan, "prefix already completes");
  const auto mask = state.mask(inst.base.demands);
  if (std::count(mask.begin(), mask.end(), false) == 1) {
    Eigen::RowVectorXd p = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(mask.size()));
    p[std::find(mask.begin(), mask.end(), false) - mask.begin()] = 1.0;
    return p;
  }
  const Var logits = step_logits(tape, enc, state, mask);
  return masked_softmax(tape.value(logits).row(0), mask);
}

double AttentionModel::log_prob(const NormalizedInstance& inst, int capacity,
                                std::span<const std::size_t> actions,
                                std::span<double> grad, double scale) const {
  const bool want_grad = !grad.empty();
  if (want_grad && grad.size() != weights_.size()) {
    throw Error(ErrorCode::kShapeMismatch, "gradient buffer has the wrong length");
  }
  Tape tape(want_grad);
  Var lp;
  const Decoding dec = rollout(tape, inst, capacity, Mode::kForced, nullptr, actions, &lp);
  if (want_grad) {
    tape.backward(lp, scale);
    tape.accumulate_parameter_grads(grad);
  }
  return dec.log_prob;
}

Eigen::MatrixXd encode(const NormalizedInstance& inst, int capacity,
                       const PolicyParams& params) {
  check_params(params);
  return AttentionModel(params).encode(inst, capacity);
}

FleetPlan decode_greedy(const Eigen::MatrixXd& embeddings, const NormalizedInstance& inst,
                        int capacity, const PolicyParams& params) {
  check_params(params);
  return AttentionModel(params).decode_greedy(embeddings, inst, capacity).plan;
}

std::pair<FleetPlan, double> decode_sample(const Eigen::MatrixXd& embeddings,
                                           const NormalizedInstance& inst, int capacity,
                                           const PolicyParams& params,
                                           std::uint64_t seed) {
  check_params(params);
  auto dec = AttentionModel(params).decode_sample(embeddings, inst, capacity, seed);
  return {std::move(dec.plan), dec.log_prob};
}

FleetPlan neural_solve(const NormalizedInstance& inst, int capacity,
                       const AttentionModel& model) {
  return model.greedy(inst, capacity).plan;
}

}  // namespace evacroute::nn
