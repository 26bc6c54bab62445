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
#ifndef EVACROUTE_NN_POLICY_HPP_
#define EVACROUTE_NN_POLICY_HPP_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "evacroute/instance.hpp"
#include "evacroute/nn/tape.hpp"
#include "evacroute/solver.hpp"

namespace evacroute::nn {

struct Architecture {
  int embed_dim = 128;
  int n_heads = 8;
  int n_encoder_layers = 3;
  int feedforward_dim = 512;

  friend bool operator==(const Architecture&, const Architecture&) = default;
};

// Throws Error(kShapeMismatch) for non-positive sizes or embed_dim not
// divisible by n_heads.
void check_architecture(const Architecture& arch);
std::size_t parameter_count(const Architecture& arch);

/// Trained (or freshly initialized) attention-model weights.
struct PolicyParams {
  Architecture arch;
  std::vector<float> weights;
  std::uint64_t seed = 0;

  friend bool operator==(const PolicyParams&, const PolicyParams&) = default;
};

void check_params(const PolicyParams& params);
PolicyParams init_params(const Architecture& arch, std::uint64_t seed);

/// Offsets of every weight block inside the flat parameter vector. Blocks are
/// stored row-major, in the order the members are declared.
struct ParameterLayout {
  struct Block {
    std::size_t offset = 0;
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
  };
  struct EncoderLayer {
    Block query, key, value, out;
    Block norm1_gain, norm1_bias;
    Block ff1_w, ff1_b, ff2_w, ff2_b;
    Block norm2_gain, norm2_bias;
  };

  Block depot_w, depot_b;
  Block house_w, house_b;
  std::vector<EncoderLayer> layers;
  Block node_proj;   // d -> 3d: glimpse keys, glimpse values, logit keys
  Block graph_proj;  // d -> d
  Block step_proj;   // (d + 1) -> d: current node embedding and load left
  Block glimpse_out; // d -> d
  std::size_t total = 0;

  explicit ParameterLayout(const Architecture& arch);
};

inline constexpr double kLogitClip = 10.0;

/// What the decoder sees at one step.
struct DecoderState {
  std::vector<bool> visited;
  int capacity = 0;
  int remaining_capacity = 0;
  std::size_t current = 0;  // 0 is the depot, h + 1 is house h
  std::size_t n_visited = 0;

  DecoderState(std::size_t n_houses, int capacity);
  bool done() const noexcept { return n_visited == visited.size() && current == 0; }
  // One flag per node (depot first): true when the action is not allowed.
  std::vector<bool> mask(std::span<const int> demands) const;
  void apply(std::size_t action, std::span<const int> demands);
};

struct Decoding {
  FleetPlan plan;
  std::vector<std::size_t> actions;  // node indices, depot = 0
  double log_prob = 0.0;
};

/// The attention model: graph-attention encoder plus a masked pointer
/// decoder. Holds its weights in double precision.
class AttentionModel {
 public:
  AttentionModel(const Architecture& arch, std::vector<double> weights);
  explicit AttentionModel(const PolicyParams& params);

  const Architecture& arch() const noexcept { return arch_; }
  const ParameterLayout& layout() const noexcept { return layout_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::vector<double>& mutable_weights() noexcept { return weights_; }
  PolicyParams to_params(std::uint64_t seed) const;

  // Node embeddings, depot first then houses in order: (n + 1) x embed_dim.
  Eigen::MatrixXd encode(const NormalizedInstance& inst, int capacity) const;

  Decoding decode_greedy(const Eigen::MatrixXd& embeddings,
                         const NormalizedInstance& inst, int capacity) const;
  Decoding decode_sample(const Eigen::MatrixXd& embeddings,
                         const NormalizedInstance& inst, int capacity,
                         std::uint64_t seed) const;

  Decoding greedy(const NormalizedInstance& inst, int capacity) const;
  Decoding sample(const NormalizedInstance& inst, int capacity,
                  std::uint64_t seed) const;

  // Action probabilities after following `prefix` from the start state.
  Eigen::RowVectorXd action_probabilities(const NormalizedInstance& inst, int capacity,
                                          std::span<const std::size_t> prefix) const;

  // Log-probability of a complete action sequence; when grad is non-empty the
  // gradient d(scale * log_prob)/d(weights) is added into it.
  double log_prob(const NormalizedInstance& inst, int capacity,
                  std::span<const std::size_t> actions,
                  std::span<double> grad = {}, double scale = 1.0) const;

  enum class Mode { kGreedy, kSample, kForced };
  // Runs the full encoder and decoder on tape. forced is used in kForced mode.
  Decoding rollout(Tape& tape, const NormalizedInstance& inst, int capacity, Mode mode,
                   std::mt19937_64* rng, std::span<const std::size_t> forced,
                   Var* log_prob_var) const;

 private:
  struct Encoded;
  Var param(Tape& tape, const ParameterLayout::Block& b) const;
  Var encode_on(Tape& tape, const NormalizedInstance& inst, int capacity) const;
  Encoded prepare(Tape& tape, Var nodes) const;
  Var step_logits(Tape& tape, const Encoded& enc, const DecoderState& state,
                  const std::vector<bool>& mask) const;
  Decoding run_decoder(Tape& tape, const Encoded& enc, const NormalizedInstance& inst,
                       int capacity, Mode mode, std::mt19937_64* rng,
                       std::span<const std::size_t> forced, Var* log_prob_var) const;

  Architecture arch_;
  ParameterLayout layout_;
  std::vector<double> weights_;
};

Eigen::MatrixXd encode(const NormalizedInstance& inst, int capacity,
                       const PolicyParams& params);
FleetPlan decode_greedy(const Eigen::MatrixXd& embeddings, const NormalizedInstance& inst,
                        int capacity, const PolicyParams& params);
std::pair<FleetPlan, double> decode_sample(const Eigen::MatrixXd& embeddings,
                                           const NormalizedInstance& inst, int capacity,
                                           const PolicyParams& params, std::uint64_t seed);
// Encodes and decodes greedily in one call.
FleetPlan neural_solve(const NormalizedInstance& inst, int capacity,
                       const AttentionModel& model);

// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace evacroute::nn

#endif  // EVACROUTE_NN_POLICY_HPP_
