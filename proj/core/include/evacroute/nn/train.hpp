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
#ifndef EVACROUTE_NN_TRAIN_HPP_
#define EVACROUTE_NN_TRAIN_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evacroute/instance.hpp"
#include "evacroute/nn/policy.hpp"

namespace evacroute::nn {

enum class Optimizer { kSgd, kAdam };

struct TrainConfig {
  std::size_t batch_size = 32;
  std::size_t n_epochs = 1;
  std::size_t instances_per_epoch = 2000;
  double learning_rate = 1e-3;
  // One-sided paired t-test level for replacing the greedy baseline policy.
  double baseline_update_significance = 0.05;
  std::size_t instance_size_n = 10;
  int capacity = 20;
  std::uint64_t seed = 1;

  std::size_t eval_size = 256;  // held-out instances for the baseline test
  double max_grad_norm = 1.0;   // 0 disables clipping
  Optimizer optimizer = Optimizer::kSgd;
  Architecture arch;
  DemandModel demands;  // seed field unused; per-instance seeds are derived
};

void check_train_config(const TrainConfig& cfg);

struct EpochLog {
  std::size_t epoch = 0;
  double mean_sample_cost = 0.0;
  double mean_greedy_cost = 0.0;  // greedy rollout of the baseline policy
  bool baseline_swapped = false;

  friend bool operator==(const EpochLog&, const EpochLog&) = default;
};

struct TrainResult {
  PolicyParams params;
  std::vector<EpochLog> log;
};

// SplitMix64 finalizer over a running state; derives independent RNG streams.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

// Depot and houses uniform in the unit square; demands from the household model.
NormalizedInstance random_instance(std::size_t n_houses, const DemandModel& demands,
                                   std::uint64_t seed, double side_km = 3.0);
std::vector<NormalizedInstance> random_instances(std::size_t count, std::size_t n_houses,
                                                 const DemandModel& demands,
                                                 std::uint64_t seed);

// Tour length in normalized units; the training cost.
double plan_cost(const FleetPlan& plan, const NormalizedInstance& inst);
double mean_greedy_cost(const AttentionModel& model,
                        std::span<const NormalizedInstance> instances, int capacity);

struct Episode {
  const NormalizedInstance* instance = nullptr;
  int capacity = 0;
  std::vector<std::size_t> actions;
  double advantage = 0.0;  // sampled cost minus baseline cost
};

// mean_i advantage_i * d log p(actions_i) / d weights
std::vector<double> reinforce_gradient(const AttentionModel& model,
                                       std::span<const Episode> episodes);

// p-value of the one-sided paired t-test that candidate costs are lower.
double paired_one_sided_p_value(std::span<const double> candidate,
                                std::span<const double> baseline);

// REINFORCE with a greedy-rollout baseline. Throws Error(kNonFiniteLoss) if a
// cost or gradient stops being finite.
TrainResult train_reinforce(const TrainConfig& cfg,
                            const std::optional<PolicyParams>& init = std::nullopt,
                            const std::function<void(const EpochLog&)>& on_epoch = {});

// CSV with header epoch,mean_sample_cost,mean_greedy_cost,baseline_swapped
std::string training_log_csv(std::span<const EpochLog> log);

}  // namespace evacroute::nn

#endif  // EVACROUTE_NN_TRAIN_HPP_
