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
#include "evacroute/nn/train.hpp"

#include <cmath>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>
#include <fmt/format.h>

#include "evacroute/error.hpp"

namespace evacroute::nn {

void check_train_config(const TrainConfig& cfg) {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kInvalidConfig, what);
  };
  if (cfg.batch_size == 0) fail("batch_size must be positive");
  if (cfg.n_epochs == 0) fail("n_epochs must be positive");
  if (cfg.instances_per_epoch == 0) fail("instances_per_epoch must be positive");
  if (cfg.instance_size_n == 0) fail("instance_size_n must be positive");
  if (cfg.eval_size < 2) fail("eval_size must be at least 2");
  if (!(cfg.learning_rate > 0.0)) fail("learning_rate must be positive");
  if (!(cfg.baseline_update_significance > 0.0 && cfg.baseline_update_significance < 1.0)) {
    fail("baseline_update_significance must lie in (0, 1)");
  }
  if (!(cfg.max_grad_norm >= 0.0)) fail("max_grad_norm must be >= 0");
  if (cfg.capacity < cfg.demands.max_size) {
    fail(fmt::format("capacity {} is below the largest household {}", cfg.capacity,
                     cfg.demands.max_size));
  }
  check_architecture(cfg.arch);
  check_demand_model(cfg.demands);
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

NormalizedInstance random_instance(std::size_t n_houses, const DemandModel& demands,
                                   std::uint64_t seed, double side_km) {
  std::mt19937_64 rng(seed);
  NormalizedInstance inst;
  inst.base.name = fmt::format("random-n{}-{:016x}", n_houses, seed);
  inst.base.side_km = side_km;
  inst.scale_km_per_unit = side_km;
  inst.base.depot = {uniform01(rng), uniform01(rng)};
  while (inst.base.houses.size() < n_houses) {
    const Point p{uniform01(rng), uniform01(rng)};
    if (p != inst.base.depot) inst.base.houses.push_back(p);
  }
  DemandModel model = demands;
  model.seed = mix_seed(seed, 0xde3a);
  inst.base.demands = sample_household_sizes(n_houses, model);
  return inst;
}

std::vector<NormalizedInstance> random_instances(std::size_t count, std::size_t n_houses,
                                                 const DemandModel& demands,
                                                 std::uint64_t seed) {
  std::vector<NormalizedInstance> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(random_instance(n_houses, demands, mix_seed(seed, i)));
  }
  return out;
}

double plan_cost(const FleetPlan& plan, const NormalizedInstance& inst) {
  return plan_length_units(plan, inst.base);
}

double mean_greedy_cost(const AttentionModel& model,
                        std::span<const NormalizedInstance> instances, int capacity) {
  double total = 0.0;
  for (const auto& inst : instances) total += plan_cost(model.greedy(inst, capacity).plan, inst);
  return total / static_cast<double>(instances.size());
}

std::vector<double> reinforce_gradient(const AttentionModel& model,
                                       std::span<const Episode> episodes) {
  std::vector<double> grad(model.weights().size(), 0.0);
  const double inv_b = 1.0 / static_cast<double>(episodes.size());
  for (const Episode& ep : episodes) {
    if (ep.advantage == 0.0) continue;
    model.log_prob(*ep.instance, ep.capacity, ep.actions, grad, ep.advantage * inv_b);
  }
  return grad;
}

double paired_one_sided_p_value(std::span<const double> candidate,
                                std::span<const double> baseline) {
  const std::size_t n = candidate.size();
  if (n != baseline.size() || n < 2) {
    throw Error(ErrorCode::kShapeMismatch, "paired test needs two equal samples of >= 2");
  }
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += candidate[i] - baseline[i];
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = candidate[i] - baseline[i] - mean;
    ss += d * d;
  }
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (sd == 0.0) return mean < 0.0 ? 0.0 : 1.0;
  const double t = mean / (sd / std::sqrt(static_cast<double>(n)));
  const boost::math::students_t dist(static_cast<double>(n - 1));
  return boost::math::cdf(dist, t);
}

namespace {

class Updater {
 public:
  Updater(const TrainConfig& cfg, std::size_t size)
      : cfg_(cfg), m_(cfg.optimizer == Optimizer::kAdam ? size : 0, 0.0),
        v_(m_.size(), 0.0) {}

  void step(std::vector<double>& w, const std::vector<double>& g) {
    if (cfg_.optimizer == Optimizer::kSgd) {
      for (std::size_t i = 0; i < w.size(); ++i) w[i] -= cfg_.learning_rate * g[i];
      return;
    }
    constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
    ++t_;
    const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(t_));
    for (std::size_t i = 0; i < w.size(); ++i) {
      m_[i] = kBeta1 * m_[i] + (1.0 - kBeta1) * g[i];
      v_[i] = kBeta2 * v_[i] + (1.0 - kBeta2) * g[i] * g[i];
      w[i] -= cfg_.learning_rate * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + kEps);
    }
  }

 private:
  const TrainConfig& cfg_;
  std::vector<double> m_, v_;
  std::uint64_t t_ = 0;
};

std::vector<double> greedy_costs(const AttentionModel& model,
                                 std::span<const NormalizedInstance> instances,
                                 int capacity) {
  std::vector<double> out;
  out.reserve(instances.size());
  for (const auto& inst : instances) out.push_back(plan_cost(model.greedy(inst, capacity).plan, inst));
  return out;
}

// Salts separating the RNG streams derived from cfg.seed.
constexpr std::uint64_t kTrainStream = 1, kSampleStream = 2, kEvalStream = 3, kInitStream = 4;

}  // namespace

TrainResult train_reinforce(const TrainConfig& cfg, const std::optional<PolicyParams>& init,
                            const std::function<void(const EpochLog&)>& on_epoch) {
  check_train_config(cfg);
  const PolicyParams start =
      init ? *init : init_params(cfg.arch, mix_seed(cfg.seed, kInitStream));
  check_params(start);
  AttentionModel model(start);
  AttentionModel baseline = model;
  Updater updater(cfg, model.weights().size());

  auto eval_set = random_instances(cfg.eval_size, cfg.instance_size_n, cfg.demands,
                                   mix_seed(cfg.seed, kEvalStream));
  auto baseline_eval = greedy_costs(baseline, eval_set, cfg.capacity);

  TrainResult result;
  std::vector<double> grad(model.weights().size());
  for (std::size_t epoch = 0; epoch < cfg.n_epochs; ++epoch) {
    const std::uint64_t epoch_seed = mix_seed(mix_seed(cfg.seed, kTrainStream), epoch);
    const auto data = random_instances(cfg.instances_per_epoch, cfg.instance_size_n,
                                       cfg.demands, epoch_seed);
    double sum_sample = 0.0, sum_greedy = 0.0;

    for (std::size_t start_i = 0; start_i < data.size(); start_i += cfg.batch_size) {
      const std::size_t end_i = std::min(data.size(), start_i + cfg.batch_size);
      const double inv_b = 1.0 / static_cast<double>(end_i - start_i);
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t i = start_i; i < end_i; ++i) {
        const NormalizedInstance& inst = data[i];
        std::mt19937_64 rng(mix_seed(mix_seed(epoch_seed, kSampleStream), i));
        Tape tape(true);
        Var log_prob;
        const Decoding sampled = model.rollout(tape, inst, cfg.capacity,
                                               AttentionModel::Mode::kSample, &rng, {},
                                               &log_prob);
        const double cost = plan_cost(sampled.plan, inst);
        const double base_cost = plan_cost(baseline.greedy(inst, cfg.capacity).plan, inst);
        const double advantage = cost - base_cost;
        if (!std::isfinite(advantage) || !std::isfinite(sampled.log_prob)) {
          throw Error(ErrorCode::kNonFiniteLoss,
                      fmt::format("epoch {} instance {}: cost {} baseline {} log_prob {}",
                                  epoch, i, cost, base_cost, sampled.log_prob));
        }
        sum_sample += cost;
        sum_greedy += base_cost;
        if (advantage != 0.0) {
          tape.backward(log_prob, advantage * inv_b);
          tape.accumulate_parameter_grads(grad);
        }
      }
      double norm2 = 0.0;
      for (const double g : grad) norm2 += g * g;
      const double norm = std::sqrt(norm2);
      if (!std::isfinite(norm)) {
        throw Error(ErrorCode::kNonFiniteLoss,
                    fmt::format("epoch {} batch at {}: gradient norm {}", epoch, start_i, norm));
      }
      if (cfg.max_grad_norm > 0.0 && norm > cfg.max_grad_norm) {
        const double s = cfg.max_grad_norm / norm;
        for (double& g : grad) g *= s;
      }
      updater.step(model.mutable_weights(), grad);
    }

    EpochLog entry;
    entry.epoch = epoch;
    entry.mean_sample_cost = sum_sample / static_cast<double>(data.size());
    entry.mean_greedy_cost = sum_greedy / static_cast<double>(data.size());

    const auto candidate_eval = greedy_costs(model, eval_set, cfg.capacity);
    const double cand_mean =
        std::accumulate(candidate_eval.begin(), candidate_eval.end(), 0.0);
    const double base_mean =
        std::accumulate(baseline_eval.begin(), baseline_eval.end(), 0.0);
    if (cand_mean < base_mean &&
        paired_one_sided_p_value(candidate_eval, baseline_eval) <
            cfg.baseline_update_significance) {
      baseline = model;
      entry.baseline_swapped = true;
      eval_set = random_instances(cfg.eval_size, cfg.instance_size_n, cfg.demands,
                                  mix_seed(mix_seed(cfg.seed, kEvalStream), epoch + 1));
      baseline_eval = greedy_costs(baseline, eval_set, cfg.capacity);
    }
    result.log.push_back(entry);
    if (on_epoch) on_epoch(entry);
  }
  result.params = model.to_params(start.seed);
  return result;
}

std::string training_log_csv(std::span<const EpochLog> log) {
  std::string out = "epoch,mean_sample_cost,mean_greedy_cost,baseline_swapped\n";
  for (const auto& e : log) {
    out += fmt::format("{},{:.6f},{:.6f},{}\n", e.epoch, e.mean_sample_cost,
                       e.mean_greedy_cost, e.baseline_swapped ? 1 : 0);
  }
  return out;
}

}  // namespace evacroute::nn
