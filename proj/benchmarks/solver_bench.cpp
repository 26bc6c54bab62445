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
#include <random>
#include <string>

#include <benchmark/benchmark.h>

#include "evacroute/instance.hpp"
#include "evacroute/scenario.hpp"
#include "evacroute/solver.hpp"

namespace {

using namespace evacroute;

NormalizedInstance dataset4() {
  static const NormalizedInstance inst = normalize(regenerate_demands(
      load_cvrplib_file(std::string(EVACROUTE_DATA_DIR) + "/A-n69-k9.vrp"), DemandModel{}));
  return inst;
}

NormalizedInstance random_unit(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  EvacInstance inst;
  inst.name = "bench";
  inst.depot = {0.5, 0.5};
  for (std::size_t i = 0; i < n; ++i) {
    inst.houses.push_back({u(rng), u(rng)});
    inst.demands.push_back(1 + static_cast<int>(i % 4));
  }
  return normalize(inst);
}

void BM_Sweep(benchmark::State& state) {
  const auto inst = dataset4();
  const int cap = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sweep_solve(inst, cap));
}
BENCHMARK(BM_Sweep)->Arg(64)->Arg(16)->Arg(4);

void BM_Exact(benchmark::State& state) {
  const auto inst = random_unit(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(exact_solve(inst, 10));
}
BENCHMARK(BM_Exact)->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond);

void BM_Validate(benchmark::State& state) {
  const auto inst = dataset4();
  const auto plan = sweep_solve(inst, 8);
  for (auto _ : state) benchmark::DoNotOptimize(validate(plan, inst.base, 8));
}
BENCHMARK(BM_Validate);

void BM_SweepScenarioCapacityTwo(benchmark::State& state) {
  const auto inst = regenerate_demands(
      load_cvrplib_file(std::string(EVACROUTE_DATA_DIR) + "/A-n69-k9.vrp"), DemandModel{});
  ScenarioConfig cfg;
  cfg.capacity = 2;
  for (auto _ : state) benchmark::DoNotOptimize(run_scenario(inst, cfg, SolverContext{}));
}
BENCHMARK(BM_SweepScenarioCapacityTwo);

}  // namespace
