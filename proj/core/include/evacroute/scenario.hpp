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
#ifndef EVACROUTE_SCENARIO_HPP_
#define EVACROUTE_SCENARIO_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evacroute/instance.hpp"
#include "evacroute/nn/policy.hpp"
#include "evacroute/plan_json.hpp"
#include "evacroute/solver.hpp"

namespace evacroute {

enum class SolverKind { kSweep, kNeural, kExact };

std::string_view to_string(SolverKind kind);
// Accepts "sweep", "neural", "exact".
SolverKind solver_from_string(std::string_view name);

// Ordered: Satisfactory < Borderline < NotAllowed.
enum class TimelineClass { kSatisfactory, kBorderline, kNotAllowed };

std::string_view to_string(TimelineClass c);

struct ScenarioConfig {
  int capacity = 64;
  double transit_hours = 0.0;
  double speed_kmh = 8.0;
  double satisfactory_hours = 24.0;
  double allowed_hours = 42.0;
  int registry_size = 4000;
  SolverKind solver = SolverKind::kSweep;
};

void check_scenario_config(const ScenarioConfig& cfg);

// < satisfactory -> Satisfactory; [satisfactory, allowed] -> Borderline;
// > allowed -> NotAllowed.
TimelineClass classify_time(double total_hours, const ScenarioConfig& cfg);

struct FleetEstimate {
  int people_in_window = 0;
  std::optional<int> vehicles;  // empty when no route completes in the window
  // True whenever the neighborhood is not fully evacuated inside the window;
  // vehicles (if any) is then based on the completed prefix only.
  bool beyond_window = false;
};

// ceil(registry / people) or empty for people == 0.
std::optional<int> vehicles_for(int people_in_window, int registry_size);

/// One row of the experiment grid.
struct ScenarioResult {
  struct RouteDetail {
    std::size_t part = 0;
    std::vector<std::size_t> visits;  // house indices of the source instance
    int picked_up = 0;
    double length_km = 0.0;
    double time_hours = 0.0;
  };

  std::string dataset;
  std::size_t houses = 0;
  int population = 0;
  int capacity = 0;
  double transit_hours = 0.0;
  SolverKind solver = SolverKind::kSweep;
  double total_hours = 0.0;
  std::size_t n_routes = 0;
  std::size_t n_parts = 0;
  TimelineClass timeline = TimelineClass::kSatisfactory;
  FleetEstimate fleet;
  std::vector<RouteDetail> routes;
  std::uint64_t seed = 0;
  std::string checkpoint_hash;
  bool failed = false;
  std::string error;
};

FleetEstimate estimate_fleet(const ScenarioResult& result, const ScenarioConfig& cfg);

// (t_dnn - t_non) / t_non * 100. Throws Error(kDivisionByZero) unless t_non > 0.
double pct_change_time(double t_dnn, double t_non);
double pct_change_routes(double r_dnn, double r_non);

struct SolverContext {
  const nn::AttentionModel* model = nullptr;  // required for kNeural
  std::string checkpoint_hash;
  SweepOptions sweep;
};

/// Plans for every pass of a scenario, before any time model is applied.
struct ScenarioPlan {
  NormalizedInstance instance;
  std::vector<InstancePart> parts;  // parts[i].instance is normalized
  std::vector<FleetPlan> plans;     // one per part
};

// Normalizes once, splits households larger than the capacity into passes,
// solves each pass and validates it. Throws Error(kInvalidPlan) when a solver
// emits an infeasible plan.
ScenarioPlan solve_scenario(const EvacInstance& inst, int capacity, SolverKind solver,
                            const SolverContext& ctx);

// Applies the time model, classification and fleet estimate to solved plans.
ScenarioResult evaluate_scenario(const ScenarioPlan& solved, const ScenarioConfig& cfg,
                                 std::string dataset, std::uint64_t seed,
                                 const SolverContext& ctx);

ScenarioResult run_scenario(const EvacInstance& inst, const ScenarioConfig& cfg,
                            const SolverContext& ctx, std::string dataset = {},
                            std::uint64_t seed = 0);

// Plan document with per-route times under cfg, as written by evacroute solve.
PlanDocument to_document(const ScenarioPlan& solved, const ScenarioConfig& cfg);

/// A named instance with its household demands already drawn.
struct Dataset {
  std::string name;
  EvacInstance instance;
  std::uint64_t demand_seed = 0;
};

struct DatasetSpec {
  std::string name;
  std::string path;
  std::optional<std::size_t> houses;  // keep the first k houses
  std::uint64_t demand_seed = 0;
  bool use_file_demands = false;
  double side_km = 3.0;
};

// Parses the file, draws demands for every house in the file, then truncates;
// a truncated dataset therefore shares its households with the full one.
Dataset load_dataset(const DatasetSpec& spec);

struct GridConfig {
  std::vector<DatasetSpec> datasets;
  std::vector<int> capacities{64, 32, 16, 8, 4, 2};
  std::vector<double> transit_hours{0.0, 0.5, 1.0, 2.0};
  std::vector<SolverKind> solvers{SolverKind::kSweep, SolverKind::kNeural};
  std::optional<std::string> checkpoint;
  ScenarioConfig base;  // capacity, transit and solver are overridden per cell
  double sweep_start_angle_deg = 0.0;
};

struct ComparisonRow {
  std::string dataset;
  int capacity = 0;
  double transit_hours = 0.0;
  double pct_change_time = 0.0;
  double pct_change_routes = 0.0;
};

struct GridOutput {
  std::vector<ScenarioResult> rows;
  std::vector<ComparisonRow> comparison;
};

// Every (dataset, capacity, transit, solver) cell, rows ordered by that key in
// configuration order. Failing cells are kept and marked failed. threads == 0
// uses the hardware concurrency.
GridOutput run_grid(std::span<const Dataset> datasets, const GridConfig& cfg,
                    const SolverContext& ctx, unsigned threads = 1);

// Comparison of neural against sweep for every cell where both succeeded.
std::vector<ComparisonRow> compare_solvers(std::span<const ScenarioResult> rows);

std::string results_csv(std::span<const ScenarioResult> rows);
std::string comparison_csv(std::span<const ComparisonRow> rows);

// EVACROUTE_THREADS, 0 or unset meaning hardware concurrency.
unsigned threads_from_env();

}  // namespace evacroute

#endif  // EVACROUTE_SCENARIO_HPP_
