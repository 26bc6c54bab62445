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
#include "evacroute/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <numbers>
#include <thread>

#include <fmt/format.h>

#include "evacroute/error.hpp"

namespace evacroute {

std::string_view to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::kSweep: return "sweep";
    case SolverKind::kNeural: return "neural";
    case SolverKind::kExact: return "exact";
  }
  return "unknown";
}

SolverKind solver_from_string(std::string_view name) {
  if (name == "sweep") return SolverKind::kSweep;
  if (name == "neural") return SolverKind::kNeural;
  if (name == "exact") return SolverKind::kExact;
  throw Error(ErrorCode::kInvalidConfig, fmt::format("unknown solver '{}'", name));
}

std::string_view to_string(TimelineClass c) {
  switch (c) {
    case TimelineClass::kSatisfactory: return "Satisfactory";
    case TimelineClass::kBorderline: return "Borderline";
    case TimelineClass::kNotAllowed: return "NotAllowed";
  }
  return "Unknown";
}

void check_scenario_config(const ScenarioConfig& cfg) {
  if (cfg.capacity < 1) throw Error(ErrorCode::kInvalidConfig, "capacity must be >= 1");
  if (!(cfg.satisfactory_hours < cfg.allowed_hours)) {
    throw Error(ErrorCode::kInvalidConfig,
                "satisfactory_hours must be below allowed_hours");
  }
  if (cfg.registry_size < 1) {
    throw Error(ErrorCode::kInvalidConfig, "registry_size must be >= 1");
  }
  check_time_model({cfg.speed_kmh, cfg.transit_hours});
}

TimelineClass classify_time(double total_hours, const ScenarioConfig& cfg) {
  if (total_hours < cfg.satisfactory_hours) return TimelineClass::kSatisfactory;
  if (total_hours <= cfg.allowed_hours) return TimelineClass::kBorderline;
  return TimelineClass::kNotAllowed;
}

std::optional<int> vehicles_for(int people_in_window, int registry_size) {
  if (people_in_window <= 0) return std::nullopt;
  return (registry_size + people_in_window - 1) / people_in_window;
}

FleetEstimate estimate_fleet(const ScenarioResult& result, const ScenarioConfig& cfg) {
  std::vector<int> loads;
  std::vector<double> hours;
  for (const auto& r : result.routes) {
    loads.push_back(r.picked_up);
    hours.push_back(r.time_hours);
  }
  FleetEstimate est;
  est.people_in_window = people_within_window(loads, hours, cfg.allowed_hours);
  est.vehicles = vehicles_for(est.people_in_window, cfg.registry_size);
  est.beyond_window = est.people_in_window < result.population;
  return est;
}

double pct_change_time(double t_dnn, double t_non) {
  if (!(t_non > 0.0)) {
    throw Error(ErrorCode::kDivisionByZero, "non-DNN time must be positive");
  }
  return (t_dnn - t_non) / t_non * 100.0;
}

double pct_change_routes(double r_dnn, double r_non) {
  if (!(r_non > 0.0)) {
    throw Error(ErrorCode::kDivisionByZero, "non-DNN route count must be positive");
  }
  return (r_dnn - r_non) / r_non * 100.0;
}

namespace {

FleetPlan solve_part(const NormalizedInstance& part, int capacity, SolverKind solver,
                     const SolverContext& ctx) {
  switch (solver) {
    case SolverKind::kSweep:
      return sweep_solve(part, capacity, ctx.sweep);
    case SolverKind::kExact:
      return exact_solve(part, capacity);
    case SolverKind::kNeural:
      if (!ctx.model) {
        throw Error(ErrorCode::kInvalidConfig, "neural solver needs a checkpoint");
      }
      return nn::neural_solve(part, capacity, *ctx.model);
  }
  throw Error(ErrorCode::kInvalidConfig, "unknown solver");
}

}  // namespace

ScenarioPlan solve_scenario(const EvacInstance& inst, int capacity, SolverKind solver,
                            const SolverContext& ctx) {
  if (capacity < 1) throw Error(ErrorCode::kInvalidConfig, "capacity must be >= 1");
  ScenarioPlan out;
  out.instance = normalize(inst);
  // Split after normalizing so every pass shares one coordinate frame.
  out.parts = split_parts(out.instance.base, capacity);
  for (const InstancePart& part : out.parts) {
    const NormalizedInstance view{part.instance, out.instance.scale_km_per_unit};
    FleetPlan plan = solve_part(view, capacity, solver, ctx);
    const auto report = validate(plan, part.instance, capacity);
    if (!report.ok()) {
      throw Error(ErrorCode::kInvalidPlan,
                  fmt::format("{} plan for {} has {} violation(s), first: {}",
                              to_string(solver), part.instance.name,
                              report.violations.size(),
                              describe(report.violations.front())));
    }
    out.plans.push_back(std::move(plan));
  }
  return out;
}

ScenarioResult evaluate_scenario(const ScenarioPlan& solved, const ScenarioConfig& cfg,
                                 std::string dataset, std::uint64_t seed,
                                 const SolverContext& ctx) {
  check_scenario_config(cfg);
  const TimeModel tm{cfg.speed_kmh, cfg.transit_hours};
  ScenarioResult r;
  r.dataset = std::move(dataset);
  r.houses = solved.instance.size();
  r.population = solved.instance.base.total_demand();
  r.capacity = cfg.capacity;
  r.transit_hours = cfg.transit_hours;
  r.solver = cfg.solver;
  r.seed = seed;
  if (cfg.solver == SolverKind::kNeural) r.checkpoint_hash = ctx.checkpoint_hash;
  r.n_parts = solved.parts.size();

  double travel = 0.0;
  for (std::size_t p = 0; p < solved.parts.size(); ++p) {
    const NormalizedInstance view{solved.parts[p].instance,
                                  solved.instance.scale_km_per_unit};
    const FleetPlan& plan = solved.plans[p];
    const TimeEvaluation eval = evaluate_time(plan, view, tm);
    for (std::size_t k = 0; k < plan.size(); ++k) {
      ScenarioResult::RouteDetail d;
      d.part = p;
      for (const std::size_t h : plan.routes[k].visits) {
        d.visits.push_back(solved.parts[p].house_ids[h]);
      }
      d.picked_up = plan.routes[k].picked_up;
      d.length_km = route_length_km(plan.routes[k].visits, view);
      d.time_hours = eval.per_route_hours[k];
      travel += d.length_km / tm.speed_kmh;
      r.routes.push_back(std::move(d));
    }
  }
  r.n_routes = r.routes.size();
  r.total_hours = travel + tm.transit_hours_per_route * static_cast<double>(r.n_routes);
  r.timeline = classify_time(r.total_hours, cfg);
  r.fleet = estimate_fleet(r, cfg);
  return r;
}

ScenarioResult run_scenario(const EvacInstance& inst, const ScenarioConfig& cfg,
                            const SolverContext& ctx, std::string dataset,
                            std::uint64_t seed) {
  check_scenario_config(cfg);
  const ScenarioPlan solved = solve_scenario(inst, cfg.capacity, cfg.solver, ctx);
  return evaluate_scenario(solved, cfg, std::move(dataset), seed, ctx);
}

PlanDocument to_document(const ScenarioPlan& solved, const ScenarioConfig& cfg) {
  const TimeModel tm{cfg.speed_kmh, cfg.transit_hours};
  PlanDocument doc;
  doc.transit_hours = cfg.transit_hours;
  doc.speed_kmh = cfg.speed_kmh;
  for (std::size_t p = 0; p < solved.parts.size(); ++p) {
    const NormalizedInstance view{solved.parts[p].instance,
                                  solved.instance.scale_km_per_unit};
    doc.parts.push_back({with_times(solved.plans[p], view, tm), view});
  }
  return doc;
}

Dataset load_dataset(const DatasetSpec& spec) {
  EvacInstance inst = load_cvrplib_file(spec.path);
  inst.side_km = spec.side_km;
  if (!spec.use_file_demands) {
    DemandModel model;
    model.seed = spec.demand_seed;
    inst = regenerate_demands(inst, model);
  }
  if (spec.houses) inst = truncate_instance(inst, *spec.houses);
  Dataset out;
  out.name = spec.name.empty() ? inst.name : spec.name;
  out.instance = std::move(inst);
  out.demand_seed = spec.demand_seed;
  return out;
}

unsigned threads_from_env() {
  const char* env = std::getenv("EVACROUTE_THREADS");
  unsigned n = 0;
  if (env && *env) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end && *end == '\0') n = static_cast<unsigned>(v);
  }
  return n;
}

GridOutput run_grid(std::span<const Dataset> datasets, const GridConfig& cfg,
                    const SolverContext& ctx_in, unsigned threads) {
  SolverContext ctx = ctx_in;
  ctx.sweep.start_angle_rad = cfg.sweep_start_angle_deg * std::numbers::pi / 180.0;

  struct Task {
    std::size_t dataset, capacity, solver;
  };
  std::vector<Task> tasks;
  for (std::size_t d = 0; d < datasets.size(); ++d) {
    for (std::size_t c = 0; c < cfg.capacities.size(); ++c) {
      for (std::size_t s = 0; s < cfg.solvers.size(); ++s) tasks.push_back({d, c, s});
    }
  }

  // Solving does not depend on transit time, so each task solves once and
  // evaluates every transit offset.
  std::vector<std::vector<ScenarioResult>> task_rows(tasks.size());
  auto run_task = [&](std::size_t t) {
    const Task& task = tasks[t];
    const Dataset& ds = datasets[task.dataset];
    ScenarioConfig sc = cfg.base;
    sc.capacity = cfg.capacities[task.capacity];
    sc.solver = cfg.solvers[task.solver];
    std::optional<ScenarioPlan> solved;
    std::string error;
    try {
      solved = solve_scenario(ds.instance, sc.capacity, sc.solver, ctx);
    } catch (const std::exception& e) {
      error = e.what();
    }
    for (const double transit : cfg.transit_hours) {
      sc.transit_hours = transit;
      ScenarioResult row;
      if (solved) {
        try {
          row = evaluate_scenario(*solved, sc, ds.name, ds.demand_seed, ctx);
        } catch (const std::exception& e) {
          error = e.what();
        }
      }
      if (!error.empty()) {
        row = ScenarioResult{};
        row.dataset = ds.name;
        row.houses = ds.instance.size();
        row.population = ds.instance.total_demand();
        row.capacity = sc.capacity;
        row.transit_hours = transit;
        row.solver = sc.solver;
        row.seed = ds.demand_seed;
        if (sc.solver == SolverKind::kNeural) row.checkpoint_hash = ctx.checkpoint_hash;
        row.failed = true;
        row.error = error;
      }
      task_rows[t].push_back(std::move(row));
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(tasks.size(), 1)));
  if (threads <= 1) {
    for (std::size_t t = 0; t < tasks.size(); ++t) run_task(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) {
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < tasks.size(); t = next++) run_task(t);
      });
    }
  }

  // Emit in (dataset, capacity, transit, solver) configuration order.
  GridOutput out;
  for (std::size_t d = 0; d < datasets.size(); ++d) {
    for (std::size_t c = 0; c < cfg.capacities.size(); ++c) {
      for (std::size_t tr = 0; tr < cfg.transit_hours.size(); ++tr) {
        for (std::size_t s = 0; s < cfg.solvers.size(); ++s) {
          const std::size_t t = (d * cfg.capacities.size() + c) * cfg.solvers.size() + s;
          out.rows.push_back(task_rows[t][tr]);
        }
      }
    }
  }
  out.comparison = compare_solvers(out.rows);
  return out;
}

std::vector<ComparisonRow> compare_solvers(std::span<const ScenarioResult> rows) {
  std::vector<ComparisonRow> out;
  using Key = std::tuple<std::string, int, double>;
  std::map<Key, const ScenarioResult*> sweep;
  for (const auto& r : rows) {
    if (r.solver == SolverKind::kSweep && !r.failed) {
      sweep[{r.dataset, r.capacity, r.transit_hours}] = &r;
    }
  }
  for (const auto& r : rows) {
    if (r.solver != SolverKind::kNeural || r.failed) continue;
    const auto it = sweep.find({r.dataset, r.capacity, r.transit_hours});
    if (it == sweep.end()) continue;
    const ScenarioResult& base = *it->second;
    out.push_back({r.dataset, r.capacity, r.transit_hours,
                   pct_change_time(r.total_hours, base.total_hours),
                   pct_change_routes(static_cast<double>(r.n_routes),
                                     static_cast<double>(base.n_routes))});
  }
  return out;
}

std::string results_csv(std::span<const ScenarioResult> rows) {
  std::string out =
      "dataset,houses,population,capacity,transit_hours,solver,total_hours,n_routes,"
      "timeline_class,vehicles_needed,seed,checkpoint_hash\n";
  for (const auto& r : rows) {
    const std::string hash = r.checkpoint_hash.empty() ? "-" : r.checkpoint_hash;
    if (r.failed) {
      out += fmt::format("{},{},{},{},{},{},,,failed,,{},{}\n", r.dataset, r.houses,
                         r.population, r.capacity, r.transit_hours, to_string(r.solver),
                         r.seed, hash);
      continue;
    }
    const std::string vehicles =
        r.fleet.vehicles ? std::to_string(*r.fleet.vehicles) : "beyond_window";
    out += fmt::format("{},{},{},{},{},{},{:.6f},{},{},{},{},{}\n", r.dataset, r.houses,
                       r.population, r.capacity, r.transit_hours, to_string(r.solver),
                       r.total_hours, r.n_routes, to_string(r.timeline), vehicles, r.seed,
                       hash);
  }
  return out;
}

std::string comparison_csv(std::span<const ComparisonRow> rows) {
  std::string out = "dataset,capacity,transit_hours,pct_change_time,pct_change_routes\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{:.6f},{:.6f}\n", r.dataset, r.capacity, r.transit_hours,
                       r.pct_change_time, r.pct_change_routes);
  }
  return out;
}

}  // namespace evacroute
