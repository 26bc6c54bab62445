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
// evacroute: solve, sweep a scenario grid, train the attention policy and
// render route maps.
//
// Exit codes: 0 success, 1 usage / I/O / parse error, 2 infeasible plan.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "evacroute/config.hpp"
#include "evacroute/error.hpp"
#include "evacroute/instance.hpp"
#include "evacroute/nn/checkpoint.hpp"
#include "evacroute/nn/train.hpp"
#include "evacroute/plan_json.hpp"
#include "evacroute/render.hpp"
#include "evacroute/scenario.hpp"

namespace fs = std::filesystem;
using namespace evacroute;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;

struct SolveArgs {
  std::string instance;
  std::string solver = "sweep";
  int capacity = 64;
  double transit = 0.0;
  std::optional<std::uint64_t> seed;
  bool file_demands = false;
  std::optional<std::size_t> houses;
  std::string checkpoint;
  std::string out;
  double speed = 8.0;
  double side_km = 3.0;
  double start_angle_deg = 0.0;
};

int cmd_solve(const SolveArgs& a) {
  const SolverKind solver = solver_from_string(a.solver);
  if (solver == SolverKind::kNeural && a.checkpoint.empty()) {
    std::cerr << "error: --checkpoint is required when --solver neural\n";
    return kExitUsage;
  }
  EvacInstance inst = load_cvrplib_file(a.instance);
  inst.side_km = a.side_km;
  const std::uint64_t seed = a.seed.value_or(0);
  if (!a.file_demands) {
    DemandModel model;
    model.seed = seed;
    inst = regenerate_demands(inst, model);
  }
  if (a.houses) inst = truncate_instance(inst, *a.houses);

  std::optional<nn::AttentionModel> model;
  SolverContext ctx;
  ctx.sweep.start_angle_rad = a.start_angle_deg * std::numbers::pi / 180.0;
  if (solver == SolverKind::kNeural) {
    const auto params = nn::read_checkpoint_file(a.checkpoint);
    model.emplace(params);
    ctx.model = &*model;
    ctx.checkpoint_hash = nn::checkpoint_hash(params);
  }

  ScenarioConfig cfg;
  cfg.capacity = a.capacity;
  cfg.transit_hours = a.transit;
  cfg.speed_kmh = a.speed;
  cfg.solver = solver;
  check_scenario_config(cfg);

  const ScenarioPlan solved = solve_scenario(inst, cfg.capacity, solver, ctx);
  const ScenarioResult result = evaluate_scenario(solved, cfg, inst.name, seed, ctx);
  const std::string json = plan_to_json(to_document(solved, cfg));
  if (a.out.empty() || a.out == "-") {
    std::cout << json;
  } else {
    write_text_file(a.out, json);
  }
  const std::string vehicles =
      result.fleet.vehicles ? std::to_string(*result.fleet.vehicles) : "beyond_window";
  std::cerr << fmt::format(
      "{}: solver {}, capacity {}, transit {} h, total {:.4f} hours, routes {}, parts: {}, "
      "class {}, vehicles for {} people: {}\n",
      inst.name, to_string(solver), cfg.capacity, cfg.transit_hours, result.total_hours,
      result.n_routes, result.n_parts, to_string(result.timeline), cfg.registry_size,
      vehicles);
  return kExitOk;
}

int cmd_grid(const std::string& config_path, const std::string& out_dir) {
  const GridConfig cfg = load_grid_config(config_path);
  std::vector<Dataset> datasets;
  for (const auto& spec : cfg.datasets) datasets.push_back(load_dataset(spec));

  std::optional<nn::AttentionModel> model;
  SolverContext ctx;
  if (cfg.checkpoint) {
    const auto params = nn::read_checkpoint_file(*cfg.checkpoint);
    model.emplace(params);
    ctx.model = &*model;
    ctx.checkpoint_hash = nn::checkpoint_hash(params);
  }
  const GridOutput out = run_grid(datasets, cfg, ctx, threads_from_env());
  fs::create_directories(out_dir);
  write_text_file((fs::path(out_dir) / "results.csv").string(), results_csv(out.rows));
  write_text_file((fs::path(out_dir) / "comparison.csv").string(),
                  comparison_csv(out.comparison));
  std::size_t failed = 0;
  for (const auto& r : out.rows) {
    if (r.failed) {
      ++failed;
      std::cerr << fmt::format("failed cell {} capacity {} transit {} {}: {}\n", r.dataset,
                               r.capacity, r.transit_hours, to_string(r.solver), r.error);
    }
  }
  std::cerr << fmt::format("{} rows ({} failed), {} comparison rows -> {}\n", out.rows.size(),
                           failed, out.comparison.size(), out_dir);
  return kExitOk;
}

int cmd_train(const std::string& config_path, const std::string& out,
              const std::string& log_path) {
  const nn::TrainConfig cfg = load_train_config(config_path);
  const auto result = nn::train_reinforce(cfg, std::nullopt, [](const nn::EpochLog& e) {
    std::cerr << fmt::format("epoch {}: sample {:.4f}, baseline {:.4f}{}\n", e.epoch,
                             e.mean_sample_cost, e.mean_greedy_cost,
                             e.baseline_swapped ? ", baseline replaced" : "");
  });
  nn::write_checkpoint_file(out, result.params);
  write_text_file(log_path.empty() ? out + ".log.csv" : log_path,
                  nn::training_log_csv(result.log));
  std::cerr << fmt::format("wrote {} ({})\n", out, nn::checkpoint_hash(result.params));
  return kExitOk;
}

int cmd_render(const std::string& plan_path, const std::string& out, bool show_depot_legs,
               int width, int height) {
  const PlanDocument doc = plan_from_json(read_text_file(plan_path));
  RenderSpec spec;
  spec.hide_depot_legs = !show_depot_legs;
  spec.width = width;
  spec.height = height;
  if (doc.parts.size() == 1) {
    write_text_file(out, render_svg(doc.parts.front(), doc.speed_kmh, doc.transit_hours, spec));
    return kExitOk;
  }
  const fs::path base(out);
  for (std::size_t p = 0; p < doc.parts.size(); ++p) {
    fs::path path = base;
    path.replace_filename(fmt::format("{}_part{}{}", base.stem().string(), p + 1,
                                      base.extension().string()));
    write_text_file(path.string(),
                    render_svg(doc.parts[p], doc.speed_kmh, doc.transit_hours, spec));
    std::cerr << "wrote " << path.string() << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evacuation routing under vehicle-capacity limits"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one instance and write the plan as JSON");
  solve_cmd->add_option("instance", solve.instance, "CVRPLIB instance file")->required();
  solve_cmd->add_option("--solver", solve.solver, "sweep, neural or exact")
      ->check(CLI::IsMember({"sweep", "neural", "exact"}));
  solve_cmd->add_option("--capacity", solve.capacity, "Persons per vehicle")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_option("--transit", solve.transit, "Hours added to every route")
      ->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--seed", solve.seed, "Household-size seed (default 0)");
  solve_cmd->add_flag("--file-demands", solve.file_demands,
                      "Keep the demands from the file instead of drawing households");
  solve_cmd->add_option("--houses", solve.houses, "Keep only the first N houses")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_option("--checkpoint", solve.checkpoint, "Policy checkpoint (neural only)");
  solve_cmd->add_option("--out", solve.out, "Plan JSON path (default stdout)");
  solve_cmd->add_option("--speed", solve.speed, "Vehicle speed in km/h")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_option("--side-km", solve.side_km, "Side of the neighborhood square")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_option("--start-angle", solve.start_angle_deg,
                        "Sweep start ray in degrees from +x");

  std::string grid_config, grid_out = "grid_out";
  auto* grid_cmd = app.add_subcommand("grid", "Run a scenario grid and write CSV tables");
  grid_cmd->add_option("config", grid_config, "Grid configuration JSON")->required();
  grid_cmd->add_option("--out-dir", grid_out, "Directory for results.csv and comparison.csv");

  std::string train_config, train_out, train_log;
  auto* train_cmd = app.add_subcommand("train", "Train the attention policy with REINFORCE");
  train_cmd->add_option("config", train_config, "Training configuration JSON")->required();
  train_cmd->add_option("--out", train_out, "Checkpoint path")->required();
  train_cmd->add_option("--log", train_log, "Training log CSV (default <out>.log.csv)");

  std::string render_plan, render_out;
  bool show_legs = false;
  int width = 1100, height = 800;
  auto* render_cmd = app.add_subcommand("render", "Draw a plan JSON as an SVG route map");
  render_cmd->add_option("plan", render_plan, "Plan JSON written by solve")->required();
  render_cmd->add_option("--out", render_out, "SVG path")->required();
  render_cmd->add_flag("--show-depot-legs", show_legs, "Draw the legs to and from the depot");
  render_cmd->add_option("--width", width, "Canvas width in px")->check(CLI::PositiveNumber);
  render_cmd->add_option("--height", height, "Canvas height in px")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*solve_cmd) return cmd_solve(solve);
    if (*grid_cmd) return cmd_grid(grid_config, grid_out);
    if (*train_cmd) return cmd_train(train_config, train_out, train_log);
    if (*render_cmd) {
      return cmd_render(render_plan, render_out, show_legs, width, height);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::kInvalidPlan ? kExitInfeasible : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
