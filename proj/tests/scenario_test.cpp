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
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include <gtest/gtest.h>

#include "evacroute/error.hpp"
#include "evacroute/nn/checkpoint.hpp"
#include "evacroute/scenario.hpp"
#include "support.hpp"

namespace evacroute {
namespace {

using testing::data_path;
using testing::make_instance;

std::vector<Dataset> standard_datasets() {
  std::vector<DatasetSpec> specs{
      {"dataset1", data_path("A-n36-k5.vrp"), 20, 101, false, 3.0},
      {"dataset2", data_path("A-n36-k5.vrp"), std::nullopt, 102, false, 3.0},
      {"dataset3", data_path("A-n53-k7.vrp"), std::nullopt, 103, false, 3.0},
      {"dataset4", data_path("A-n69-k9.vrp"), std::nullopt, 104, false, 3.0},
  };
  std::vector<Dataset> out;
  for (const auto& s : specs) out.push_back(load_dataset(s));
  return out;
}

TEST(Classify, Boundaries) {
  const ScenarioConfig cfg;
  EXPECT_EQ(classify_time(23.9, cfg), TimelineClass::kSatisfactory);
  EXPECT_EQ(classify_time(23.999, cfg), TimelineClass::kSatisfactory);
  EXPECT_EQ(classify_time(24.0, cfg), TimelineClass::kBorderline);
  EXPECT_EQ(classify_time(42.0, cfg), TimelineClass::kBorderline);
  EXPECT_EQ(classify_time(42.0001, cfg), TimelineClass::kNotAllowed);
}

TEST(Classify, Monotone) {
  const ScenarioConfig cfg;
  TimelineClass prev = TimelineClass::kSatisfactory;
  for (double t = 0.0; t < 80.0; t += 0.125) {
    const TimelineClass c = classify_time(t, cfg);
    EXPECT_GE(static_cast<int>(c), static_cast<int>(prev));
    prev = c;
  }
}

TEST(Fleet, Examples) {
  EXPECT_EQ(vehicles_for(168, 4000), 24);
  EXPECT_EQ(vehicles_for(4000, 4000), 1);
  EXPECT_EQ(vehicles_for(0, 4000), std::nullopt);
}

TEST(Fleet, Antitone) {
  std::optional<int> prev = vehicles_for(1, 4000);
  for (int p = 2; p < 5000; ++p) {
    const auto v = vehicles_for(p, 4000);
    EXPECT_LE(*v, *prev);
    prev = v;
  }
}

TEST(Fleet, FromScenarioResult) {
  ScenarioResult r;
  r.population = 168;
  r.routes = {{0, {0}, 100, 1.0, 14.0}, {0, {1}, 68, 1.0, 16.0}};
  const auto est = estimate_fleet(r, ScenarioConfig{});
  EXPECT_EQ(est.people_in_window, 168);
  EXPECT_EQ(est.vehicles, 24);
  EXPECT_FALSE(est.beyond_window);

  r.routes = {{0, {0}, 100, 1.0, 43.0}, {0, {1}, 68, 1.0, 1.0}};
  const auto none = estimate_fleet(r, ScenarioConfig{});
  EXPECT_EQ(none.people_in_window, 0);
  EXPECT_FALSE(none.vehicles);
  EXPECT_TRUE(none.beyond_window);
}

TEST(Metrics, PercentChanges) {
  EXPECT_EQ(pct_change_time(10, 10), 0.0);
  EXPECT_EQ(pct_change_time(8, 10), -20.0);
  EXPECT_EQ(pct_change_routes(7, 7), 0.0);
  EXPECT_EQ(pct_change_routes(11, 10), 10.0);
  EXPECT_THROW(pct_change_time(1, 0), Error);
  EXPECT_THROW(pct_change_routes(1, 0), Error);
}

TEST(Scenario, CapacityTwoSplitsIntoTwoParts) {
  auto inst = load_dataset({"d", data_path("A-n36-k5.vrp"), 20, 101, false, 3.0}).instance;
  ASSERT_GT(inst.max_demand(), 2);
  ScenarioConfig cfg;
  cfg.capacity = 2;
  const auto r = run_scenario(inst, cfg, SolverContext{}, "d", 101);
  EXPECT_EQ(r.n_parts, 2u);
  int carried = 0;
  for (const auto& route : r.routes) carried += route.picked_up;
  EXPECT_EQ(carried, inst.total_demand());
}

TEST(Scenario, RoutesReferToSourceHouses) {
  auto inst = make_instance({0, 0}, {{1, 0}, {0, 1}, {1, 1}}, {3, 1, 4});
  ScenarioConfig cfg;
  cfg.capacity = 2;
  const auto r = run_scenario(inst, cfg, SolverContext{});
  std::vector<int> per_house(3, 0);
  for (const auto& route : r.routes) {
    for (std::size_t h : route.visits) per_house[h] += 1;
  }
  EXPECT_EQ(per_house, (std::vector<int>{2, 1, 2}));
}

TEST(Scenario, NeuralNeedsModel) {
  auto inst = make_instance({0, 0}, {{1, 0}}, {1});
  ScenarioConfig cfg;
  cfg.solver = SolverKind::kNeural;
  EXPECT_THROW(run_scenario(inst, cfg, SolverContext{}), Error);
}

TEST(Scenario, SolverNames) {
  for (auto k : {SolverKind::kSweep, SolverKind::kNeural, SolverKind::kExact}) {
    EXPECT_EQ(solver_from_string(to_string(k)), k);
  }
  EXPECT_THROW(solver_from_string("tabu"), Error);
  EXPECT_EQ(to_string(TimelineClass::kNotAllowed), "NotAllowed");
}

class FullGrid : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    model_ = new nn::AttentionModel(nn::init_params(nn::Architecture{32, 4, 2, 64}, 9));
    datasets_ = new std::vector<Dataset>(standard_datasets());
    GridConfig cfg;
    SolverContext ctx;
    ctx.model = model_;
    ctx.checkpoint_hash = nn::checkpoint_hash(model_->to_params(9));
    output_ = new GridOutput(run_grid(*datasets_, cfg, ctx, 2));
  }
  static void TearDownTestSuite() {
    delete output_;
    delete datasets_;
    delete model_;
  }
  static nn::AttentionModel* model_;
  static std::vector<Dataset>* datasets_;
  static GridOutput* output_;
};

nn::AttentionModel* FullGrid::model_ = nullptr;
std::vector<Dataset>* FullGrid::datasets_ = nullptr;
GridOutput* FullGrid::output_ = nullptr;

TEST_F(FullGrid, ShapeAndNoFailures) {
  EXPECT_EQ(output_->rows.size(), 192u);
  for (const auto& r : output_->rows) EXPECT_FALSE(r.failed) << r.error;
  EXPECT_EQ(output_->comparison.size(), 96u);
}

TEST_F(FullGrid, RouteCountLowerBound) {
  for (const auto& r : output_->rows) {
    const int bound = (r.population + r.capacity - 1) / r.capacity;
    EXPECT_GE(static_cast<int>(r.n_routes), bound);
  }
}

TEST_F(FullGrid, TransitIsAdditive) {
  const auto& rows = output_->rows;
  for (const auto& r : rows) {
    if (r.transit_hours != 2.0) continue;
    const auto base = std::find_if(rows.begin(), rows.end(), [&](const ScenarioResult& o) {
      return o.dataset == r.dataset && o.capacity == r.capacity && o.solver == r.solver &&
             o.transit_hours == 0.0;
    });
    ASSERT_NE(base, rows.end());
    EXPECT_NEAR(r.total_hours, base->total_hours + 2.0 * static_cast<double>(r.n_routes), 1e-9);
  }
}

TEST_F(FullGrid, CapacityTwoHasTwoParts) {
  for (const auto& r : output_->rows) {
    if (r.capacity == 2) {
      EXPECT_EQ(r.n_parts, 2u);
    } else {
      EXPECT_EQ(r.n_parts, 1u);
    }
  }
}

TEST_F(FullGrid, CsvShape) {
  const std::string csv = results_csv(output_->rows);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line,
            "dataset,houses,population,capacity,transit_hours,solver,total_hours,n_routes,"
            "timeline_class,vehicles_needed,seed,checkpoint_hash");
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 11) << line;
  }
  EXPECT_EQ(n, 192);
  const std::string cmp = comparison_csv(output_->comparison);
  EXPECT_EQ(cmp.substr(0, cmp.find('\n')),
            "dataset,capacity,transit_hours,pct_change_time,pct_change_routes");
}

TEST_F(FullGrid, DeterministicAcrossThreadCounts) {
  SolverContext ctx;
  ctx.model = model_;
  ctx.checkpoint_hash = nn::checkpoint_hash(model_->to_params(9));
  GridConfig cfg;
  cfg.capacities = {16, 2};
  const auto one = run_grid(*datasets_, cfg, ctx, 1);
  const auto three = run_grid(*datasets_, cfg, ctx, 3);
  EXPECT_EQ(results_csv(one.rows), results_csv(three.rows));
}

TEST(Grid, FailedCellDoesNotAbort) {
  std::vector<Dataset> ds{{"tiny", make_instance({0, 0}, {{1, 0}, {0, 1}}, {1, 2}), 0}};
  GridConfig cfg;
  cfg.capacities = {4};
  cfg.transit_hours = {0.0, 1.0};
  cfg.solvers = {SolverKind::kSweep, SolverKind::kNeural};
  const auto out = run_grid(ds, cfg, SolverContext{}, 1);
  ASSERT_EQ(out.rows.size(), 4u);
  EXPECT_FALSE(out.rows[0].failed);
  EXPECT_TRUE(out.rows[1].failed);
  EXPECT_NE(results_csv(out.rows).find(",failed,"), std::string::npos);
  EXPECT_TRUE(out.comparison.empty());
}

TEST(Grid, ThreadsFromEnv) {
  ::setenv("EVACROUTE_THREADS", "3", 1);
  EXPECT_EQ(threads_from_env(), 3u);
  ::setenv("EVACROUTE_THREADS", "junk", 1);
  EXPECT_EQ(threads_from_env(), 0u);
  ::unsetenv("EVACROUTE_THREADS");
  EXPECT_EQ(threads_from_env(), 0u);
}

}  // namespace
}  // namespace evacroute
