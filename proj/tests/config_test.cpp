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
#include <string>

#include <gtest/gtest.h>

#include "evacroute/config.hpp"
#include "evacroute/error.hpp"

namespace evacroute {
namespace {

std::string config_error(const std::string& text, bool grid = true) {
  try {
    if (grid) {
      parse_grid_config(text, "/base");
    } else {
      parse_train_config(text);
    }
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidConfig);
    return e.what();
  }
  ADD_FAILURE() << "config accepted: " << text;
  return {};
}

TEST(GridConfig, DefaultsAndPaths) {
  const auto cfg = parse_grid_config(
      R"({"datasets": [{"name": "d1", "path": "data/a.vrp", "houses": 20, "demand_seed": 5}],
          "solvers": ["sweep"]})",
      "/base");
  ASSERT_EQ(cfg.datasets.size(), 1u);
  EXPECT_EQ(cfg.datasets[0].path, "/base/data/a.vrp");
  EXPECT_EQ(cfg.datasets[0].houses, 20u);
  EXPECT_EQ(cfg.datasets[0].demand_seed, 5u);
  EXPECT_EQ(cfg.capacities, (std::vector<int>{64, 32, 16, 8, 4, 2}));
  EXPECT_EQ(cfg.transit_hours, (std::vector<double>{0.0, 0.5, 1.0, 2.0}));
  EXPECT_EQ(cfg.solvers, std::vector{SolverKind::kSweep});
  EXPECT_EQ(cfg.base.registry_size, 4000);
}

TEST(GridConfig, ErrorsNameTheField) {
  EXPECT_NE(config_error(R"({"solvers": ["sweep"]})").find("$.datasets"), std::string::npos);
  EXPECT_NE(config_error(R"({"datasets": [{"name": "a", "path": "p", "houses": 0}],
                             "solvers": ["sweep"]})")
                .find("$.datasets[0].houses"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"datasets": [{"name": "a", "path": "p"}],
                             "solvers": ["sweep", "tabu"]})")
                .find("$.solvers[1]"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"datasets": [{"name": "a", "path": "p"}],
                             "solvers": ["sweep"], "capacity": [1]})")
                .find("$.capacity"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"datasets": [{"name": "a", "path": "p"}],
                             "solvers": ["sweep"], "transit_hours": [0, -1]})")
                .find("$.transit_hours[1]"),
            std::string::npos);
}

TEST(GridConfig, NeuralNeedsCheckpoint) {
  EXPECT_NE(config_error(R"({"datasets": [{"name": "a", "path": "p"}]})").find("$.checkpoint"),
            std::string::npos);
  const auto cfg = parse_grid_config(
      R"({"datasets": [{"name": "a", "path": "p"}], "checkpoint": "m.ckpt"})", "/base");
  EXPECT_EQ(cfg.checkpoint, "/base/m.ckpt");
}

TEST(GridConfig, InvalidJson) {
  EXPECT_NE(config_error("{").find("$"), std::string::npos);
}

TEST(TrainConfig, Parse) {
  const auto cfg = parse_train_config(
      R"({"batch_size": 16, "instances_per_epoch": 100, "learning_rate": 0.01,
          "optimizer": "adam", "architecture": {"embed_dim": 64, "n_heads": 4}})");
  EXPECT_EQ(cfg.batch_size, 16u);
  EXPECT_EQ(cfg.instances_per_epoch, 100u);
  EXPECT_EQ(cfg.learning_rate, 0.01);
  EXPECT_EQ(cfg.optimizer, nn::Optimizer::kAdam);
  EXPECT_EQ(cfg.arch.embed_dim, 64);
  EXPECT_EQ(cfg.arch.n_encoder_layers, 3);
  EXPECT_EQ(cfg.capacity, 20);
}

TEST(TrainConfig, ErrorsNameTheField) {
  EXPECT_NE(config_error(R"({"batch_size": 0})", false).find("$.batch_size"), std::string::npos);
  EXPECT_NE(config_error(R"({"baseline_update_significance": 1.5})", false)
                .find("$.baseline_update_significance"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"architecture": {"embed_dim": 30, "n_heads": 4}})", false)
                .find("$.architecture.n_heads"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"lr": 0.1})", false).find("$.lr"), std::string::npos);
  EXPECT_NE(config_error(R"({"capacity": 2})", false).find("$.capacity"), std::string::npos);
}

}  // namespace
}  // namespace evacroute
