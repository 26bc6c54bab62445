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

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "evacroute/error.hpp"
#include "evacroute/plan_json.hpp"
#include "support.hpp"

namespace evacroute {
namespace {

PlanPart sweep_part(std::uint64_t seed, std::size_t n, int cap) {
  std::mt19937_64 rng(seed);
  auto inst = testing::dyadic_instance(n, 4, rng);
  inst.base.name = "p" + std::to_string(seed);
  auto plan = with_times(sweep_solve(inst, cap), inst, TimeModel{8.0, 0.5});
  return {plan, inst};
}

TEST(PlanJson, StableFieldNames) {
  const auto part = sweep_part(1, 5, 6);
  const auto j = nlohmann::json::parse(plan_to_json(part.plan, part.instance));
  ASSERT_TRUE(j.contains("routes"));
  ASSERT_TRUE(j.contains("capacity"));
  ASSERT_TRUE(j.contains("instance"));
  const auto& r = j["routes"][0];
  for (const char* key : {"visits", "picked_up", "length_km", "time_hours"}) {
    EXPECT_TRUE(r.contains(key)) << key;
  }
  EXPECT_EQ(j["capacity"], 6);
}

TEST(PlanJson, RoundTrip) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto part = sweep_part(seed, 1 + seed % 9, 5);
    const auto doc = plan_from_json(plan_to_json(part.plan, part.instance));
    ASSERT_EQ(doc.parts.size(), 1u);
    EXPECT_EQ(doc.parts[0].plan.routes, part.plan.routes);
    EXPECT_EQ(doc.parts[0].plan.capacity, part.plan.capacity);
    EXPECT_EQ(doc.parts[0].instance.base.houses, part.instance.base.houses);
    EXPECT_EQ(doc.parts[0].instance.base.demands, part.instance.base.demands);
    EXPECT_EQ(doc.parts[0].instance.scale_km_per_unit, part.instance.scale_km_per_unit);
  }
}

TEST(PlanJson, MultiPart) {
  PlanDocument doc{{sweep_part(1, 4, 4), sweep_part(2, 3, 4)}, 1.0, 8.0};
  const std::string text = plan_to_json(doc);
  EXPECT_TRUE(nlohmann::json::parse(text).contains("parts"));
  const auto back = plan_from_json(text);
  ASSERT_EQ(back.parts.size(), 2u);
  EXPECT_EQ(back.parts[1].plan.routes, doc.parts[1].plan.routes);
  EXPECT_EQ(back.transit_hours, 1.0);
}

TEST(PlanJson, Deterministic) {
  const auto part = sweep_part(3, 8, 5);
  EXPECT_EQ(plan_to_json(part.plan, part.instance), plan_to_json(part.plan, part.instance));
}

TEST(PlanJson, Malformed) {
  EXPECT_THROW(plan_from_json("{"), Error);
  EXPECT_THROW(plan_from_json(R"({"routes": []})"), Error);
}

}  // namespace
}  // namespace evacroute
