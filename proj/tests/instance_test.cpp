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
#include <cmath>
#include <map>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "evacroute/error.hpp"
#include "evacroute/instance.hpp"
#include "support.hpp"

namespace evacroute {
namespace {

using testing::data_path;
using testing::make_instance;

constexpr const char* kTwoNode = R"(NAME : tiny
TYPE : CVRP
DIMENSION : 2
EDGE_WEIGHT_TYPE : EUC_2D
CAPACITY : 10
NODE_COORD_SECTION
 1 0 0
 2 5 7
DEMAND_SECTION
 1 0
 2 3
DEPOT_SECTION
 1
 -1
EOF
)";

ErrorCode parse_error(const std::string& text, std::optional<int>* line = nullptr) {
  try {
    parse_cvrplib(text);
  } catch (const Error& e) {
    if (line) *line = e.line();
    return e.code();
  }
  ADD_FAILURE() << "expected a parse error";
  return ErrorCode::kIo;
}

std::string replace(std::string text, const std::string& from, const std::string& to) {
  text.replace(text.find(from), from.size(), to);
  return text;
}

TEST(Parse, MinimalFile) {
  const EvacInstance inst = parse_cvrplib(kTwoNode);
  EXPECT_EQ(inst.name, "tiny");
  EXPECT_EQ(inst.depot, (Point{0, 0}));
  ASSERT_EQ(inst.houses.size(), 1u);
  EXPECT_EQ(inst.houses[0], (Point{5, 7}));
  EXPECT_EQ(inst.demands, std::vector<int>{3});
  EXPECT_EQ(inst.file_capacity, 10);
}

TEST(Parse, DatasetSizes) {
  EXPECT_EQ(load_cvrplib_file(data_path("A-n36-k5.vrp")).size(), 35u);
  EXPECT_EQ(load_cvrplib_file(data_path("A-n53-k7.vrp")).size(), 52u);
  EXPECT_EQ(load_cvrplib_file(data_path("A-n69-k9.vrp")).size(), 68u);
}

TEST(Parse, DepotInTheMiddle) {
  std::string text = replace(kTwoNode, "DIMENSION : 2", "DIMENSION : 3");
  text = replace(text, " 2 5 7\n", " 2 5 7\n 3 1 1\n");
  text = replace(text, " 2 3\n", " 2 3\n 3 0\n");
  text = replace(text, "DEPOT_SECTION\n 1", "DEPOT_SECTION\n 3");
  text = replace(text, "DEMAND_SECTION\n 1 0", "DEMAND_SECTION\n 1 2");
  const EvacInstance inst = parse_cvrplib(text);
  EXPECT_EQ(inst.depot, (Point{1, 1}));
  ASSERT_EQ(inst.size(), 2u);
  EXPECT_EQ(inst.houses[0], (Point{0, 0}));
  EXPECT_EQ(inst.demands, (std::vector<int>{2, 3}));
}

TEST(Parse, MissingSections) {
  EXPECT_EQ(parse_error(replace(kTwoNode, "DEMAND_SECTION\n 1 0\n 2 3\n", "")),
            ErrorCode::kMissingSection);
  EXPECT_EQ(parse_error(replace(kTwoNode, "CAPACITY : 10\n", "")), ErrorCode::kMissingSection);
  EXPECT_EQ(parse_error(replace(kTwoNode, "DEPOT_SECTION\n 1\n -1\n", "")),
            ErrorCode::kMissingSection);
}

TEST(Parse, MalformedRecordReportsLine) {
  std::optional<int> line;
  EXPECT_EQ(parse_error(replace(kTwoNode, " 2 5 7", " 2 5 x"), &line),
            ErrorCode::kMalformedRecord);
  EXPECT_EQ(line, 8);
}

TEST(Parse, DimensionMismatch) {
  EXPECT_EQ(parse_error(replace(kTwoNode, "DIMENSION : 2", "DIMENSION : 3")),
            ErrorCode::kDimensionMismatch);
}

TEST(Parse, HouseOnDepotRejected) {
  EXPECT_EQ(parse_error(replace(kTwoNode, " 2 5 7", " 2 0 0")), ErrorCode::kMalformedRecord);
}

TEST(Parse, RoundTripProperty) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coord(-50.0, 150.0);
  std::uniform_int_distribution<int> demand(1, 9);
  for (int trial = 0; trial < 50; ++trial) {
    EvacInstance inst;
    inst.name = "rt" + std::to_string(trial);
    inst.depot = {coord(rng), coord(rng)};
    const int n = 1 + trial % 12;
    for (int i = 0; i < n; ++i) {
      inst.houses.push_back({coord(rng), coord(rng)});
      inst.demands.push_back(demand(rng));
    }
    inst.file_capacity = 30;
    inst.file_demands = inst.demands;
    const EvacInstance back = parse_cvrplib(serialize_cvrplib(inst));
    EXPECT_EQ(back, inst) << "trial " << trial;
  }
}

TEST(Truncate, Examples) {
  const EvacInstance a36 = load_cvrplib_file(data_path("A-n36-k5.vrp"));
  EXPECT_EQ(truncate_instance(a36, 20).size(), 20u);
  EXPECT_EQ(truncate_instance(a36, a36.size()), a36);
  const auto three = make_instance({0, 0}, {{1, 0}, {2, 0}, {3, 0}}, {1, 2, 3});
  const auto two = truncate_instance(three, 2);
  EXPECT_EQ(two.houses, (std::vector<Point>{{1, 0}, {2, 0}}));
  EXPECT_EQ(two.demands, (std::vector<int>{1, 2}));
  EXPECT_THROW(truncate_instance(three, 0), Error);
  EXPECT_THROW(truncate_instance(three, 4), Error);
}

TEST(Demand, HouseholdRounding) {
  const DemandModel m;
  EXPECT_EQ(household_size(2.44, m), 2);
  EXPECT_EQ(household_size(5.1, m), 4);
  EXPECT_EQ(household_size(0.2, m), 1);
  EXPECT_EQ(household_size(2.5, m), 3);  // half goes away from zero
  EXPECT_EQ(household_size(-3.0, m), 1);
}

TEST(Demand, SeedReproduces) {
  const auto inst = load_cvrplib_file(data_path("A-n36-k5.vrp"));
  DemandModel m;
  m.seed = 42;
  EXPECT_EQ(regenerate_demands(inst, m).demands, regenerate_demands(inst, m).demands);
  m.seed = 43;
  EXPECT_NE(regenerate_demands(inst, m).demands,
            regenerate_demands(inst, DemandModel{}).demands);
}

TEST(Demand, EmpiricalDistribution) {
  DemandModel m;
  m.seed = 7;
  const auto sizes = sample_household_sizes(100000, m);
  std::map<int, int> counts;
  double sum = 0;
  for (int s : sizes) {
    ++counts[s];
    sum += s;
  }
  const double mean = sum / static_cast<double>(sizes.size());
  EXPECT_GE(mean, 2.30);
  EXPECT_LE(mean, 2.58);
  for (const auto& [value, count] : counts) {
    EXPECT_GE(value, 1);
    EXPECT_LE(value, 4);
  }
}

TEST(Demand, FileDemandsRestorable) {
  const auto inst = load_cvrplib_file(data_path("A-n53-k7.vrp"));
  const auto regen = regenerate_demands(inst, DemandModel{});
  EXPECT_EQ(with_file_demands(regen).demands, inst.demands);
}

TEST(Normalize, AffineExample) {
  const auto inst = make_instance({10, 20}, {{110, 70}, {60, 45}}, {1, 1});
  const auto n = normalize(inst);
  EXPECT_DOUBLE_EQ(n.base.houses[1].x, 0.5);
  EXPECT_DOUBLE_EQ(n.base.houses[1].y, 0.25);
  EXPECT_EQ(n.base.depot, (Point{0, 0}));
  EXPECT_DOUBLE_EQ(n.scale_km_per_unit, 3.0);
}

TEST(Normalize, UnitSquareUnchanged) {
  const auto inst = make_instance({0, 0}, {{1, 1}, {0.25, 0.75}}, {1, 2});
  const auto n = normalize(inst);
  EXPECT_EQ(n.base.houses, inst.houses);
  EXPECT_EQ(n.base.depot, inst.depot);
}

TEST(Normalize, DegenerateGeometry) {
  // a lone house on the depot has no extent; it is rejected before scaling
  EXPECT_THROW(normalize(make_instance({1, 1}, {{1, 1}}, {1})), Error);
}

TEST(Normalize, DistanceRatiosPreserved) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> coord(-1000.0, 1000.0);
  for (int trial = 0; trial < 200; ++trial) {
    EvacInstance inst = make_instance({coord(rng), coord(rng)}, {}, {});
    for (int i = 0; i < 3; ++i) {
      inst.houses.push_back({coord(rng), coord(rng)});
      inst.demands.push_back(1);
    }
    const auto n = normalize(inst);
    const auto& a = inst.houses;
    const auto& b = n.base.houses;
    const double before = manhattan(a[0], a[1]) / manhattan(a[1], a[2]);
    const double after = manhattan(b[0], b[1]) / manhattan(b[1], b[2]);
    EXPECT_NEAR(after / before, 1.0, 1e-9);
    for (const Point& p : b) {
      EXPECT_GE(p.x, 0.0);
      EXPECT_LE(p.x, 1.0);
      EXPECT_GE(p.y, 0.0);
      EXPECT_LE(p.y, 1.0);
    }
  }
}

TEST(Normalize, PhysicalDistanceReproduced) {
  // 90 x 60 units mapped onto a 3 km side: 1 unit = 1/30 km
  auto inst = make_instance({0, 0}, {{90, 60}, {30, 10}}, {1, 1});
  const auto n = normalize(inst);
  const double km = manhattan_km(n.base.houses[0], n.base.houses[1], n.scale_km_per_unit);
  EXPECT_NEAR(km, (60.0 + 50.0) / 30.0, 1e-9 * km);
}

TEST(Manhattan, Examples) {
  EXPECT_NEAR(manhattan_km({0, 0}, {0.3, 0.4}, 3.0), 2.1, 1e-12);
  EXPECT_DOUBLE_EQ(manhattan_km({0, 0}, {1, 0}, 3.0), 3.0);
  EXPECT_EQ(manhattan_km({0.2, 0.9}, {0.2, 0.9}, 3.0), 0.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 100; ++i) {
    const Point a{u(rng), u(rng)}, b{u(rng), u(rng)};
    EXPECT_EQ(manhattan_km(a, b, 3.0), manhattan_km(b, a, 3.0));
  }
}

TEST(Instance, InvariantsChecked) {
  EXPECT_THROW(check_instance(make_instance({0, 0}, {}, {})), Error);
  EXPECT_THROW(check_instance(make_instance({0, 0}, {{1, 1}}, {0})), Error);
  EXPECT_THROW(check_instance(make_instance({0, 0}, {{1, 1}}, {1, 2})), Error);
  EXPECT_THROW(check_instance(make_instance({0, 0}, {{NAN, 1}}, {1})), Error);
  EXPECT_THROW(check_instance(make_instance({0, 0}, {{0, 0}}, {1})), Error);
}

}  // namespace
}  // namespace evacroute
