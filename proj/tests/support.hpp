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
// Small builders shared by the unit tests and the acceptance runner.

#ifndef EVACROUTE_TESTS_SUPPORT_HPP_
#define EVACROUTE_TESTS_SUPPORT_HPP_

#include <random>
#include <string>
#include <vector>

#include "evacroute/instance.hpp"

namespace evacroute::testing {

inline EvacInstance make_instance(Point depot, std::vector<Point> houses,
                                  std::vector<int> demands, std::string name = "t") {
  EvacInstance inst;
  inst.name = std::move(name);
  inst.depot = depot;
  inst.houses = std::move(houses);
  inst.demands = std::move(demands);
  return inst;
}

// Wraps coordinates that already live in the unit square.
inline NormalizedInstance unit(EvacInstance inst) {
  NormalizedInstance n;
  n.scale_km_per_unit = inst.side_km;
  n.base = std::move(inst);
  return n;
}

// Coordinates on a 1/64 grid so that every tour length sums exactly in
// double precision, whatever the summation order.
inline NormalizedInstance dyadic_instance(std::size_t n, int max_demand, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coord(0, 64);
  std::uniform_int_distribution<int> demand(1, max_demand);
  EvacInstance inst;
  inst.name = "dyadic";
  inst.depot = {coord(rng) / 64.0, coord(rng) / 64.0};
  while (inst.houses.size() < n) {
    const Point p{coord(rng) / 64.0, coord(rng) / 64.0};
    if (p == inst.depot) continue;
    inst.houses.push_back(p);
    inst.demands.push_back(demand(rng));
  }
  return unit(std::move(inst));
}

inline std::string data_path(const std::string& file) {
  return std::string(EVACROUTE_DATA_DIR) + "/" + file;
}

}  // namespace evacroute::testing

#endif  // EVACROUTE_TESTS_SUPPORT_HPP_
