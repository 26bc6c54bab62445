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
// Brute-force CVRP optimum for tiny instances: every set partition of the
// houses, every visit order inside each block. Deliberately shares no code
// with the library's dynamic program.

#ifndef EVACROUTE_TESTS_NAIVE_ORACLE_HPP_
#define EVACROUTE_TESTS_NAIVE_ORACLE_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "evacroute/instance.hpp"

namespace evacroute::testing {

inline double naive_tour(const EvacInstance& inst, const std::vector<std::size_t>& order) {
  double len = 0.0;
  Point at = inst.depot;
  for (std::size_t h : order) {
    const Point p = inst.houses[h];
    len += std::abs(at.x - p.x) + std::abs(at.y - p.y);
    at = p;
  }
  return len + std::abs(at.x - inst.depot.x) + std::abs(at.y - inst.depot.y);
}

inline double naive_best_order(const EvacInstance& inst, std::vector<std::size_t> block) {
  std::sort(block.begin(), block.end());
  double best = std::numeric_limits<double>::infinity();
  do {
    best = std::min(best, naive_tour(inst, block));
  } while (std::next_permutation(block.begin(), block.end()));
  return best;
}

// Optimal total length in normalized units; infinity when no house fits.
inline double naive_optimum(const EvacInstance& inst, int capacity) {
  const std::size_t n = inst.houses.size();
  std::vector<std::size_t> label(n, 0);  // restricted growth string
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    const std::size_t blocks = *std::max_element(label.begin(), label.end()) + 1;
    std::vector<std::vector<std::size_t>> groups(blocks);
    std::vector<int> load(blocks, 0);
    for (std::size_t h = 0; h < n; ++h) {
      groups[label[h]].push_back(h);
      load[label[h]] += inst.demands[h];
    }
    if (std::all_of(load.begin(), load.end(), [&](int l) { return l <= capacity; })) {
      double total = 0.0;
      for (const auto& g : groups) total += naive_best_order(inst, g);
      best = std::min(best, total);
    }
    // next restricted growth string
    std::size_t i = n;
    while (i-- > 1) {
      const std::size_t prefix_max = *std::max_element(label.begin(), label.begin() + i);
      if (label[i] <= prefix_max) {
        ++label[i];
        std::fill(label.begin() + i + 1, label.end(), 0);
        break;
      }
    }
    if (i == 0) break;
  }
  return best;
}

}  // namespace evacroute::testing

#endif  // EVACROUTE_TESTS_NAIVE_ORACLE_HPP_
