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
#include <limits>
#include <vector>

#include <fmt/format.h>

#include "evacroute/error.hpp"
#include "evacroute/solver.hpp"

namespace evacroute {

namespace {

using Mask = unsigned;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Exact single-route ordering for every subset of houses (Held-Karp over the
// cost-to-go, so the lexicographically smallest optimal order can be read off
// greedily from the front).
class TourTable {
 public:
  explicit TourTable(const EvacInstance& inst)
      : inst_(inst), n_(inst.size()), to_go_((Mask{1} << n_) * n_, kInf) {
    for (std::size_t cur = 0; cur < n_; ++cur) {
      at(0, cur) = manhattan(inst_.houses[cur], inst_.depot);
    }
    const Mask full = (Mask{1} << n_) - 1;
    for (Mask rest = 1; rest <= full; ++rest) {
      for (std::size_t cur = 0; cur < n_; ++cur) {
        if (rest & (Mask{1} << cur)) continue;
        double best = kInf;
        for (std::size_t next = 0; next < n_; ++next) {
          const Mask bit = Mask{1} << next;
          if (!(rest & bit)) continue;
          best = std::min(best, leg(cur, next) + at(rest & ~bit, next));
        }
        at(rest, cur) = best;
      }
    }
  }

  double tour_length(Mask subset) const {
    double best = kInf;
    for (std::size_t first = 0; first < n_; ++first) {
      const Mask bit = Mask{1} << first;
      if (subset & bit) best = std::min(best, start_leg(first) + at(subset & ~bit, first));
    }
    return best;
  }

  std::vector<std::size_t> tour_order(Mask subset) const {
    std::vector<std::size_t> order;
    double target = tour_length(subset);
    Mask rest = subset;
    std::size_t cur = n_;  // n_ stands for the depot
    while (rest) {
      for (std::size_t next = 0; next < n_; ++next) {
        const Mask bit = Mask{1} << next;
        if (!(rest & bit)) continue;
        const double step = cur == n_ ? start_leg(next) : leg(cur, next);
        if (step + at(rest & ~bit, next) == target) {
          order.push_back(next);
          target = at(rest & ~bit, next);
          rest &= ~bit;
          cur = next;
          break;
        }
      }
    }
    return order;
  }

 private:
  double leg(std::size_t a, std::size_t b) const {
    return manhattan(inst_.houses[a], inst_.houses[b]);
  }
  double start_leg(std::size_t h) const { return manhattan(inst_.depot, inst_.houses[h]); }
  double& at(Mask rest, std::size_t cur) { return to_go_[rest * n_ + cur]; }
  double at(Mask rest, std::size_t cur) const { return to_go_[rest * n_ + cur]; }

  const EvacInstance& inst_;
  std::size_t n_;
  std::vector<double> to_go_;
};

}  // namespace

FleetPlan exact_solve(const NormalizedInstance& inst, int capacity) {
  const EvacInstance& base = inst.base;
  check_instance(base);
  if (base.size() > kExactMaxHouses) {
    throw Error(ErrorCode::kTooLarge,
                fmt::format("exact solver handles at most {} houses, got {}",
                            kExactMaxHouses, base.size()));
  }
  if (capacity < 1 || base.max_demand() > capacity) {
    throw Error(ErrorCode::kDemandExceedsCapacity,
                fmt::format("largest household {} exceeds capacity {}",
                            base.max_demand(), capacity));
  }

  const std::size_t n = base.size();
  const Mask full = (Mask{1} << n) - 1;
  const TourTable tours(base);

  std::vector<double> block_cost(full + 1, kInf);
  for (Mask m = 1; m <= full; ++m) {
    int load = 0;
    for (std::size_t h = 0; h < n; ++h) {
      if (m & (Mask{1} << h)) load += base.demands[h];
    }
    if (load <= capacity) block_cost[m] = tours.tour_length(m);
  }

  // best[S]: optimal cover of S where the block holding S's lowest house is
  // chosen first. Blocks therefore come out ordered by smallest house index.
  struct Cell {
    double cost = kInf;
    int routes = 0;
    Mask block = 0;
  };
  std::vector<Cell> best(full + 1);
  best[0] = {0.0, 0, 0};

  auto routes_of = [&](Mask s) {
    std::vector<std::vector<std::size_t>> out;
    while (s) {
      out.push_back(tours.tour_order(best[s].block));
      s &= ~best[s].block;
    }
    return out;
  };

  for (Mask s = 1; s <= full; ++s) {
    const Mask low = s & (~s + 1);
    const Mask others = s & ~low;
    Cell& cell = best[s];
    // enumerate sub-masks of the other houses, always including the lowest
    for (Mask sub = others;; sub = (sub - 1) & others) {
      const Mask block = sub | low;
      if (block_cost[block] < kInf) {
        const Cell& tail = best[s & ~block];
        const Cell cand{block_cost[block] + tail.cost, tail.routes + 1, block};
        bool take = cand.cost < cell.cost ||
                    (cand.cost == cell.cost && cand.routes < cell.routes);
        if (!take && cand.cost == cell.cost && cand.routes == cell.routes) {
          const Cell saved = cell;
          cell = cand;
          const auto with_cand = routes_of(s);
          cell = saved;
          take = with_cand < routes_of(s);
        }
        if (take) cell = cand;
      }
      if (sub == 0) break;
    }
  }

  FleetPlan plan;
  plan.instance_name = base.name;
  plan.capacity = capacity;
  for (auto& visits : routes_of(full)) {
    plan.routes.push_back(make_route(std::move(visits), inst));
  }
  return plan;
}

}  // namespace evacroute
