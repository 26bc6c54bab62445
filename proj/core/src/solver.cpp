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
#include "evacroute/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <tuple>

#include <fmt/format.h>

#include "evacroute/error.hpp"

namespace evacroute {

void check_time_model(const TimeModel& tm) {
  if (!(tm.speed_kmh > 0.0) || !std::isfinite(tm.speed_kmh)) {
    throw Error(ErrorCode::kInvalidConfig, "speed_kmh must be positive");
  }
  if (!(tm.transit_hours_per_route >= 0.0) ||
      !std::isfinite(tm.transit_hours_per_route)) {
    throw Error(ErrorCode::kInvalidConfig, "transit hours must be >= 0");
  }
}

std::string describe(const Violation& v) {
  switch (v.kind) {
    case Violation::Kind::kMissingHouse:
      return fmt::format("MissingHouse({})", v.house);
    case Violation::Kind::kRepeatedHouse:
      return fmt::format("RepeatedHouse(route {}, house {})", v.route, v.house);
    case Violation::Kind::kDuplicateVisit:
      return fmt::format("DuplicateVisit(route {}, house {})", v.route, v.house);
    case Violation::Kind::kCapacityExceeded:
      return fmt::format("CapacityExceeded(route {}, {}, {})", v.route, v.load,
                         v.capacity);
    case Violation::Kind::kEmptyRoute:
      return fmt::format("EmptyRoute({})", v.route);
    case Violation::Kind::kIndexOutOfRange:
      return fmt::format("IndexOutOfRange(route {}, index {})", v.route, v.house);
    case Violation::Kind::kLoadMismatch:
      return fmt::format("LoadMismatch(route {}, recorded {}, actual {})", v.route,
                         v.load, v.capacity);
  }
  return "Unknown";
}

ValidationReport validate(const FleetPlan& plan, const EvacInstance& inst,
                          int capacity) {
  using Kind = Violation::Kind;
  ValidationReport report;
  auto& out = report.violations;
  const std::size_t n = inst.size();
  std::vector<int> seen_in(n, -1);

  for (std::size_t r = 0; r < plan.routes.size(); ++r) {
    const Route& route = plan.routes[r];
    if (route.visits.empty()) {
      out.push_back({Kind::kEmptyRoute, r});
      continue;
    }
    std::vector<bool> in_route(n, false);
    int load = 0;
    for (const std::size_t h : route.visits) {
      if (h >= n) {
        out.push_back({Kind::kIndexOutOfRange, r, h});
        continue;
      }
      if (in_route[h]) {
        out.push_back({Kind::kDuplicateVisit, r, h});
        continue;
      }
      in_route[h] = true;
      load += inst.demands[h];
      if (seen_in[h] >= 0) {
        out.push_back({Kind::kRepeatedHouse, r, h});
      } else {
        seen_in[h] = static_cast<int>(r);
      }
    }
    if (load > capacity) {
      out.push_back({Kind::kCapacityExceeded, r, 0, load, capacity});
    }
    if (route.picked_up != load) {
      // capacity slot carries the actual load here
      out.push_back({Kind::kLoadMismatch, r, 0, route.picked_up, load});
    }
  }
  for (std::size_t h = 0; h < n; ++h) {
    if (seen_in[h] < 0) out.push_back({Kind::kMissingHouse, 0, h});
  }
  return report;
}

double route_length_units(std::span<const std::size_t> visits,
                          const EvacInstance& inst) {
  if (visits.empty()) return 0.0;
  double total = manhattan(inst.depot, inst.houses[visits.front()]);
  for (std::size_t i = 1; i < visits.size(); ++i) {
    total += manhattan(inst.houses[visits[i - 1]], inst.houses[visits[i]]);
  }
  total += manhattan(inst.houses[visits.back()], inst.depot);
  return total;
}

double route_length_km(std::span<const std::size_t> visits,
                       const NormalizedInstance& inst) {
  return route_length_units(visits, inst.base) * inst.scale_km_per_unit;
}

double plan_length_units(const FleetPlan& plan, const EvacInstance& inst) {
  double total = 0.0;
  for (const Route& r : plan.routes) total += route_length_units(r.visits, inst);
  return total;
}

Route make_route(std::vector<std::size_t> visits, const NormalizedInstance& inst,
                 const TimeModel& tm) {
  Route route;
  route.visits = std::move(visits);
  for (const std::size_t h : route.visits) route.picked_up += inst.base.demands.at(h);
  route.length_km = route_length_km(route.visits, inst);
  route.time_hours = route.length_km / tm.speed_kmh + tm.transit_hours_per_route;
  return route;
}

TimeEvaluation evaluate_time(const FleetPlan& plan, const NormalizedInstance& inst,
                             const TimeModel& tm) {
  check_time_model(tm);
  const auto report = validate(plan, inst.base, plan.capacity);
  if (!report.ok()) {
    throw Error(ErrorCode::kInvalidPlan,
                fmt::format("{} violation(s), first: {}", report.violations.size(),
                            describe(report.violations.front())));
  }
  TimeEvaluation eval;
  eval.per_route_hours.reserve(plan.size());
  double travel = 0.0;
  for (const Route& r : plan.routes) {
    const double hours = route_length_km(r.visits, inst) / tm.speed_kmh;
    travel += hours;
    eval.per_route_hours.push_back(hours + tm.transit_hours_per_route);
  }
  // Summing travel first keeps total(t) - total(0) == t * |routes|.
  eval.total_hours =
      travel + tm.transit_hours_per_route * static_cast<double>(plan.size());
  return eval;
}

FleetPlan with_times(const FleetPlan& plan, const NormalizedInstance& inst,
                     const TimeModel& tm) {
  const auto eval = evaluate_time(plan, inst, tm);
  FleetPlan out = plan;
  for (std::size_t r = 0; r < out.routes.size(); ++r) {
    out.routes[r].length_km = route_length_km(out.routes[r].visits, inst);
    out.routes[r].time_hours = eval.per_route_hours[r];
  }
  return out;
}

namespace {

void require_capacity(const EvacInstance& inst, int capacity) {
  if (capacity < 1 || inst.max_demand() > capacity) {
    throw Error(ErrorCode::kDemandExceedsCapacity,
                fmt::format("largest household {} exceeds capacity {}",
                            inst.max_demand(), capacity));
  }
}

}  // namespace

FleetPlan sweep_solve(const NormalizedInstance& inst, int capacity,
                      const SweepOptions& options) {
  check_instance(inst.base);
  require_capacity(inst.base, capacity);
  const EvacInstance& base = inst.base;
  constexpr double kTwoPi = 2.0 * std::numbers::pi;

  struct Key {
    double angle;
    double radius;
    std::size_t house;
  };
  std::vector<Key> order;
  order.reserve(base.size());
  for (std::size_t h = 0; h < base.size(); ++h) {
    const double dx = base.houses[h].x - base.depot.x;
    const double dy = base.houses[h].y - base.depot.y;
    double angle = std::fmod(std::atan2(dy, dx) - options.start_angle_rad, kTwoPi);
    if (angle < 0.0) angle += kTwoPi;
    if (angle >= kTwoPi) angle = 0.0;
    order.push_back({angle, std::hypot(dx, dy), h});
  }
  std::sort(order.begin(), order.end(), [](const Key& a, const Key& b) {
    return std::tie(a.angle, a.radius, a.house) < std::tie(b.angle, b.radius, b.house);
  });

  FleetPlan plan;
  plan.instance_name = base.name;
  plan.capacity = capacity;
  std::vector<std::size_t> current;
  int load = 0;
  for (const Key& k : order) {
    const int d = base.demands[k.house];
    if (load + d > capacity) {
      plan.routes.push_back(make_route(std::move(current), inst));
      current.clear();
      load = 0;
    }
    current.push_back(k.house);
    load += d;
  }
  if (!current.empty()) plan.routes.push_back(make_route(std::move(current), inst));
  return plan;
}

std::vector<InstancePart> split_parts(const EvacInstance& inst, int capacity) {
  if (capacity < 1) {
    throw Error(ErrorCode::kInvalidConfig, "capacity must be >= 1");
  }
  std::vector<int> remaining = inst.demands;
  std::vector<InstancePart> parts;
  while (std::any_of(remaining.begin(), remaining.end(), [](int d) { return d > 0; })) {
    InstancePart part;
    part.instance = inst;
    part.instance.houses.clear();
    part.instance.demands.clear();
    part.instance.file_demands.clear();
    part.instance.name = fmt::format("{}/part{}", inst.name, parts.size() + 1);
    for (std::size_t h = 0; h < remaining.size(); ++h) {
      if (remaining[h] <= 0) continue;
      const int take = std::min(remaining[h], capacity);
      remaining[h] -= take;
      part.instance.houses.push_back(inst.houses[h]);
      part.instance.demands.push_back(take);
      part.house_ids.push_back(h);
    }
    parts.push_back(std::move(part));
  }
  if (parts.size() == 1) {
    // Nothing was split: hand back the input untouched.
    parts.front().instance = inst;
  }
  return parts;
}

int people_within_window(std::span<const int> loads,
                         std::span<const double> route_hours, double window_hours) {
  if (loads.size() != route_hours.size()) {
    throw Error(ErrorCode::kShapeMismatch, "loads and route times differ in length");
  }
  double elapsed = 0.0;
  int people = 0;
  for (std::size_t r = 0; r < loads.size(); ++r) {
    elapsed += route_hours[r];
    if (elapsed > window_hours) break;
    people += loads[r];
  }
  return people;
}

int people_within_window(const FleetPlan& plan,
                         std::span<const double> route_hours, double window_hours) {
  std::vector<int> loads;
  loads.reserve(plan.size());
  for (const Route& r : plan.routes) loads.push_back(r.picked_up);
  return people_within_window(loads, route_hours, window_hours);
}

}  // namespace evacroute
