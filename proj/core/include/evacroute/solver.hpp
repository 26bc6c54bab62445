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
#ifndef EVACROUTE_SOLVER_HPP_
#define EVACROUTE_SOLVER_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "evacroute/instance.hpp"

namespace evacroute {

/// One depot-to-depot trip. visits holds 0-based house indices; the depot is
/// implicit at both ends.
struct Route {
  std::vector<std::size_t> visits;
  int picked_up = 0;
  double length_km = 0.0;
  double time_hours = 0.0;

  friend bool operator==(const Route&, const Route&) = default;
};

struct FleetPlan {
  std::vector<Route> routes;
  std::string instance_name;
  int capacity = 0;

  std::size_t size() const noexcept { return routes.size(); }
  friend bool operator==(const FleetPlan&, const FleetPlan&) = default;
};

struct TimeModel {
  double speed_kmh = 8.0;
  double transit_hours_per_route = 0.0;
};

void check_time_model(const TimeModel& tm);

struct Violation {
  enum class Kind {
    kMissingHouse,      // house never visited
    kRepeatedHouse,     // house visited by more than one route
    kDuplicateVisit,    // house listed twice inside one route
    kCapacityExceeded,  // route load above capacity
    kEmptyRoute,
    kIndexOutOfRange,
    kLoadMismatch,      // recorded picked_up differs from demand sum
  };

  Kind kind;
  std::size_t route = 0;  // unused for kMissingHouse
  std::size_t house = 0;
  int load = 0;
  int capacity = 0;

  friend bool operator==(const Violation&, const Violation&) = default;
};

std::string describe(const Violation& v);

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

// Checks the route encoding against the CVRP constraints: every house exactly
// once, per-route load within capacity, no empty or malformed routes.
ValidationReport validate(const FleetPlan& plan, const EvacInstance& inst,
                          int capacity);

// Manhattan length of depot -> visits... -> depot.
double route_length_km(std::span<const std::size_t> visits,
                       const NormalizedInstance& inst);
double route_length_units(std::span<const std::size_t> visits,
                          const EvacInstance& inst);
double plan_length_units(const FleetPlan& plan, const EvacInstance& inst);

// Builds a route with load and length filled in and time_hours = travel time
// at tm plus the per-route transit.
Route make_route(std::vector<std::size_t> visits, const NormalizedInstance& inst,
                 const TimeModel& tm = {});

struct TimeEvaluation {
  double total_hours = 0.0;
  std::vector<double> per_route_hours;
};

// Throws Error(kInvalidPlan) when the plan does not validate against
// plan.capacity.
TimeEvaluation evaluate_time(const FleetPlan& plan, const NormalizedInstance& inst,
                             const TimeModel& tm);

// Returns a copy of plan with length_km and time_hours recomputed under tm.
FleetPlan with_times(const FleetPlan& plan, const NormalizedInstance& inst,
                     const TimeModel& tm);

struct SweepOptions {
  double start_angle_rad = 0.0;
};

// Orders houses counter-clockwise by polar angle about the depot and fills
// routes greedily in that order, closing a route when the next house would
// overflow it. Equal angles are taken nearest first.
FleetPlan sweep_solve(const NormalizedInstance& inst, int capacity,
                      const SweepOptions& options = {});

inline constexpr std::size_t kExactMaxHouses = 10;

// Minimum total tour length over all capacity-feasible partitions and visit
// orders. Ties go to fewer routes, then to the lexicographically smallest
// route list (routes ordered by their smallest house index).
FleetPlan exact_solve(const NormalizedInstance& inst, int capacity);

/// One pass of a split evacuation. house_ids maps the part's houses back to
/// the source instance.
struct InstancePart {
  EvacInstance instance;
  std::vector<std::size_t> house_ids;
};

// Splits an instance whose households may exceed the vehicle capacity into
// successive passes; each pass picks up min(remaining, capacity) per house.
std::vector<InstancePart> split_parts(const EvacInstance& inst, int capacity);

// People carried by the longest prefix of routes that completes within the
// window. Partially completed routes earn nothing.
int people_within_window(std::span<const int> loads,
                         std::span<const double> route_hours, double window_hours);
int people_within_window(const FleetPlan& plan,
                         std::span<const double> route_hours, double window_hours);

}  // namespace evacroute

#endif  // EVACROUTE_SOLVER_HPP_
