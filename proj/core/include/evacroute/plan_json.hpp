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
#ifndef EVACROUTE_PLAN_JSON_HPP_
#define EVACROUTE_PLAN_JSON_HPP_

#include <string>
#include <vector>

#include "evacroute/instance.hpp"
#include "evacroute/solver.hpp"

namespace evacroute {

/// A solved plan together with the normalized instance it was solved on.
struct PlanPart {
  FleetPlan plan;
  NormalizedInstance instance;
};

/// What evacroute solve writes: one part normally, several when households
/// had to be split across passes.
struct PlanDocument {
  std::vector<PlanPart> parts;
  double transit_hours = 0.0;
  double speed_kmh = 8.0;
};

// Single-part documents use the flat layout
//   {"routes":[{"visits":[..],"picked_up":..,"length_km":..,"time_hours":..}],
//    "capacity":..,"instance":{..}}
// and multi-part documents wrap those objects in a "parts" array.
std::string plan_to_json(const PlanDocument& doc, int indent = 2);
std::string plan_to_json(const FleetPlan& plan, const NormalizedInstance& inst,
                         int indent = 2);
PlanDocument plan_from_json(const std::string& text);

}  // namespace evacroute

#endif  // EVACROUTE_PLAN_JSON_HPP_
