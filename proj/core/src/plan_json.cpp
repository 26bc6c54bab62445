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
#include "evacroute/plan_json.hpp"

#include <nlohmann/json.hpp>

#include "evacroute/error.hpp"

namespace evacroute {

using nlohmann::json;

namespace {

json point_json(Point p) { return json::array({p.x, p.y}); }

Point point_from(const json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

json instance_json(const NormalizedInstance& inst) {
  json houses = json::array();
  for (const Point& p : inst.base.houses) houses.push_back(point_json(p));
  return {
      {"name", inst.base.name},
      {"depot", point_json(inst.base.depot)},
      {"houses", std::move(houses)},
      {"demands", inst.base.demands},
      {"scale_km_per_unit", inst.scale_km_per_unit},
  };
}

NormalizedInstance instance_from(const json& j) {
  NormalizedInstance inst;
  inst.base.name = j.at("name").get<std::string>();
  inst.base.depot = point_from(j.at("depot"));
  for (const auto& p : j.at("houses")) inst.base.houses.push_back(point_from(p));
  inst.base.demands = j.at("demands").get<std::vector<int>>();
  inst.scale_km_per_unit = j.at("scale_km_per_unit").get<double>();
  inst.base.side_km = inst.scale_km_per_unit;
  check_instance(inst.base);
  return inst;
}

json part_json(const PlanPart& part) {
  json routes = json::array();
  for (const Route& r : part.plan.routes) {
    routes.push_back({
        {"visits", r.visits},
        {"picked_up", r.picked_up},
        {"length_km", r.length_km},
        {"time_hours", r.time_hours},
    });
  }
  return {
      {"routes", std::move(routes)},
      {"capacity", part.plan.capacity},
      {"instance", instance_json(part.instance)},
  };
}

PlanPart part_from(const json& j) {
  PlanPart part;
  part.instance = instance_from(j.at("instance"));
  part.plan.capacity = j.at("capacity").get<int>();
  part.plan.instance_name = part.instance.base.name;
  for (const auto& r : j.at("routes")) {
    Route route;
    route.visits = r.at("visits").get<std::vector<std::size_t>>();
    route.picked_up = r.at("picked_up").get<int>();
    route.length_km = r.at("length_km").get<double>();
    route.time_hours = r.at("time_hours").get<double>();
    part.plan.routes.push_back(std::move(route));
  }
  return part;
}

}  // namespace

std::string plan_to_json(const PlanDocument& doc, int indent) {
  if (doc.parts.empty()) {
    throw Error(ErrorCode::kInvalidPlan, "plan document has no parts");
  }
  json out;
  if (doc.parts.size() == 1) {
    out = part_json(doc.parts.front());
  } else {
    json parts = json::array();
    for (const auto& p : doc.parts) parts.push_back(part_json(p));
    out = {
        {"parts", std::move(parts)},
        {"capacity", doc.parts.front().plan.capacity},
    };
  }
  out["transit_hours"] = doc.transit_hours;
  out["speed_kmh"] = doc.speed_kmh;
  return out.dump(indent) + "\n";
}

std::string plan_to_json(const FleetPlan& plan, const NormalizedInstance& inst,
                         int indent) {
  return plan_to_json(PlanDocument{{PlanPart{plan, inst}}}, indent);
}

PlanDocument plan_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    PlanDocument doc;
    if (j.contains("parts")) {
      for (const auto& p : j.at("parts")) doc.parts.push_back(part_from(p));
    } else {
      doc.parts.push_back(part_from(j));
    }
    doc.transit_hours = j.value("transit_hours", 0.0);
    doc.speed_kmh = j.value("speed_kmh", 8.0);
    return doc;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidPlan, std::string("bad plan JSON: ") + e.what());
  }
}

}  // namespace evacroute
