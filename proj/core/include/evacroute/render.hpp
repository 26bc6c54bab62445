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
#ifndef EVACROUTE_RENDER_HPP_
#define EVACROUTE_RENDER_HPP_

#include <string>
#include <vector>

#include "evacroute/plan_json.hpp"

namespace evacroute {

struct RenderSpec {
  int width = 1100;   // plot square plus legend column
  int height = 800;
  int margin = 40;
  std::vector<std::string> colors = {
      "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2",
      "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939", "#8c6d31", "#843c39",
      "#7b4173", "#3182bd", "#e6550d", "#31a354", "#756bb1", "#636363"};
  // Placeholders: {i} route index, {n} houses, {load}, {cap}, {hours} (two
  // decimals).
  std::string legend_format = "R{i}, #{n}, c {load}/{cap}, t: {hours} hours";
  // Leave out the legs from and back to the depot.
  bool hide_depot_legs = true;
};

std::string legend_label(const RenderSpec& spec, std::size_t index, const Route& route,
                         int capacity);

// SVG for one solved part. Each route is a <polyline class="route">, each
// legend line a <g class="legend-entry">. No timestamps are embedded.
std::string render_svg(const PlanPart& part, double speed_kmh, double transit_hours,
                       const RenderSpec& spec = {});

}  // namespace evacroute

#endif  // EVACROUTE_RENDER_HPP_
