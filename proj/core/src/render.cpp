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
#include "evacroute/render.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "evacroute/error.hpp"

namespace evacroute {

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string legend_label(const RenderSpec& spec, std::size_t index, const Route& route,
                         int capacity) {
  try {
    return fmt::format(fmt::runtime(spec.legend_format), fmt::arg("i", index),
                       fmt::arg("n", route.visits.size()), fmt::arg("load", route.picked_up),
                       fmt::arg("cap", capacity),
                       fmt::arg("hours", fmt::format("{:.2f}", route.time_hours)));
  } catch (const fmt::format_error& e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("bad legend format: ") + e.what());
  }
}

std::string render_svg(const PlanPart& part, double speed_kmh, double transit_hours,
                       const RenderSpec& spec) {
  if (spec.colors.empty()) throw Error(ErrorCode::kInvalidConfig, "no route colors");
  const NormalizedInstance& inst = part.instance;
  const FleetPlan plan = with_times(part.plan, inst, {speed_kmh, transit_hours});
  const TimeEvaluation eval = evaluate_time(plan, inst, {speed_kmh, transit_hours});

  const double side = std::min(spec.height, spec.width) - 2.0 * spec.margin - 30.0;
  const double left = spec.margin;
  const double top = spec.margin + 30.0;
  auto px = [&](Point p) {
    return std::pair{left + p.x * side, top + (1.0 - p.y) * side};
  };

  std::string svg;
  svg += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\">\n",
      spec.width, spec.height);
  svg += fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", spec.width,
                     spec.height);
  svg += fmt::format(
      "<text class=\"title\" x=\"{}\" y=\"{}\" font-family=\"sans-serif\" "
      "font-size=\"16\">{}: total {:.2f} hours, {} routes</text>\n",
      left, spec.margin, xml_escape(plan.instance_name), eval.total_hours, plan.size());
  svg += fmt::format(
      "<rect class=\"frame\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" "
      "stroke=\"#cccccc\"/>\n",
      left, top, side, side);

  for (std::size_t r = 0; r < plan.size(); ++r) {
    const Route& route = plan.routes[r];
    const std::string& color = spec.colors[r % spec.colors.size()];
    std::vector<Point> pts;
    if (!spec.hide_depot_legs) pts.push_back(inst.base.depot);
    for (const std::size_t h : route.visits) pts.push_back(inst.base.houses[h]);
    if (!spec.hide_depot_legs) pts.push_back(inst.base.depot);

    std::string points;
    for (const Point p : pts) {
      const auto [x, y] = px(p);
      if (!points.empty()) points += ' ';
      points += fmt::format("{:.2f},{:.2f}", x, y);
    }
    svg += fmt::format("<g class=\"route\" id=\"route-{}\">\n", r);
    svg += fmt::format(
        "  <polyline class=\"route\" points=\"{}\" fill=\"none\" stroke=\"{}\" "
        "stroke-width=\"2\"/>\n",
        points, color);
    for (const std::size_t h : route.visits) {
      const auto [x, y] = px(inst.base.houses[h]);
      svg += fmt::format(
          "  <circle class=\"house\" cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"4\" fill=\"{}\"/>\n", x,
          y, color);
    }
    svg += "</g>\n";
  }

  const auto [dx, dy] = px(inst.base.depot);
  svg += fmt::format(
      "<rect class=\"depot\" x=\"{:.2f}\" y=\"{:.2f}\" width=\"12\" height=\"12\" "
      "fill=\"black\"/>\n",
      dx - 6.0, dy - 6.0);

  const double legend_x = left + side + 30.0;
  svg += "<g class=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
  for (std::size_t r = 0; r < plan.size(); ++r) {
    const double y = top + 18.0 * static_cast<double>(r);
    svg += fmt::format(
        "  <g class=\"legend-entry\"><rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"12\" "
        "height=\"12\" fill=\"{}\"/><text x=\"{:.2f}\" y=\"{:.2f}\">{}</text></g>\n",
        legend_x, y, spec.colors[r % spec.colors.size()], legend_x + 18.0, y + 10.0,
        xml_escape(legend_label(spec, r, plan.routes[r], plan.capacity)));
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

}  // namespace evacroute
