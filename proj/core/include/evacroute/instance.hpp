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
#ifndef EVACROUTE_INSTANCE_HPP_
#define EVACROUTE_INSTANCE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace evacroute {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// A neighborhood: one rescue center (depot) and the houses on the special
/// needs registry. House i has demands[i] persons to pick up.
///
/// Coordinates are in whatever unit the source file used. The square the
/// neighborhood occupies is side_km kilometers across once normalized.
struct EvacInstance {
  std::string name;
  Point depot;
  std::vector<Point> houses;
  std::vector<int> demands;
  double side_km = 3.0;

  // Metadata carried over from a CVRPLIB file. Scenario capacity always
  // overrides file_capacity; file_demands keeps the demands before
  // regeneration so benchmark-style runs can restore them.
  std::optional<int> file_capacity;
  std::vector<int> file_demands;

  std::size_t size() const noexcept { return houses.size(); }
  int total_demand() const noexcept;
  int max_demand() const noexcept;

  friend bool operator==(const EvacInstance&, const EvacInstance&) = default;
};

// Throws Error(kInvalidInstance) when the structural invariants do not hold.
void check_instance(const EvacInstance& inst);

/// Instance mapped into the unit square with a single shared scale.
struct NormalizedInstance {
  EvacInstance base;
  double scale_km_per_unit = 3.0;

  std::size_t size() const noexcept { return base.size(); }
};

/// Household-size model: rounded, clamped normal draws.
struct DemandModel {
  double mean = 2.44;
  double std_dev = 0.5;
  int min_size = 1;
  int max_size = 4;
  std::uint64_t seed = 0;
};

void check_demand_model(const DemandModel& model);

// Maps one normal draw to a household size: round half away from zero, then
// clamp to [min_size, max_size].
int household_size(double draw, const DemandModel& model);

// Parses CVRPLIB/TSPLIB-style text. Indices in the file are 1-based.
EvacInstance parse_cvrplib(std::string_view text);
EvacInstance load_cvrplib_file(const std::string& path);
std::string serialize_cvrplib(const EvacInstance& inst);

EvacInstance truncate_instance(const EvacInstance& inst, std::size_t k);
EvacInstance regenerate_demands(const EvacInstance& inst,
                                const DemandModel& model);
std::vector<int> sample_household_sizes(std::size_t count,
                                        const DemandModel& model);
// Restores the demands that were read from the file.
EvacInstance with_file_demands(const EvacInstance& inst);

NormalizedInstance normalize(const EvacInstance& inst);

inline double manhattan(Point a, Point b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return (dx < 0 ? -dx : dx) + (dy < 0 ? -dy : dy);
}

inline double manhattan_km(Point a, Point b, double scale_km_per_unit) {
  return manhattan(a, b) * scale_km_per_unit;
}

}  // namespace evacroute

#endif  // EVACROUTE_INSTANCE_HPP_
