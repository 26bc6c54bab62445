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
#include "evacroute/instance.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "evacroute/error.hpp"

namespace evacroute {

int EvacInstance::total_demand() const noexcept {
  return std::accumulate(demands.begin(), demands.end(), 0);
}

int EvacInstance::max_demand() const noexcept {
  return demands.empty() ? 0 : *std::max_element(demands.begin(), demands.end());
}

void check_instance(const EvacInstance& inst) {
  if (inst.houses.empty()) {
    throw Error(ErrorCode::kInvalidInstance, "instance has no houses");
  }
  if (inst.demands.size() != inst.houses.size()) {
    throw Error(ErrorCode::kInvalidInstance,
                fmt::format("{} demands for {} houses", inst.demands.size(),
                            inst.houses.size()));
  }
  if (!(inst.side_km > 0.0) || !std::isfinite(inst.side_km)) {
    throw Error(ErrorCode::kInvalidInstance, "side_km must be positive");
  }
  auto finite = [](Point p) { return std::isfinite(p.x) && std::isfinite(p.y); };
  if (!finite(inst.depot)) {
    throw Error(ErrorCode::kInvalidInstance, "depot coordinate is not finite");
  }
  for (std::size_t i = 0; i < inst.houses.size(); ++i) {
    if (!finite(inst.houses[i])) {
      throw Error(ErrorCode::kInvalidInstance,
                  fmt::format("house {} coordinate is not finite", i));
    }
    if (inst.houses[i] == inst.depot) {
      throw Error(ErrorCode::kInvalidInstance,
                  fmt::format("house {} sits on the depot", i));
    }
    if (inst.demands[i] < 1) {
      throw Error(ErrorCode::kInvalidInstance,
                  fmt::format("house {} has demand {}", i, inst.demands[i]));
    }
  }
}

void check_demand_model(const DemandModel& model) {
  if (!std::isfinite(model.mean) || !(model.std_dev >= 0.0) ||
      !std::isfinite(model.std_dev) || model.min_size < 1 ||
      model.max_size < model.min_size) {
    throw Error(ErrorCode::kInvalidConfig, "invalid demand model");
  }
}

int household_size(double draw, const DemandModel& model) {
  // std::round rounds halfway cases away from zero.
  const double rounded = std::round(draw);
  if (rounded <= model.min_size) return model.min_size;
  if (rounded >= model.max_size) return model.max_size;
  return static_cast<int>(rounded);
}

namespace {

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view tok, int line, std::string_view what) {
  T value{};
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw Error(ErrorCode::kMalformedRecord,
                fmt::format("cannot read {} from '{}'", what, tok), line);
  }
  return value;
}

enum class Section { kNone, kCoords, kDemands, kDepots, kOther };

bool is_keyword_line(std::string_view line) {
  const char c = line.front();
  return std::isalpha(static_cast<unsigned char>(c)) != 0;
}

}  // namespace

EvacInstance parse_cvrplib(std::string_view text) {
  std::map<std::string, std::string, std::less<>> keywords;
  std::map<int, std::pair<Point, int>> coords;  // id -> (point, line)
  std::map<int, std::pair<int, int>> demands;   // id -> (demand, line)
  std::vector<std::pair<int, int>> depots;      // (id, line)
  bool seen_coords = false, seen_demands = false, seen_depots = false;
  bool depot_closed = false;
  Section section = Section::kNone;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto line = trim(raw);
    if (line.empty()) continue;

    if (is_keyword_line(line)) {
      const auto colon = line.find(':');
      std::string key(trim(line.substr(0, colon == line.npos ? line.size() : colon)));
      std::string value;
      if (colon != line.npos) {
        value = std::string(trim(line.substr(colon + 1)));
      } else if (const auto sp = key.find_first_of(" \t"); sp != std::string::npos) {
        value = std::string(trim(std::string_view(key).substr(sp)));
        key = key.substr(0, sp);
      }
      if (key == "EOF") break;
      if (key == "NODE_COORD_SECTION") {
        section = Section::kCoords;
        seen_coords = true;
      } else if (key == "DEMAND_SECTION") {
        section = Section::kDemands;
        seen_demands = true;
      } else if (key == "DEPOT_SECTION") {
        section = Section::kDepots;
        seen_depots = true;
      } else if (key.ends_with("_SECTION")) {
        section = Section::kOther;
      } else {
        section = Section::kNone;
        keywords[key] = value;
      }
      continue;
    }

    const auto tok = tokens(line);
    switch (section) {
      case Section::kCoords: {
        if (tok.size() != 3) {
          throw Error(ErrorCode::kMalformedRecord,
                      "coordinate record needs 'index x y'", line_no);
        }
        const int id = parse_number<int>(tok[0], line_no, "node index");
        const Point p{parse_number<double>(tok[1], line_no, "x"),
                      parse_number<double>(tok[2], line_no, "y")};
        if (!coords.emplace(id, std::pair{p, line_no}).second) {
          throw Error(ErrorCode::kMalformedRecord,
                      fmt::format("duplicate coordinate for node {}", id), line_no);
        }
        break;
      }
      case Section::kDemands: {
        if (tok.size() != 2) {
          throw Error(ErrorCode::kMalformedRecord,
                      "demand record needs 'index demand'", line_no);
        }
        const int id = parse_number<int>(tok[0], line_no, "node index");
        const int d = parse_number<int>(tok[1], line_no, "demand");
        if (!demands.emplace(id, std::pair{d, line_no}).second) {
          throw Error(ErrorCode::kMalformedRecord,
                      fmt::format("duplicate demand for node {}", id), line_no);
        }
        break;
      }
      case Section::kDepots: {
        for (const auto t : tok) {
          const int id = parse_number<int>(t, line_no, "depot index");
          if (id == -1) {
            depot_closed = true;
          } else if (!depot_closed) {
            depots.emplace_back(id, line_no);
          }
        }
        break;
      }
      case Section::kOther:
        break;
      case Section::kNone:
        throw Error(ErrorCode::kMalformedRecord,
                    "data record outside of any section", line_no);
    }
  }

  for (const char* key : {"NAME", "DIMENSION", "CAPACITY"}) {
    if (!keywords.contains(key)) {
      throw Error(ErrorCode::kMissingSection, fmt::format("missing {}", key));
    }
  }
  if (!seen_coords) throw Error(ErrorCode::kMissingSection, "missing NODE_COORD_SECTION");
  if (!seen_demands) throw Error(ErrorCode::kMissingSection, "missing DEMAND_SECTION");
  if (!seen_depots || depots.empty()) {
    throw Error(ErrorCode::kMissingSection, "missing DEPOT_SECTION");
  }

  const auto& dim_text = keywords.find("DIMENSION")->second;
  const int dimension = parse_number<int>(dim_text, 0, "DIMENSION");
  const int capacity =
      parse_number<int>(keywords.find("CAPACITY")->second, 0, "CAPACITY");
  if (dimension < 2) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("DIMENSION {} leaves no houses", dimension));
  }
  if (static_cast<int>(coords.size()) != dimension ||
      static_cast<int>(demands.size()) != dimension) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("DIMENSION {} but {} coordinates and {} demands",
                            dimension, coords.size(), demands.size()));
  }
  for (const auto& [id, rec] : coords) {
    if (id < 1 || id > dimension) {
      throw Error(ErrorCode::kMalformedRecord,
                  fmt::format("node index {} outside 1..{}", id, dimension),
                  rec.second);
    }
  }
  for (const auto& [id, rec] : demands) {
    if (id < 1 || id > dimension) {
      throw Error(ErrorCode::kMalformedRecord,
                  fmt::format("node index {} outside 1..{}", id, dimension),
                  rec.second);
    }
  }
  if (depots.size() > 1) {
    throw Error(ErrorCode::kMalformedRecord, "only a single depot is supported",
                depots[1].second);
  }
  const auto [depot_id, depot_line] = depots.front();
  if (depot_id < 1 || depot_id > dimension) {
    throw Error(ErrorCode::kMalformedRecord,
                fmt::format("depot index {} outside 1..{}", depot_id, dimension),
                depot_line);
  }

  EvacInstance inst;
  inst.name = keywords.find("NAME")->second;
  inst.file_capacity = capacity;
  inst.depot = coords.at(depot_id).first;
  for (int id = 1; id <= dimension; ++id) {
    if (id == depot_id) continue;
    const auto [d, d_line] = demands.at(id);
    if (d < 1) {
      throw Error(ErrorCode::kMalformedRecord,
                  fmt::format("house {} has demand {}; expected >= 1", id, d), d_line);
    }
    if (coords.at(id).first == inst.depot) {
      throw Error(ErrorCode::kMalformedRecord,
                  fmt::format("house {} sits on the depot", id), coords.at(id).second);
    }
    inst.houses.push_back(coords.at(id).first);
    inst.demands.push_back(d);
  }
  inst.file_demands = inst.demands;
  check_instance(inst);
  return inst;
}

EvacInstance load_cvrplib_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_cvrplib(buf.str());
}

std::string serialize_cvrplib(const EvacInstance& inst) {
  const int capacity = inst.file_capacity.value_or(inst.total_demand());
  std::string out;
  auto line = [&out]<typename... Args>(fmt::format_string<Args...> f, Args&&... args) {
    out += fmt::format(f, std::forward<Args>(args)...);
    out += '\n';
  };
  line("NAME : {}", inst.name);
  line("TYPE : CVRP");
  line("DIMENSION : {}", inst.size() + 1);
  line("EDGE_WEIGHT_TYPE : MAN_2D");
  line("CAPACITY : {}", capacity);
  line("NODE_COORD_SECTION");
  line("1 {} {}", inst.depot.x, inst.depot.y);
  for (std::size_t i = 0; i < inst.size(); ++i) {
    line("{} {} {}", i + 2, inst.houses[i].x, inst.houses[i].y);
  }
  line("DEMAND_SECTION");
  line("1 0");
  for (std::size_t i = 0; i < inst.size(); ++i) {
    line("{} {}", i + 2, inst.demands[i]);
  }
  line("DEPOT_SECTION");
  line("1");
  line("-1");
  line("EOF");
  return out;
}

EvacInstance truncate_instance(const EvacInstance& inst, std::size_t k) {
  if (k < 1 || k > inst.size()) {
    throw Error(ErrorCode::kOutOfRange,
                fmt::format("cannot keep {} of {} houses", k, inst.size()));
  }
  EvacInstance out = inst;
  out.houses.resize(k);
  out.demands.resize(k);
  if (out.file_demands.size() > k) out.file_demands.resize(k);
  return out;
}

std::vector<int> sample_household_sizes(std::size_t count,
                                        const DemandModel& model) {
  check_demand_model(model);
  std::mt19937_64 rng(model.seed);
  std::vector<int> sizes;
  sizes.reserve(count);
  if (model.std_dev == 0.0) {
    sizes.assign(count, household_size(model.mean, model));
    return sizes;
  }
  std::normal_distribution<double> normal(model.mean, model.std_dev);
  for (std::size_t i = 0; i < count; ++i) {
    sizes.push_back(household_size(normal(rng), model));
  }
  return sizes;
}

EvacInstance regenerate_demands(const EvacInstance& inst,
                                const DemandModel& model) {
  EvacInstance out = inst;
  if (out.file_demands.size() != out.demands.size()) out.file_demands = inst.demands;
  out.demands = sample_household_sizes(inst.size(), model);
  return out;
}

EvacInstance with_file_demands(const EvacInstance& inst) {
  if (inst.file_demands.size() != inst.size()) {
    throw Error(ErrorCode::kInvalidInstance, "instance carries no file demands");
  }
  EvacInstance out = inst;
  out.demands = inst.file_demands;
  check_instance(out);
  return out;
}

NormalizedInstance normalize(const EvacInstance& inst) {
  check_instance(inst);
  double min_x = inst.depot.x, max_x = inst.depot.x;
  double min_y = inst.depot.y, max_y = inst.depot.y;
  for (const Point& p : inst.houses) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  const double range = std::max(max_x - min_x, max_y - min_y);
  if (!(range > 0.0)) {
    throw Error(ErrorCode::kDegenerateGeometry, "all points coincide");
  }
  auto map = [&](Point p) { return Point{(p.x - min_x) / range, (p.y - min_y) / range}; };

  NormalizedInstance out{inst, inst.side_km};
  out.base.depot = map(inst.depot);
  for (Point& p : out.base.houses) p = map(p);
  return out;
}

}  // namespace evacroute
