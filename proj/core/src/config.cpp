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
#include "evacroute/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "evacroute/error.hpp"

namespace evacroute {

using nlohmann::json;
namespace fs = std::filesystem;

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "short write to " + path);
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::kInvalidConfig, fmt::format("{}: {}", path, what));
}

// Walks one JSON object, checking types and remembering which keys were read
// so that unknown keys can be rejected.
class Fields {
 public:
  Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  std::string at(const std::string& key) const { return path_ + "." + key; }
  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }
  const json& get(const std::string& key) {
    if (!has(key)) fail(at(key), "missing required field");
    return j_.at(key);
  }

  double number(const std::string& key, double fallback) {
    return has(key) ? as_number(j_.at(key), at(key)) : fallback;
  }
  std::uint64_t positive_count(const std::string& key, std::uint64_t fallback) {
    return has(key) ? as_count(j_.at(key), at(key), true) : fallback;
  }
  std::uint64_t count(const std::string& key, std::uint64_t fallback) {
    return has(key) ? as_count(j_.at(key), at(key), false) : fallback;
  }
  std::string string(const std::string& key) {
    const json& v = get(key);
    if (!v.is_string()) fail(at(key), "expected a string");
    return v.get<std::string>();
  }
  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    if (!j_.at(key).is_boolean()) fail(at(key), "expected true or false");
    return j_.at(key).get<bool>();
  }

  void reject_unknown() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.contains(key)) fail(at(key), "unknown field");
    }
  }

  static double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
  }
  static std::uint64_t as_count(const json& v, const std::string& path, bool positive) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < (positive ? 1 : 0)) {
      fail(path, positive ? "expected a positive integer" : "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail("$", std::string("invalid JSON: ") + e.what());
  }
}

std::string resolve(const std::string& base_dir, const std::string& p) {
  const fs::path path(p);
  if (path.is_absolute()) return p;
  return (fs::path(base_dir) / path).lexically_normal().string();
}

template <typename F>
void for_each_item(const json& arr, const std::string& path, F&& fn) {
  if (!arr.is_array() || arr.empty()) fail(path, "expected a non-empty array");
  for (std::size_t i = 0; i < arr.size(); ++i) fn(arr[i], fmt::format("{}[{}]", path, i));
}

}  // namespace

GridConfig parse_grid_config(const std::string& json_text, const std::string& base_dir) {
  const json root = parse_json(json_text);
  Fields f(root, "$");
  GridConfig cfg;

  for_each_item(f.get("datasets"), f.at("datasets"), [&](const json& item, const std::string& path) {
    Fields d(item, path);
    DatasetSpec spec;
    spec.name = d.string("name");
    spec.path = resolve(base_dir, d.string("path"));
    if (d.has("houses")) spec.houses = d.positive_count("houses", 1);
    spec.demand_seed = d.count("demand_seed", 0);
    spec.use_file_demands = d.boolean("use_file_demands", false);
    spec.side_km = d.number("side_km", 3.0);
    if (!(spec.side_km > 0.0)) fail(d.at("side_km"), "must be positive");
    d.reject_unknown();
    cfg.datasets.push_back(std::move(spec));
  });

  if (f.has("capacities")) {
    cfg.capacities.clear();
    for_each_item(root.at("capacities"), f.at("capacities"), [&](const json& v, const std::string& path) {
      cfg.capacities.push_back(static_cast<int>(Fields::as_count(v, path, true)));
    });
  }
  if (f.has("transit_hours")) {
    cfg.transit_hours.clear();
    for_each_item(root.at("transit_hours"), f.at("transit_hours"), [&](const json& v, const std::string& path) {
      const double t = Fields::as_number(v, path);
      if (!(t >= 0.0)) fail(path, "must be >= 0");
      cfg.transit_hours.push_back(t);
    });
  }
  if (f.has("solvers")) {
    cfg.solvers.clear();
    for_each_item(root.at("solvers"), f.at("solvers"), [&](const json& v, const std::string& path) {
      if (!v.is_string()) fail(path, "expected \"sweep\", \"neural\" or \"exact\"");
      try {
        cfg.solvers.push_back(solver_from_string(v.get<std::string>()));
      } catch (const Error&) {
        fail(path, "expected \"sweep\", \"neural\" or \"exact\"");
      }
    });
  }
  if (f.has("checkpoint")) cfg.checkpoint = resolve(base_dir, f.string("checkpoint"));

  cfg.base.speed_kmh = f.number("speed_kmh", 8.0);
  if (!(cfg.base.speed_kmh > 0.0)) fail(f.at("speed_kmh"), "must be positive");
  cfg.base.satisfactory_hours = f.number("satisfactory_hours", 24.0);
  cfg.base.allowed_hours = f.number("allowed_hours", 42.0);
  if (!(cfg.base.satisfactory_hours < cfg.base.allowed_hours)) {
    fail(f.at("satisfactory_hours"), "must be below allowed_hours");
  }
  cfg.base.registry_size = static_cast<int>(f.positive_count("registry_size", 4000));
  cfg.sweep_start_angle_deg = f.number("sweep_start_angle_deg", 0.0);
  f.reject_unknown();

  const bool needs_model =
      std::find(cfg.solvers.begin(), cfg.solvers.end(), SolverKind::kNeural) != cfg.solvers.end();
  if (needs_model && !cfg.checkpoint) {
    fail("$.checkpoint", "required when solvers include \"neural\"");
  }
  return cfg;
}

GridConfig load_grid_config(const std::string& path) {
  const auto dir = fs::path(path).parent_path().string();
  return parse_grid_config(read_text_file(path), dir.empty() ? "." : dir);
}

nn::TrainConfig parse_train_config(const std::string& json_text) {
  const json root = parse_json(json_text);
  Fields f(root, "$");
  nn::TrainConfig cfg;
  cfg.batch_size = f.positive_count("batch_size", cfg.batch_size);
  cfg.n_epochs = f.positive_count("n_epochs", cfg.n_epochs);
  cfg.instances_per_epoch = f.positive_count("instances_per_epoch", cfg.instances_per_epoch);
  cfg.learning_rate = f.number("learning_rate", cfg.learning_rate);
  if (!(cfg.learning_rate > 0.0)) fail(f.at("learning_rate"), "must be positive");
  cfg.baseline_update_significance =
      f.number("baseline_update_significance", cfg.baseline_update_significance);
  if (!(cfg.baseline_update_significance > 0.0 && cfg.baseline_update_significance < 1.0)) {
    fail(f.at("baseline_update_significance"), "must lie in (0, 1)");
  }
  cfg.instance_size_n = f.positive_count("instance_size_n", cfg.instance_size_n);
  cfg.capacity = static_cast<int>(f.positive_count("capacity", static_cast<std::uint64_t>(cfg.capacity)));
  cfg.seed = f.count("seed", cfg.seed);
  cfg.eval_size = f.positive_count("eval_size", cfg.eval_size);
  if (cfg.eval_size < 2) fail(f.at("eval_size"), "must be at least 2");
  cfg.max_grad_norm = f.number("max_grad_norm", cfg.max_grad_norm);
  if (!(cfg.max_grad_norm >= 0.0)) fail(f.at("max_grad_norm"), "must be >= 0");
  if (f.has("optimizer")) {
    const std::string name = f.string("optimizer");
    if (name == "sgd") {
      cfg.optimizer = nn::Optimizer::kSgd;
    } else if (name == "adam") {
      cfg.optimizer = nn::Optimizer::kAdam;
    } else {
      fail(f.at("optimizer"), "expected \"sgd\" or \"adam\"");
    }
  }
  if (f.has("architecture")) {
    Fields a(root.at("architecture"), f.at("architecture"));
    cfg.arch.embed_dim = static_cast<int>(a.positive_count("embed_dim", 128));
    cfg.arch.n_heads = static_cast<int>(a.positive_count("n_heads", 8));
    cfg.arch.n_encoder_layers = static_cast<int>(a.count("n_encoder_layers", 3));
    cfg.arch.feedforward_dim = static_cast<int>(a.positive_count("feedforward_dim", 512));
    if (cfg.arch.embed_dim % cfg.arch.n_heads != 0) {
      fail(a.at("n_heads"), "must divide embed_dim");
    }
    a.reject_unknown();
  }
  f.reject_unknown();
  if (cfg.capacity < cfg.demands.max_size) {
    fail(f.at("capacity"), fmt::format("must be at least the largest household ({})",
                                       cfg.demands.max_size));
  }
  return cfg;
}

nn::TrainConfig load_train_config(const std::string& path) {
  return parse_train_config(read_text_file(path));
}

}  // namespace evacroute
