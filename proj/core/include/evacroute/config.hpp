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
#ifndef EVACROUTE_CONFIG_HPP_
#define EVACROUTE_CONFIG_HPP_

#include <string>

#include "evacroute/nn/train.hpp"
#include "evacroute/scenario.hpp"

namespace evacroute {

// JSON configuration files. Schema violations throw Error(kInvalidConfig)
// whose message starts with the offending field path, e.g.
// "$.datasets[1].houses: expected a positive integer".
//
// Relative dataset and checkpoint paths resolve against base_dir.
GridConfig parse_grid_config(const std::string& json_text, const std::string& base_dir = ".");
GridConfig load_grid_config(const std::string& path);

nn::TrainConfig parse_train_config(const std::string& json_text);
nn::TrainConfig load_train_config(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace evacroute

#endif  // EVACROUTE_CONFIG_HPP_
