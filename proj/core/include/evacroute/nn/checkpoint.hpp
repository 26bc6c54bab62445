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
#ifndef EVACROUTE_NN_CHECKPOINT_HPP_
#define EVACROUTE_NN_CHECKPOINT_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "evacroute/nn/policy.hpp"

namespace evacroute::nn {

// Binary layout, all integers little-endian:
//
//   offset  size  field
//        0     8  magic "EVRTPOL\0"
//        8     4  format version
//       12     4  embed_dim
//       16     4  n_heads
//       20     4  n_encoder_layers
//       24     4  feedforward_dim
//       28     8  seed
//       36     8  weight count
//       44     4  CRC-32 of bytes [0, 44) followed by the weight bytes
//       48   4*n  weights, IEEE-754 binary32
inline constexpr std::uint32_t kCheckpointVersion = 1;
inline constexpr std::size_t kCheckpointHeaderSize = 48;

std::vector<std::uint8_t> save_checkpoint(const PolicyParams& params);
PolicyParams load_checkpoint(std::span<const std::uint8_t> bytes);

void write_checkpoint_file(const std::string& path, const PolicyParams& params);
PolicyParams read_checkpoint_file(const std::string& path);

// Hex CRC-32 of the serialized checkpoint; identifies a policy in result rows.
std::string checkpoint_hash(const PolicyParams& params);

}  // namespace evacroute::nn

#endif  // EVACROUTE_NN_CHECKPOINT_HPP_
