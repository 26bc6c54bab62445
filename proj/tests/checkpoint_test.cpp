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
#include <cstdio>
#include <filesystem>

#include <gtest/gtest.h>

#include "evacroute/error.hpp"
#include "evacroute/nn/checkpoint.hpp"
#include "evacroute/nn/train.hpp"

namespace evacroute::nn {
namespace {

ErrorCode load_error(const std::vector<std::uint8_t>& bytes) {
  try {
    load_checkpoint(bytes);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "checkpoint unexpectedly loaded";
  return ErrorCode::kIo;
}

TEST(Checkpoint, RoundTripIsBitExact) {
  const auto params = init_params(Architecture{32, 4, 2, 64}, 12345);
  const auto bytes = save_checkpoint(params);
  EXPECT_EQ(bytes.size(), kCheckpointHeaderSize + 4 * params.weights.size());
  EXPECT_EQ(load_checkpoint(bytes), params);
}

TEST(Checkpoint, TruncatedIsCorrupt) {
  auto bytes = save_checkpoint(init_params(Architecture{16, 2, 1, 32}, 1));
  bytes.pop_back();
  EXPECT_EQ(load_error(bytes), ErrorCode::kCorruptCheckpoint);
  bytes.resize(20);
  EXPECT_EQ(load_error(bytes), ErrorCode::kCorruptCheckpoint);
}

TEST(Checkpoint, FlippedWeightFailsChecksum) {
  auto bytes = save_checkpoint(init_params(Architecture{16, 2, 1, 32}, 1));
  bytes[kCheckpointHeaderSize + 9] ^= 0x10;
  EXPECT_EQ(load_error(bytes), ErrorCode::kCorruptCheckpoint);
}

TEST(Checkpoint, VersionMismatch) {
  auto bytes = save_checkpoint(init_params(Architecture{16, 2, 1, 32}, 1));
  bytes[8] = static_cast<std::uint8_t>(kCheckpointVersion + 1);
  EXPECT_EQ(load_error(bytes), ErrorCode::kVersionMismatch);
}

TEST(Checkpoint, BadMagic) {
  auto bytes = save_checkpoint(init_params(Architecture{16, 2, 1, 32}, 1));
  bytes[0] = 'X';
  EXPECT_EQ(load_error(bytes), ErrorCode::kCorruptCheckpoint);
}

TEST(Checkpoint, ArchitectureTravelsWithWeights) {
  const auto params = init_params(Architecture{64, 4, 2, 128}, 3);
  const auto loaded = load_checkpoint(save_checkpoint(params));
  EXPECT_EQ(loaded.arch.embed_dim, 64);
  const auto emb = encode(random_instance(5, DemandModel{}, 9), 8, loaded);
  EXPECT_EQ(emb.cols(), 64);
  EXPECT_EQ(emb.rows(), 6);
}

TEST(Checkpoint, FileRoundTripAndHash) {
  const auto params = init_params(Architecture{16, 2, 1, 32}, 5);
  const auto path = (std::filesystem::temp_directory_path() / "evacroute_ckpt_test.bin").string();
  write_checkpoint_file(path, params);
  EXPECT_EQ(read_checkpoint_file(path), params);
  std::remove(path.c_str());
  EXPECT_EQ(checkpoint_hash(params), checkpoint_hash(params));
  EXPECT_NE(checkpoint_hash(params), checkpoint_hash(init_params(params.arch, 6)));
  EXPECT_THROW(read_checkpoint_file(path), Error);
}

}  // namespace
}  // namespace evacroute::nn
