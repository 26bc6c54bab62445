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
#include "evacroute/nn/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include <fmt/format.h>
#include <zlib.h>

#include "evacroute/error.hpp"

namespace evacroute::nn {

namespace {

constexpr std::array<std::uint8_t, 8> kMagic = {'E', 'V', 'R', 'T', 'P', 'O', 'L', '\0'};
constexpr std::size_t kCrcOffset = 44;

template <typename T>
void put(std::vector<std::uint8_t>& out, T value) {
  using U = std::make_unsigned_t<T>;
  auto u = static_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<std::uint8_t>(u & 0xffu));
    u = static_cast<U>(u >> 8);
  }
}

template <typename T>
T get(std::span<const std::uint8_t> bytes, std::size_t at) {
  std::make_unsigned_t<T> u = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    u |= static_cast<std::make_unsigned_t<T>>(bytes[at + i]) << (8 * i);
  }
  return static_cast<T>(u);
}

std::uint32_t crc_of(std::span<const std::uint8_t> header,
                     std::span<const std::uint8_t> payload) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, header.data(), static_cast<uInt>(header.size()));
  crc = crc32(crc, payload.data(), static_cast<uInt>(payload.size()));
  return static_cast<std::uint32_t>(crc);
}

}  // namespace

std::vector<std::uint8_t> save_checkpoint(const PolicyParams& params) {
  check_params(params);
  std::vector<std::uint8_t> out(kMagic.begin(), kMagic.end());
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(params.arch.embed_dim));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(params.arch.n_heads));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(params.arch.n_encoder_layers));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(params.arch.feedforward_dim));
  put<std::uint64_t>(out, params.seed);
  put<std::uint64_t>(out, params.weights.size());
  put<std::uint32_t>(out, 0);  // CRC placeholder
  out.reserve(out.size() + 4 * params.weights.size());
  for (const float w : params.weights) put<std::uint32_t>(out, std::bit_cast<std::uint32_t>(w));

  const std::span<const std::uint8_t> all(out);
  const std::uint32_t crc =
      crc_of(all.first(kCrcOffset), all.subspan(kCheckpointHeaderSize));
  for (std::size_t i = 0; i < 4; ++i) out[kCrcOffset + i] = (crc >> (8 * i)) & 0xffu;
  return out;
}

PolicyParams load_checkpoint(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kCheckpointHeaderSize ||
      !std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    throw Error(ErrorCode::kCorruptCheckpoint, "not a policy checkpoint");
  }
  const auto version = get<std::uint32_t>(bytes, 8);
  if (version != kCheckpointVersion) {
    throw Error(ErrorCode::kVersionMismatch,
                fmt::format("checkpoint version {}, expected {}", version,
                            kCheckpointVersion));
  }
  PolicyParams params;
  params.arch.embed_dim = static_cast<int>(get<std::uint32_t>(bytes, 12));
  params.arch.n_heads = static_cast<int>(get<std::uint32_t>(bytes, 16));
  params.arch.n_encoder_layers = static_cast<int>(get<std::uint32_t>(bytes, 20));
  params.arch.feedforward_dim = static_cast<int>(get<std::uint32_t>(bytes, 24));
  params.seed = get<std::uint64_t>(bytes, 28);
  const auto count = get<std::uint64_t>(bytes, 36);
  const auto stored_crc = get<std::uint32_t>(bytes, kCrcOffset);

  if (count > (bytes.size() - kCheckpointHeaderSize) / 4 ||
      bytes.size() != kCheckpointHeaderSize + 4 * count) {
    throw Error(ErrorCode::kCorruptCheckpoint,
                fmt::format("expected {} weight bytes, found {}", 4 * count,
                            bytes.size() - kCheckpointHeaderSize));
  }
  if (crc_of(bytes.first(kCrcOffset), bytes.subspan(kCheckpointHeaderSize)) != stored_crc) {
    throw Error(ErrorCode::kCorruptCheckpoint, "checksum mismatch");
  }
  params.weights.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    params.weights[i] =
        std::bit_cast<float>(get<std::uint32_t>(bytes, kCheckpointHeaderSize + 4 * i));
  }
  try {
    check_params(params);
  } catch (const Error& e) {
    throw Error(ErrorCode::kCorruptCheckpoint, e.what());
  }
  return params;
}

void write_checkpoint_file(const std::string& path, const PolicyParams& params) {
  const auto bytes = save_checkpoint(params);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "short write to " + path);
}

PolicyParams read_checkpoint_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  return load_checkpoint(bytes);
}

std::string checkpoint_hash(const PolicyParams& params) {
  const auto bytes = save_checkpoint(params);
  const uLong crc = crc32(crc32(0L, Z_NULL, 0), bytes.data(),
                          static_cast<uInt>(bytes.size()));
  return fmt::format("{:08x}", static_cast<std::uint32_t>(crc));
}

}  // namespace evacroute::nn
