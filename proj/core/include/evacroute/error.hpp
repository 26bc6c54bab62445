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

#ifndef EVACROUTE_ERROR_HPP_
#define EVACROUTE_ERROR_HPP_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace evacroute {

enum class ErrorCode {
  kMissingSection,
  kMalformedRecord,
  kDimensionMismatch,
  kInvalidInstance,
  kOutOfRange,
  kDegenerateGeometry,
  kInvalidPlan,
  kDemandExceedsCapacity,
  kTooLarge,
  kShapeMismatch,
  kNonFiniteLoss,
  kVersionMismatch,
  kCorruptCheckpoint,
  kDivisionByZero,
  kInvalidConfig,
  kIo,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this exception; callers switch on
// code() rather than on the message text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<int> line = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  // 1-based source line for parse errors.
  std::optional<int> line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  std::optional<int> line_;
};

}  // namespace evacroute

#endif  // EVACROUTE_ERROR_HPP_
