// Copyright 2026 The mgspa Authors. All rights reserved.
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

#ifndef MGSPA_COMMON_H_
#define MGSPA_COMMON_H_

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mgspa {

using Rng = std::mt19937_64;

// Independent generator for one consumer of a run seed.
inline Rng DerivedRng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return Rng(seq);
}

enum class ErrorKind {
  kConfiguration,
  kParse,
  kInvalidArgument,
  kShapeMismatch,
  kSolveFailure,
  kDivergence,
  kIo,
};

std::string_view ErrorKindName(ErrorKind kind);

// Base class for every error thrown by the library. The kind is stable and
// is what the CLI reports in its machine-readable error record.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline void Require(bool condition, ErrorKind kind, const std::string& msg) {
  if (!condition) throw Error(kind, msg);
}

}  // namespace mgspa

#endif  // MGSPA_COMMON_H_
