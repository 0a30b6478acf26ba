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

#include "mgspa/joint_index.h"

#include "mgspa/common.h"

namespace mgspa {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfiguration: return "configuration";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kShapeMismatch: return "shape-mismatch";
    case ErrorKind::kSolveFailure: return "solve-failure";
    case ErrorKind::kDivergence: return "divergence";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

JointIndexer::JointIndexer(std::vector<int> radices)
    : radices_(std::move(radices)), strides_(radices_.size()) {
  size_ = 1;
  for (int p = num_positions() - 1; p >= 0; --p) {
    Require(radices_[p] > 0, ErrorKind::kInvalidArgument,
            "joint index radix must be positive");
    strides_[p] = size_;
    size_ *= radices_[p];
  }
}

int JointIndexer::Encode(std::span<const int> digits) const {
  Require(static_cast<int>(digits.size()) == num_positions(),
          ErrorKind::kShapeMismatch, "joint index digit count mismatch");
  int index = 0;
  for (int p = 0; p < num_positions(); ++p) {
    Require(digits[p] >= 0 && digits[p] < radices_[p],
            ErrorKind::kInvalidArgument, "joint index digit out of range");
    index += digits[p] * strides_[p];
  }
  return index;
}

std::vector<int> JointIndexer::Decode(int index) const {
  std::vector<int> digits(radices_.size());
  for (int p = 0; p < num_positions(); ++p) digits[p] = Digit(index, p);
  return digits;
}

int JointIndexer::Digit(int index, int position) const {
  return (index / strides_[position]) % radices_[position];
}

}  // namespace mgspa
