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

#ifndef MGSPA_JOINT_INDEX_H_
#define MGSPA_JOINT_INDEX_H_

#include <span>
#include <vector>

namespace mgspa {

// Mixed-radix encoding of per-agent indices into a single joint index.
// Position 0 is the most significant digit, so for two binary agents
// (a1, a2) maps to 2 * a1 + a2.
class JointIndexer {
 public:
  JointIndexer() = default;
  explicit JointIndexer(std::vector<int> radices);

  int size() const { return size_; }
  int num_positions() const { return static_cast<int>(radices_.size()); }
  int radix(int position) const { return radices_[position]; }

  int Encode(std::span<const int> digits) const;
  std::vector<int> Decode(int index) const;
  int Digit(int index, int position) const;

 private:
  std::vector<int> radices_;
  std::vector<int> strides_;
  int size_ = 1;
};

}  // namespace mgspa

#endif  // MGSPA_JOINT_INDEX_H_
