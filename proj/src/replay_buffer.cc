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

#include "mgspa/replay_buffer.h"

#include <algorithm>
#include <unordered_set>

namespace mgspa {

ReplayBuffer::ReplayBuffer(int capacity, TransitionLayout layout)
    : capacity_(capacity), layout_(layout) {
  Require(capacity > 0, ErrorKind::kConfiguration,
          "replay capacity must be positive");
}

void ReplayBuffer::Add(const ContinuousTransition& t) {
  const TransitionLayout& L = layout_;
  const int n = L.num_agents;
  Require(static_cast<int>(t.obs.size()) == n * L.obs_dim &&
              static_cast<int>(t.act.size()) == n * L.act_dim &&
              static_cast<int>(t.pert.size()) == n * L.obs_dim &&
              static_cast<int>(t.actor_input.size()) ==
                  n * L.actor_input_dim &&
              static_cast<int>(t.rew.size()) == n &&
              static_cast<int>(t.next_obs.size()) == n * L.obs_dim,
          ErrorKind::kShapeMismatch, "transition does not match buffer layout");
  const std::size_t width = L.Width();
  if (size_ < capacity_) data_.resize(data_.size() + width);
  double* row = data_.data() + static_cast<std::size_t>(next_) * width;
  for (const auto* field :
       {&t.obs, &t.act, &t.pert, &t.actor_input, &t.rew, &t.next_obs}) {
    row = std::copy(field->begin(), field->end(), row);
  }
  next_ = (next_ + 1) % capacity_;
  size_ = std::min(size_ + 1, capacity_);
}

std::vector<int> ReplayBuffer::SampleIndices(int k, Rng& rng) const {
  Require(k > 0 && k <= size_, ErrorKind::kInvalidArgument,
          "minibatch larger than the buffer");
  // Floyd's algorithm keeps the draw order deterministic for a given rng.
  std::vector<int> out;
  std::unordered_set<int> seen;
  out.reserve(k);
  for (int j = size_ - k; j < size_; ++j) {
    const int t = std::uniform_int_distribution<int>(0, j)(rng);
    const int pick = seen.count(t) ? j : t;
    seen.insert(pick);
    out.push_back(pick);
  }
  return out;
}

Minibatch ReplayBuffer::Gather(const std::vector<int>& indices) const {
  const TransitionLayout& L = layout_;
  const int n = L.num_agents;
  const int k = static_cast<int>(indices.size());
  Minibatch mb;
  auto alloc = [&](std::vector<Eigen::MatrixXd>& v, int cols) {
    v.assign(n, Eigen::MatrixXd(k, cols));
  };
  alloc(mb.obs, L.obs_dim);
  alloc(mb.act, L.act_dim);
  alloc(mb.pert, L.obs_dim);
  alloc(mb.actor_input, L.actor_input_dim);
  alloc(mb.next_obs, L.obs_dim);
  mb.rew.resize(k, n);
  const std::size_t width = L.Width();
  for (int r = 0; r < k; ++r) {
    Require(indices[r] >= 0 && indices[r] < size_, ErrorKind::kInvalidArgument,
            "replay index out of range");
    const double* p = data_.data() + static_cast<std::size_t>(indices[r]) * width;
    auto take = [&](std::vector<Eigen::MatrixXd>& v, int cols) {
      for (int i = 0; i < n; ++i) {
        for (int c = 0; c < cols; ++c) v[i](r, c) = *p++;
      }
    };
    take(mb.obs, L.obs_dim);
    take(mb.act, L.act_dim);
    take(mb.pert, L.obs_dim);
    take(mb.actor_input, L.actor_input_dim);
    for (int i = 0; i < n; ++i) mb.rew(r, i) = *p++;
    take(mb.next_obs, L.obs_dim);
  }
  return mb;
}

}  // namespace mgspa
