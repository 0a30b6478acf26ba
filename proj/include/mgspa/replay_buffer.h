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

#ifndef MGSPA_REPLAY_BUFFER_H_
#define MGSPA_REPLAY_BUFFER_H_

#include <Eigen/Dense>
#include <vector>

#include "mgspa/common.h"

namespace mgspa {

struct TransitionLayout {
  int num_agents = 2;
  int obs_dim = 10;
  int act_dim = 2;
  // Width of one agent's stored policy input (frames times obs_dim).
  int actor_input_dim = 10;

  int Width() const {
    return num_agents * (3 * obs_dim + act_dim + actor_input_dim + 1);
  }
};

// One step of joint play. Every field is the per-agent concatenation.
struct ContinuousTransition {
  std::vector<double> obs;          // s
  std::vector<double> act;          // a
  std::vector<double> pert;         // b
  std::vector<double> actor_input;  // s~, frame stacked
  std::vector<double> rew;          // r
  std::vector<double> next_obs;     // s'
};

// Per-agent views of K sampled transitions; row k is sample k.
struct Minibatch {
  std::vector<Eigen::MatrixXd> obs;
  std::vector<Eigen::MatrixXd> act;
  std::vector<Eigen::MatrixXd> pert;
  std::vector<Eigen::MatrixXd> actor_input;
  std::vector<Eigen::MatrixXd> next_obs;
  Eigen::MatrixXd rew;  // K x num_agents
  int size() const { return static_cast<int>(rew.rows()); }
};

class ReplayBuffer {
 public:
  ReplayBuffer(int capacity, TransitionLayout layout);

  void Add(const ContinuousTransition& t);
  int size() const { return size_; }
  int capacity() const { return capacity_; }
  const TransitionLayout& layout() const { return layout_; }

  // `k` distinct indices drawn uniformly.
  std::vector<int> SampleIndices(int k, Rng& rng) const;
  Minibatch Gather(const std::vector<int>& indices) const;
  Minibatch Sample(int k, Rng& rng) const {
    return Gather(SampleIndices(k, rng));
  }

 private:
  int capacity_;
  TransitionLayout layout_;
  std::vector<double> data_;
  int size_ = 0;
  int next_ = 0;
};

}  // namespace mgspa

#endif  // MGSPA_REPLAY_BUFFER_H_
