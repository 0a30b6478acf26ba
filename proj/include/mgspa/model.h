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

#ifndef MGSPA_MODEL_H_
#define MGSPA_MODEL_H_

#include <span>
#include <vector>

#include "mgspa/common.h"
#include "mgspa/joint_index.h"
#include "mgspa/perturb.h"

namespace mgspa {

// Tabular Markov game with state perturbation adversaries. Agent i is paired
// with adversary i, which rewrites the state agent i observes. Joint actions
// and joint perturbations are flattened with JointIndexer.
//
// Tensor layouts:
//   transition[((s * A + a) * B + b) * S + s_next]
//   rewards[i][(s * A + a) * B + b]
class MgSpaModel {
 public:
  struct Params {
    int num_states = 0;
    std::vector<int> agent_actions;
    std::vector<int> adversary_actions;
    std::vector<double> transition;
    std::vector<std::vector<double>> rewards;
    PerturbFn perturb;
    double gamma = 0.99;
    double epsilon = 1.0;
    BallNorm metric = BallNorm::kLInf;
  };

  // Validates every invariant and throws on violation.
  explicit MgSpaModel(Params params);

  int num_agents() const { return static_cast<int>(p_.agent_actions.size()); }
  int num_states() const { return p_.num_states; }
  int num_agent_actions(int agent) const { return p_.agent_actions[agent]; }
  int num_adversary_actions(int agent) const {
    return p_.adversary_actions[agent];
  }
  int num_joint_actions() const { return a_index_.size(); }
  int num_joint_perturbations() const { return b_index_.size(); }
  // Joint perturbed states range over S^N.
  int num_joint_observations() const { return obs_index_.size(); }

  const JointIndexer& action_index() const { return a_index_; }
  const JointIndexer& perturbation_index() const { return b_index_; }
  const JointIndexer& observation_index() const { return obs_index_; }

  double gamma() const { return p_.gamma; }
  double epsilon() const { return p_.epsilon; }
  BallNorm metric() const { return p_.metric; }
  double reward_bound() const { return reward_bound_; }
  const PerturbFn& perturb_fn() const { return p_.perturb; }
  const Params& params() const { return p_; }

  int SabIndex(int s, int a, int b) const {
    return (s * num_joint_actions() + a) * num_joint_perturbations() + b;
  }
  double Transition(int s, int a, int b, int s_next) const {
    return p_.transition[SabIndex(s, a, b) * p_.num_states + s_next];
  }
  std::span<const double> TransitionRow(int s, int a, int b) const {
    return {p_.transition.data() + SabIndex(s, a, b) * p_.num_states,
            static_cast<std::size_t>(p_.num_states)};
  }
  double Reward(int agent, int s, int a, int b) const {
    return p_.rewards[agent][SabIndex(s, a, b)];
  }
  bool SharedReward() const;

  // Perturbed state of one agent under a table perturbation.
  int PerturbAgent(int agent, int s, int b_agent) const {
    return p_.perturb.TableFor(agent)[s][b_agent];
  }
  // Joint observation index of (f_1(s, b^1), ..., f_N(s, b^N)).
  int PerturbJoint(int s, int joint_b) const;

  // Returns a copy with a different discount.
  MgSpaModel WithGamma(double gamma) const;

 private:
  Params p_;
  JointIndexer a_index_;
  JointIndexer b_index_;
  JointIndexer obs_index_;
  double reward_bound_ = 0.0;
};

// v[i][s].
using ValueTable = std::vector<std::vector<double>>;
// q[i][SabIndex(s, a, b)].
using QTable = std::vector<std::vector<double>>;

// Factorized tabular policies. agent[i][x][a_i] is the probability agent i
// plays a_i when it observes state x; adversary[i][s][b_i] the probability
// adversary i picks b_i in true state s.
struct JointPolicy {
  std::vector<std::vector<std::vector<double>>> agent;
  std::vector<std::vector<std::vector<double>>> adversary;

  // Checks normalization and shape against the model.
  void Validate(const MgSpaModel& model, double tol = 1e-9) const;
};

JointPolicy UniformPolicy(const MgSpaModel& model);

// Two-player coordination game with state-swapping adversaries.
MgSpaModel BuildToyTwoPlayer(double gamma = 0.99);

struct RandomModelSpec {
  int num_agents = 2;
  int min_states = 2;
  int max_states = 3;
  int max_agent_actions = 3;
  // Adversary action sets are further capped by the state count, since
  // f(s, .) must be injective.
  int max_adversary_actions = 3;
  double reward_bound = 1.0;
  double gamma = 0.9;
};

// Shared-reward model with random transitions, rewards and injective
// perturbation tables.
MgSpaModel RandomModel(const RandomModelSpec& spec, Rng& rng);

// Per-agent perturbed states for joint perturbation `joint_b`.
std::vector<int> Perturb(const MgSpaModel& model, int s, int joint_b);

struct StepResult {
  int b = 0;
  std::vector<int> observed;
  int a = 0;
  std::vector<double> rewards;
  int s_next = 0;
};

StepResult Step(const MgSpaModel& model, int s, const JointPolicy& policy,
                Rng& rng);

// Samples an index from a discrete distribution.
int SampleIndex(std::span<const double> probs, Rng& rng);

// rewards[t][i] -> sum_t gamma^t rewards[t][i].
std::vector<double> DiscountedReturn(
    const std::vector<std::vector<double>>& rewards, double gamma);
double DiscountedReturn(std::span<const double> rewards, double gamma);

}  // namespace mgspa

#endif  // MGSPA_MODEL_H_
