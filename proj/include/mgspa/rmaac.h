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

#ifndef MGSPA_RMAAC_H_
#define MGSPA_RMAAC_H_

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mgspa/mlp.h"
#include "mgspa/particle_env.h"
#include "mgspa/perturb.h"
#include "mgspa/replay_buffer.h"

namespace mgspa {

struct RmaacConfig {
  double gamma = 0.95;
  double tau = 0.01;
  double epsilon = 0.5;
  BallNorm norm = BallNorm::kLInf;
  // Perturbation used during training rollouts; reg needs it additive in b.
  PerturbKind perturb = PerturbKind::kLinearAdditive;
  double perturb_sigma = 1.0;
  double lr_actor = 0.01;
  double lr_critic = 0.01;
  double lr_adversary = 0.005;
  // Actor and adversary steps per critic step.
  int iteration_steps = 20;
  int hidden = 32;
  int buffer_capacity = 100000;
  int minibatch = 128;
  int episodes = 2000;
  // Environment steps between update rounds.
  int update_every = 25;
  // Gaussian exploration scales, decayed linearly over the episodes. The
  // perturbation scale is a fraction of epsilon.
  double action_noise_start = 0.3;
  double action_noise_end = 0.05;
  double perturb_noise_start = 0.3;
  double perturb_noise_end = 0.05;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  // Unset: policies see only the current perturbed observation.
  std::optional<int> frame_stack;
  // False freezes the adversaries at zero output (the baseline).
  bool adversary_enabled = true;
  // Fraction of training after which the adversaries are snapshotted for the
  // non-optimal attack family.
  double checkpoint_fraction = 0.1;
  double divergence_bound = 1e6;

  int history() const { return frame_stack.value_or(1); }
  void Validate() const;
};

nlohmann::json RmaacConfigToJson(const RmaacConfig& c);
// Fills missing keys from `base`; unknown keys are rejected.
RmaacConfig RmaacConfigFromJson(const nlohmann::json& j,
                                 const RmaacConfig& base = {});

struct AgentNets {
  Mlp critic;
  Mlp actor;
  Mlp adversary;
  Mlp critic_target;
  Mlp actor_target;
  Mlp adversary_target;
};

// Centralized critics q^i(s, a, b), decentralized actors pi^i(s~^i) and
// adversaries rho^i(s^i), each with a target copy. Critic input is the
// concatenation [s^1..s^n, a^1..a^n, b^1..b^n].
struct AgentBundle {
  int num_agents = 0;
  int obs_dim = 0;
  int act_dim = 0;
  int history = 1;
  double epsilon = 0.0;
  BallNorm norm = BallNorm::kLInf;
  std::vector<AgentNets> agents;

  int critic_input_dim() const {
    return num_agents * (2 * obs_dim + act_dim);
  }
  int actor_input_dim() const { return history * obs_dim; }
  double MaxParamNorm() const;
};

AgentBundle MakeBundle(int num_agents, int obs_dim, int act_dim,
                       const RmaacConfig& config, std::uint64_t seed);
nlohmann::json BundleToJson(const AgentBundle& bundle);
AgentBundle BundleFromJson(const nlohmann::json& j);

// Concatenation of the h most recent observations, most recent first,
// padding with the earliest one.
std::vector<double> FrameStack(
    const std::vector<std::vector<double>>& recent_first, int h);

// Row-wise projection of obs + b into the ball around obs.
Eigen::MatrixXd PerturbRows(const Eigen::MatrixXd& obs,
                            const Eigen::MatrixXd& b, double epsilon,
                            BallNorm norm);
// Row-wise J^T g for the map b -> proj(obs + b).
Eigen::MatrixXd PerturbVjp(const Eigen::MatrixXd& b, const Eigen::MatrixXd& g,
                           double epsilon, BallNorm norm);

struct GradResult {
  double objective = 0.0;
  Eigen::VectorXd grad;
};

// Mean squared TD error of critic i and its gradient in the critic params.
GradResult CriticGradient(const AgentBundle& bundle, const Minibatch& mb,
                          int agent, double gamma);
// (1/K) sum q^i evaluated with a^i = pi^i(s~^i), b^i = rho^i(s^i), s~^i =
// proj(s^i + b^i); the remaining agents' a and b come from the minibatch.
// Gradient with respect to the actor params.
GradResult ActorGradient(const AgentBundle& bundle, const Mlp& critic,
                         const Minibatch& mb, int agent);
// Same objective, gradient with respect to the adversary params. Without
// `include_reg` the pathway through the actor is dropped.
GradResult AdversaryGradient(const AgentBundle& bundle, const Mlp& critic,
                             const Minibatch& mb, int agent,
                             bool include_reg = true);

// Gaussian-policy gradient estimators for one agent with critic q(s, a, b):
// pi(a | s~) = N(mu_theta(s~), sa^2 I), rho(b | s) = N(mu_omega(s), sb^2 I)
// and s~ = proj(s + b). Row k of s, a, b is one sample.
struct StochasticGradients {
  Eigen::VectorXd actor;
  Eigen::VectorXd adversary;
};
StochasticGradients StochasticPolicyGradients(
    const Mlp& critic, const Mlp& actor_mean, double actor_sigma,
    const Mlp& adversary_mean, double adversary_sigma, const Eigen::MatrixXd& s,
    const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double epsilon,
    BallNorm norm);

struct RmaacCurvePoint {
  int episode = 0;
  double mean_episode_reward = 0.0;
};

struct RmaacResult {
  AgentBundle bundle;
  std::vector<RmaacCurvePoint> curve;
  // Bundle snapshot at the checkpoint fraction, when reached.
  std::optional<AgentBundle> nonoptimal;
  int updates = 0;
  std::vector<std::string> warnings;
};

RmaacResult TrainRmaac(const ContinuousEnv& env, AgentBundle bundle,
                       const RmaacConfig& config, std::uint64_t seed);

// Deterministic policy action for agent i from its stacked input.
std::vector<double> ActorAction(const AgentBundle& bundle, int agent,
                                const std::vector<double>& input);
std::vector<double> AdversaryAction(const AgentBundle& bundle, int agent,
                                    const std::vector<double>& obs);

}  // namespace mgspa

#endif  // MGSPA_RMAAC_H_
