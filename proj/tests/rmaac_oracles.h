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

#ifndef MGSPA_TESTS_RMAAC_ORACLES_H_
#define MGSPA_TESTS_RMAAC_ORACLES_H_

// Independent objectives and finite differences for the actor-critic
// gradients. Shared by the unit tests and the acceptance binary.

#include <algorithm>
#include <cmath>
#include <vector>

#include "mgspa/mlp.h"
#include "mgspa/rmaac.h"
#include "mgspa/replay_buffer.h"

namespace mgspa {
namespace testing {

inline constexpr double kFdStep = 1e-5;
inline constexpr double kFdRelTol = 1e-4;

inline Eigen::MatrixXd Uniform(int rows, int cols, double lo, double hi, Rng& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = u(rng);
  }
  return m;
}

inline Minibatch RandomBatch(const AgentBundle& b, int k, Rng& rng) {
  Minibatch mb;
  for (int i = 0; i < b.num_agents; ++i) {
    mb.obs.push_back(Uniform(k, b.obs_dim, -1, 1, rng));
    mb.act.push_back(Uniform(k, b.act_dim, -1, 1, rng));
    mb.pert.push_back(Uniform(k, b.obs_dim, -0.4, 0.4, rng));
    mb.actor_input.push_back(Uniform(k, b.actor_input_dim(), -1, 1, rng));
    mb.next_obs.push_back(Uniform(k, b.obs_dim, -1, 1, rng));
  }
  mb.rew = Uniform(k, b.num_agents, -1, 1, rng);
  return mb;
}

inline double RelativeError(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double scale = std::max({a.norm(), b.norm(), 1e-8});
  return (a - b).norm() / scale;
}

// Central differences of `f` over the entries of `params`.
template <typename F>
Eigen::VectorXd FiniteDifference(Eigen::VectorXd& params, F f) {
  Eigen::VectorXd g(params.size());
  for (Eigen::Index k = 0; k < params.size(); ++k) {
    const double keep = params[k];
    params[k] = keep + kFdStep;
    const double up = f();
    params[k] = keep - kFdStep;
    const double down = f();
    params[k] = keep;
    g[k] = (up - down) / (2 * kFdStep);
  }
  return g;
}

// Independent l-inf clamp of obs + b into the ball around obs.
inline Eigen::MatrixXd Clamp(const Eigen::MatrixXd& o, const Eigen::MatrixXd& b,
                      double eps) {
  Eigen::MatrixXd out = o + b;
  for (Eigen::Index r = 0; r < o.rows(); ++r) {
    for (Eigen::Index c = 0; c < o.cols(); ++c) {
      out(r, c) = std::min(std::max(out(r, c), o(r, c) - eps), o(r, c) + eps);
    }
  }
  return out;
}

inline Eigen::MatrixXd Concat(const std::vector<Eigen::MatrixXd>& blocks) {
  Eigen::Index cols = 0;
  for (const auto& m : blocks) cols += m.cols();
  Eigen::MatrixXd x(blocks.front().rows(), cols);
  Eigen::Index c = 0;
  for (const auto& m : blocks) {
    x.middleCols(c, m.cols()) = m;
    c += m.cols();
  }
  return x;
}

// Oracle objectives written against the stated formulas.
inline double CriticLossOracle(const AgentBundle& b, const Minibatch& mb, int i,
                        double gamma) {
  std::vector<Eigen::MatrixXd> blocks = mb.next_obs;
  std::vector<Eigen::MatrixXd> a2, b2;
  for (int j = 0; j < b.num_agents; ++j) {
    const AgentNets& n = b.agents[j];
    b2.push_back(n.adversary_target.Forward(mb.next_obs[j]));
    Eigen::MatrixXd in = mb.actor_input[j];
    const Eigen::Index d = b.obs_dim;
    if (in.cols() > d) {
      in.rightCols(in.cols() - d) = mb.actor_input[j].leftCols(in.cols() - d);
    }
    in.leftCols(d) = Clamp(mb.next_obs[j], b2.back(), b.epsilon);
    a2.push_back(n.actor_target.Forward(in));
  }
  for (auto& m : a2) blocks.push_back(m);
  for (auto& m : b2) blocks.push_back(m);
  const Eigen::VectorXd y =
      mb.rew.col(i) + gamma * b.agents[i].critic_target.Forward(Concat(blocks)).col(0);
  std::vector<Eigen::MatrixXd> now = mb.obs;
  for (auto& m : mb.act) now.push_back(m);
  for (auto& m : mb.pert) now.push_back(m);
  const Eigen::VectorXd q = b.agents[i].critic.Forward(Concat(now)).col(0);
  return (y - q).squaredNorm() / mb.size();
}

inline double PolicyObjectiveOracle(const AgentBundle& b, const Mlp& critic,
                             const Minibatch& mb, int i) {
  const AgentNets& n = b.agents[i];
  const Eigen::MatrixXd bi = n.adversary.Forward(mb.obs[i]);
  Eigen::MatrixXd in = mb.actor_input[i];
  in.leftCols(b.obs_dim) = Clamp(mb.obs[i], bi, b.epsilon);
  std::vector<Eigen::MatrixXd> acts = mb.act, perts = mb.pert;
  acts[i] = n.actor.Forward(in);
  perts[i] = bi;
  std::vector<Eigen::MatrixXd> blocks = mb.obs;
  for (auto& m : acts) blocks.push_back(m);
  for (auto& m : perts) blocks.push_back(m);
  return critic.Forward(Concat(blocks)).mean();
}

// Smallest hidden pre-activation margin over every network input the
// objectives touch; configurations near a rectifier kink are redrawn.
inline double KinkMargin(const AgentBundle& b, const Minibatch& mb) {
  double margin = 1e9;
  for (int j = 0; j < b.num_agents; ++j) {
    const AgentNets& n = b.agents[j];
    margin = std::min(margin, n.adversary.MinAbsHiddenPreactivation(mb.obs[j]));
    margin = std::min(margin,
                      n.adversary_target.MinAbsHiddenPreactivation(mb.next_obs[j]));
    Eigen::MatrixXd in = mb.actor_input[j];
    in.leftCols(b.obs_dim) =
        Clamp(mb.obs[j], n.adversary.Forward(mb.obs[j]), b.epsilon);
    margin = std::min(margin, n.actor.MinAbsHiddenPreactivation(in));
  }
  std::vector<Eigen::MatrixXd> blocks = mb.obs;
  for (auto& m : mb.act) blocks.push_back(m);
  for (auto& m : mb.pert) blocks.push_back(m);
  for (int j = 0; j < b.num_agents; ++j) {
    margin = std::min(margin,
                      b.agents[j].critic.MinAbsHiddenPreactivation(Concat(blocks)));
    // The policy objective evaluates the critic at the agent's own a and b.
    const AgentNets& n = b.agents[j];
    std::vector<Eigen::MatrixXd> acts = mb.act, perts = mb.pert;
    perts[j] = n.adversary.Forward(mb.obs[j]);
    Eigen::MatrixXd in = mb.actor_input[j];
    in.leftCols(b.obs_dim) = Clamp(mb.obs[j], perts[j], b.epsilon);
    acts[j] = n.actor.Forward(in);
    std::vector<Eigen::MatrixXd> policy = mb.obs;
    for (auto& m : acts) policy.push_back(m);
    for (auto& m : perts) policy.push_back(m);
    margin = std::min(margin, n.critic.MinAbsHiddenPreactivation(Concat(policy)));
    std::vector<Eigen::MatrixXd> next = mb.next_obs;
    for (int k = 0; k < b.num_agents; ++k) {
      const AgentNets& nk = b.agents[k];
      Eigen::MatrixXd nin = mb.actor_input[k];
      const Eigen::Index d = b.obs_dim;
      if (nin.cols() > d) {
        nin.rightCols(nin.cols() - d) = mb.actor_input[k].leftCols(nin.cols() - d);
      }
      nin.leftCols(d) = Clamp(mb.next_obs[k],
                              nk.adversary_target.Forward(mb.next_obs[k]),
                              b.epsilon);
      margin = std::min(margin, nk.actor_target.MinAbsHiddenPreactivation(nin));
    }
  }
  return margin;
}

struct SmallShape {
  int agents, obs, act, history;
};

// Critic inputs stay at six: 1 x (2 + 2 + 2) and 2 x (1 + 1 + 1).
inline const SmallShape kShapes[] = {{1, 2, 2, 1}, {2, 1, 1, 1}, {1, 2, 2, 3}};

inline AgentBundle SmallBundle(const SmallShape& s, std::uint64_t seed) {
  RmaacConfig c;
  c.hidden = 8;
  c.epsilon = 0.5;
  if (s.history > 1) c.frame_stack = s.history;
  AgentBundle b = MakeBundle(s.agents, s.obs, s.act, c, seed);
  // Scale the default small last layer up so every pathway carries signal.
  Rng rng(seed + 100);
  for (AgentNets& n : b.agents) {
    for (Mlp* net : {&n.critic, &n.actor, &n.adversary, &n.critic_target,
                     &n.actor_target, &n.adversary_target}) {
      Mlp fresh(net->input_dim(),
                std::vector<int>(net->sizes().begin() + 1, net->sizes().end() - 1),
                net->output_dim(), net->head(), net->output_scale());
      fresh.InitRandom(rng);
      net->params() = fresh.params() * 3.0;
    }
  }
  return b;
}
}  // namespace testing
}  // namespace mgspa

#endif  // MGSPA_TESTS_RMAAC_ORACLES_H_
