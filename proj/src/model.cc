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

#include "mgspa/model.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace mgspa {
namespace {

constexpr double kStochasticTol = 1e-12;

void CheckDistribution(std::span<const double> probs, double tol,
                       const std::string& what) {
  double total = 0.0;
  for (double p : probs) {
    Require(p >= -tol && std::isfinite(p), ErrorKind::kInvalidArgument,
            what + " has a negative or non-finite entry");
    total += p;
  }
  Require(std::abs(total - 1.0) <= tol * std::max<std::size_t>(1, probs.size()),
          ErrorKind::kInvalidArgument, what + " does not sum to 1");
}

}  // namespace

MgSpaModel::MgSpaModel(Params params) : p_(std::move(params)) {
  const int n = static_cast<int>(p_.agent_actions.size());
  Require(n > 0, ErrorKind::kInvalidArgument, "model needs at least one agent");
  Require(static_cast<int>(p_.adversary_actions.size()) == n,
          ErrorKind::kShapeMismatch,
          "one adversary action set per agent is required");
  Require(p_.num_states > 0, ErrorKind::kInvalidArgument,
          "model needs at least one state");
  Require(p_.gamma >= 0.0 && p_.gamma < 1.0, ErrorKind::kInvalidArgument,
          "gamma must lie in [0, 1)");
  Require(p_.epsilon >= 0.0, ErrorKind::kInvalidArgument,
          "epsilon must be non-negative");
  a_index_ = JointIndexer(p_.agent_actions);
  b_index_ = JointIndexer(p_.adversary_actions);
  obs_index_ = JointIndexer(std::vector<int>(n, p_.num_states));

  const std::size_t sab = static_cast<std::size_t>(p_.num_states) *
                          a_index_.size() * b_index_.size();
  Require(p_.transition.size() == sab * p_.num_states,
          ErrorKind::kShapeMismatch, "transition tensor has the wrong size");
  for (std::size_t k = 0; k < sab; ++k) {
    CheckDistribution({p_.transition.data() + k * p_.num_states,
                       static_cast<std::size_t>(p_.num_states)},
                      kStochasticTol, "transition row");
  }
  Require(static_cast<int>(p_.rewards.size()) == n, ErrorKind::kShapeMismatch,
          "one reward tensor per agent is required");
  reward_bound_ = 0.0;
  for (const auto& r : p_.rewards) {
    Require(r.size() == sab, ErrorKind::kShapeMismatch,
            "reward tensor has the wrong size");
    for (double x : r) {
      Require(std::isfinite(x), ErrorKind::kInvalidArgument,
              "reward must be finite");
      reward_bound_ = std::max(reward_bound_, std::abs(x));
    }
  }

  const PerturbFn& f = p_.perturb;
  if (f.kind != PerturbKind::kTablePermutation) {
    throw Error(ErrorKind::kConfiguration,
                "tabular models support the table-permutation perturbation "
                "only, got '" + std::string(PerturbKindName(f.kind)) + "'");
  }
  Require(f.tables.size() == 1 || static_cast<int>(f.tables.size()) == n,
          ErrorKind::kShapeMismatch,
          "perturbation needs one shared table or one per agent");
  for (int i = 0; i < n; ++i) {
    const PerturbTable& table = f.TableFor(i);
    Require(static_cast<int>(table.size()) == p_.num_states,
            ErrorKind::kShapeMismatch, "perturbation table needs a row per state");
    for (int s = 0; s < p_.num_states; ++s) {
      Require(static_cast<int>(table[s].size()) == p_.adversary_actions[i],
              ErrorKind::kShapeMismatch,
              "perturbation row needs an entry per adversary action");
      std::set<int> image;
      for (int target : table[s]) {
        Require(target >= 0 && target < p_.num_states,
                ErrorKind::kInvalidArgument,
                "perturbation target out of range");
        image.insert(target);
      }
      Require(static_cast<int>(image.size()) == p_.adversary_actions[i],
              ErrorKind::kInvalidArgument,
              "perturbation f(s, .) must be a bijection onto its image");
    }
  }
}

bool MgSpaModel::SharedReward() const {
  for (int i = 1; i < num_agents(); ++i) {
    if (p_.rewards[i] != p_.rewards[0]) return false;
  }
  return true;
}

int MgSpaModel::PerturbJoint(int s, int joint_b) const {
  int index = 0;
  for (int i = 0; i < num_agents(); ++i) {
    index = index * p_.num_states +
            PerturbAgent(i, s, b_index_.Digit(joint_b, i));
  }
  return index;
}

MgSpaModel MgSpaModel::WithGamma(double gamma) const {
  Params copy = p_;
  copy.gamma = gamma;
  return MgSpaModel(std::move(copy));
}

void JointPolicy::Validate(const MgSpaModel& model, double tol) const {
  const int n = model.num_agents();
  Require(static_cast<int>(agent.size()) == n &&
              static_cast<int>(adversary.size()) == n,
          ErrorKind::kShapeMismatch, "policy needs one table per agent");
  for (int i = 0; i < n; ++i) {
    Require(static_cast<int>(agent[i].size()) == model.num_states() &&
                static_cast<int>(adversary[i].size()) == model.num_states(),
            ErrorKind::kShapeMismatch, "policy table needs a row per state");
    for (int s = 0; s < model.num_states(); ++s) {
      Require(static_cast<int>(agent[i][s].size()) ==
                      model.num_agent_actions(i) &&
                  static_cast<int>(adversary[i][s].size()) ==
                      model.num_adversary_actions(i),
              ErrorKind::kShapeMismatch, "policy row has the wrong width");
      CheckDistribution(agent[i][s], tol, "agent policy row");
      CheckDistribution(adversary[i][s], tol, "adversary policy row");
    }
  }
}

JointPolicy UniformPolicy(const MgSpaModel& model) {
  JointPolicy policy;
  const int n = model.num_agents();
  const int ns = model.num_states();
  for (int i = 0; i < n; ++i) {
    const int na = model.num_agent_actions(i);
    const int nb = model.num_adversary_actions(i);
    policy.agent.emplace_back(ns, std::vector<double>(na, 1.0 / na));
    policy.adversary.emplace_back(ns, std::vector<double>(nb, 1.0 / nb));
  }
  return policy;
}

MgSpaModel BuildToyTwoPlayer(double gamma) {
  MgSpaModel::Params p;
  p.num_states = 2;
  p.agent_actions = {2, 2};
  p.adversary_actions = {2, 2};
  const int kA = 4, kB = 4, kS = 2;
  p.transition.assign(kS * kA * kB * kS, 0.0);
  p.rewards.assign(2, std::vector<double>(kS * kA * kB, 0.0));
  for (int s = 0; s < kS; ++s) {
    for (int a = 0; a < kA; ++a) {
      const bool match = (a / 2) == (a % 2);
      const double r = (s == 0) == match ? 1.0 : 0.0;
      const int s_next = r > 0.0 ? 1 - s : s;
      for (int b = 0; b < kB; ++b) {
        const int sab = (s * kA + a) * kB + b;
        p.rewards[0][sab] = r;
        p.rewards[1][sab] = r;
        p.transition[sab * kS + s_next] = 1.0;
      }
    }
  }
  p.perturb.kind = PerturbKind::kTablePermutation;
  p.perturb.tables = {{{0, 1}, {1, 0}}};
  p.gamma = gamma;
  // The discrete ball covers the whole state set.
  p.epsilon = 1.0;
  return MgSpaModel(std::move(p));
}

MgSpaModel RandomModel(const RandomModelSpec& spec, Rng& rng) {
  auto uniform_int = [&rng](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  MgSpaModel::Params p;
  p.num_states = uniform_int(spec.min_states, spec.max_states);
  for (int i = 0; i < spec.num_agents; ++i) {
    p.agent_actions.push_back(uniform_int(1, spec.max_agent_actions));
    p.adversary_actions.push_back(
        uniform_int(1, std::min(spec.max_adversary_actions, p.num_states)));
  }
  int na = 1, nb = 1;
  for (int i = 0; i < spec.num_agents; ++i) {
    na *= p.agent_actions[i];
    nb *= p.adversary_actions[i];
  }
  const int sab = p.num_states * na * nb;
  p.transition.resize(sab * p.num_states);
  for (int k = 0; k < sab; ++k) {
    double total = 0.0;
    for (int sn = 0; sn < p.num_states; ++sn) {
      total += p.transition[k * p.num_states + sn] = unit(rng) + 1e-3;
    }
    for (int sn = 0; sn < p.num_states; ++sn) {
      p.transition[k * p.num_states + sn] /= total;
    }
  }
  std::vector<double> r(sab);
  for (double& x : r) x = spec.reward_bound * (2.0 * unit(rng) - 1.0);
  p.rewards.assign(spec.num_agents, r);
  p.perturb.kind = PerturbKind::kTablePermutation;
  for (int i = 0; i < spec.num_agents; ++i) {
    PerturbTable table(p.num_states);
    for (int s = 0; s < p.num_states; ++s) {
      // Identity first so b = 0 is always "no perturbation".
      std::vector<int> others;
      for (int t = 0; t < p.num_states; ++t) {
        if (t != s) others.push_back(t);
      }
      std::shuffle(others.begin(), others.end(), rng);
      table[s].push_back(s);
      for (int b = 1; b < p.adversary_actions[i]; ++b) {
        table[s].push_back(others[b - 1]);
      }
    }
    p.perturb.tables.push_back(std::move(table));
  }
  p.gamma = spec.gamma;
  p.epsilon = 1.0;
  return MgSpaModel(std::move(p));
}

std::vector<int> Perturb(const MgSpaModel& model, int s, int joint_b) {
  Require(s >= 0 && s < model.num_states(), ErrorKind::kInvalidArgument,
          "state out of range");
  Require(joint_b >= 0 && joint_b < model.num_joint_perturbations(),
          ErrorKind::kInvalidArgument, "perturbation out of range");
  std::vector<int> out(model.num_agents());
  for (int i = 0; i < model.num_agents(); ++i) {
    out[i] = model.PerturbAgent(i, s,
                                model.perturbation_index().Digit(joint_b, i));
  }
  return out;
}

int SampleIndex(std::span<const double> probs, Rng& rng) {
  // Point masses consume no randomness so degenerate policies stay
  // deterministic regardless of the stream.
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (probs[k] == 1.0) return static_cast<int>(k);
  }
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng);
  double acc = 0.0;
  int last_positive = 0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (probs[k] <= 0.0) continue;
    acc += probs[k];
    last_positive = static_cast<int>(k);
    if (u < acc) return last_positive;
  }
  return last_positive;
}

StepResult Step(const MgSpaModel& model, int s, const JointPolicy& policy,
                Rng& rng) {
  Require(s >= 0 && s < model.num_states(), ErrorKind::kInvalidArgument,
          "state out of range");
  const int n = model.num_agents();
  StepResult out;
  std::vector<int> b(n), a(n);
  out.observed.resize(n);
  for (int i = 0; i < n; ++i) b[i] = SampleIndex(policy.adversary[i][s], rng);
  out.b = model.perturbation_index().Encode(b);
  for (int i = 0; i < n; ++i) {
    out.observed[i] = model.PerturbAgent(i, s, b[i]);
    a[i] = SampleIndex(policy.agent[i][out.observed[i]], rng);
  }
  out.a = model.action_index().Encode(a);
  out.rewards.resize(n);
  for (int i = 0; i < n; ++i) out.rewards[i] = model.Reward(i, s, out.a, out.b);
  out.s_next = SampleIndex(model.TransitionRow(s, out.a, out.b), rng);
  return out;
}

double DiscountedReturn(std::span<const double> rewards, double gamma) {
  // Horner form from the tail keeps long sums accurate.
  double acc = 0.0;
  for (auto it = rewards.rbegin(); it != rewards.rend(); ++it) {
    acc = *it + gamma * acc;
  }
  return acc;
}

std::vector<double> DiscountedReturn(
    const std::vector<std::vector<double>>& rewards, double gamma) {
  if (rewards.empty()) return {};
  const std::size_t n = rewards.front().size();
  std::vector<double> acc(n, 0.0);
  for (auto it = rewards.rbegin(); it != rewards.rend(); ++it) {
    Require(it->size() == n, ErrorKind::kShapeMismatch,
            "reward vectors must share a width");
    for (std::size_t i = 0; i < n; ++i) acc[i] = (*it)[i] + gamma * acc[i];
  }
  return acc;
}

}  // namespace mgspa
