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

#ifndef MGSPA_EVALUATE_H_
#define MGSPA_EVALUATE_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mgspa/attacks.h"
#include "mgspa/model.h"
#include "mgspa/particle_env.h"
#include "mgspa/planning.h"
#include "mgspa/rmaac.h"
#include "mgspa/serialize.h"

namespace mgspa {

struct EvalStats {
  double mean_episode_reward = 0.0;
  // Sample variance of the episode rewards; zero for a single episode.
  double reward_variance = 0.0;
  double mean_discounted_return = 0.0;
  double mean_step_reward = 0.0;
  int episodes = 0;
  long steps = 0;
  std::uint64_t seed = 0;
};

// Statistics of per-episode totals and discounted returns.
EvalStats Summarize(const std::vector<double>& episode_rewards,
                    const std::vector<double>& discounted_returns, long steps,
                    std::uint64_t seed);

// Team-optimal policy of the unperturbed game: every adversary plays an
// identity perturbation and the agents play the greedy joint action, lowest
// index on ties. Requires a shared reward.
JointPolicy NominalOptimalPolicy(const MgSpaModel& model, double tol = 1e-10);

// Equilibrium policy of value iteration.
JointPolicy RobustEquilibriumPolicy(const MgSpaModel& model,
                                    const PlanningOptions& options = {});

struct TabularEvalOptions {
  int episodes = 400;
  int horizon = 25;
  // Set: each adversary independently leaves the state unchanged with
  // probability 1 - p and otherwise draws a uniform non-identity
  // perturbation. Unset: adversaries follow the policy's adversary part.
  std::optional<double> attack_probability;
};

// Rollouts from a uniform start state. Rewards are agent 0's.
EvalStats EvaluateTabular(const MgSpaModel& model, const JointPolicy& policy,
                          const TabularEvalOptions& options,
                          std::uint64_t seed);

struct ContinuousEvalOptions {
  int episodes = 100;
  double gamma = 0.95;
};

// Deterministic actors of `policy` acting on attacked observations, frame
// stacked when the policy was trained with history.
EvalStats EvaluateContinuous(const ContinuousEnv& env,
                             const AgentBundle& policy,
                             const AttackSpec& attack,
                             const AgentBundle* adversary,
                             const ContinuousEvalOptions& options,
                             std::uint64_t seed);

struct MatrixRow {
  std::string policy;
  std::string attack;
  // Empty for the aggregate row.
  std::optional<std::uint64_t> seed;
  bool failed = false;
  std::string error;
  EvalStats stats;
  int seeds = 1;
};

// Evaluates every (policy, attack, seed) cell. A throwing cell yields a
// failed row and the run continues. Rows are ordered policy-major, then
// attack, then seed; with more than one seed each (policy, attack) block
// ends with an aggregate row holding the across-seed mean and variance of
// the per-seed means.
using CellEvaluator =
    std::function<EvalStats(int policy, int attack, std::uint64_t seed)>;
std::vector<MatrixRow> RobustnessMatrix(
    const std::vector<std::string>& policies,
    const std::vector<std::string>& attacks,
    const std::vector<std::uint64_t>& seeds, const CellEvaluator& eval);

// Raw rewards plus a display column shifted by +100.
CsvTable MatrixToCsv(const std::vector<MatrixRow>& rows);

}  // namespace mgspa

#endif  // MGSPA_EVALUATE_H_
