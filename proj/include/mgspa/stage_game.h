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

#ifndef MGSPA_STAGE_GAME_H_
#define MGSPA_STAGE_GAME_H_

#include <span>
#include <vector>

#include "mgspa/model.h"

namespace mgspa {

enum class Exec { kSerial, kParallel };

// One-shot zero-sum game with a chance root. Chance draws state s with
// probability state_weights[s]; the perturber (P1, minimizer) sees s and
// picks option o; the agent team (P2, maximizer) sees only
// infoset[s][o] and picks action a; the payoff to P2 is payoff(s, o, a).
//
// Built from a model, options are joint perturbations b, infosets are joint
// perturbed states and actions are joint agent actions. Several (s, o)
// pairs may share one infoset, which is what keeps P2 from conditioning on
// the true state.
struct StageGame {
  std::vector<double> state_weights;
  std::vector<int> num_options;
  std::vector<std::vector<int>> infoset;
  int num_infosets = 0;
  int num_actions = 0;
  // payoff[s][o * num_actions + a].
  std::vector<std::vector<double>> payoff;

  int num_states() const { return static_cast<int>(state_weights.size()); }
  double Payoff(int s, int o, int a) const {
    return payoff[s][o * num_actions + a];
  }
  // Throws on shape errors, negative weights or weights not summing to 1.
  void Validate() const;
};

// Payoff r(s, a, b) + gamma * sum_s' p(s' | s, a, b) v(s'). `v` is the
// shared value vector. Empty weights mean uniform.
StageGame BuildStageGame(const MgSpaModel& model, std::span<const double> v,
                         std::span<const double> state_weights = {},
                         Exec exec = Exec::kParallel);
StageGame BuildStageGame(const MgSpaModel& model, const ValueTable& v,
                         std::span<const double> state_weights = {},
                         Exec exec = Exec::kParallel);

// Payoff q(s, a, b) taken directly from a shared action-value table.
StageGame BuildStageGameFromQ(const MgSpaModel& model,
                              std::span<const double> q,
                              std::span<const double> state_weights = {},
                              Exec exec = Exec::kParallel);

// Embeds a matrix game: rows are P2 (maximizer) actions, columns are P1
// options, all under a single state and a single infoset.
StageGame StageGameFromMatrix(const std::vector<std::vector<double>>& m);

}  // namespace mgspa

#endif  // MGSPA_STAGE_GAME_H_
