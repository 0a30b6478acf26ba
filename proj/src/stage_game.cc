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

#include "mgspa/stage_game.h"

#include <cmath>

#include "mgspa/stage_kernels.h"

namespace mgspa {
namespace {

std::vector<double> ResolveWeights(int num_states,
                                   std::span<const double> weights) {
  if (weights.empty()) return std::vector<double>(num_states, 1.0 / num_states);
  Require(static_cast<int>(weights.size()) == num_states,
          ErrorKind::kShapeMismatch, "state weights need one entry per state");
  return {weights.begin(), weights.end()};
}

StageGame SkeletonFromModel(const MgSpaModel& model,
                            std::span<const double> weights) {
  Require(model.SharedReward(), ErrorKind::kInvalidArgument,
          "stage games need a shared-reward model");
  StageGame game;
  const int ns = model.num_states();
  const int nb = model.num_joint_perturbations();
  game.state_weights = ResolveWeights(ns, weights);
  game.num_options.assign(ns, nb);
  game.infoset.assign(ns, std::vector<int>(nb));
  for (int s = 0; s < ns; ++s) {
    for (int b = 0; b < nb; ++b) game.infoset[s][b] = model.PerturbJoint(s, b);
  }
  game.num_infosets = model.num_joint_observations();
  game.num_actions = model.num_joint_actions();
  game.payoff.assign(ns, std::vector<double>(nb * game.num_actions, 0.0));
  game.Validate();
  return game;
}

}  // namespace

void StageGame::Validate() const {
  const int ns = num_states();
  Require(ns > 0, ErrorKind::kInvalidArgument, "stage game needs a state");
  Require(num_actions > 0 && num_infosets > 0, ErrorKind::kInvalidArgument,
          "stage game needs actions and infosets");
  Require(static_cast<int>(num_options.size()) == ns &&
              static_cast<int>(infoset.size()) == ns &&
              static_cast<int>(payoff.size()) == ns,
          ErrorKind::kShapeMismatch, "stage game tables need a row per state");
  double total = 0.0;
  for (int s = 0; s < ns; ++s) {
    Require(state_weights[s] >= 0.0, ErrorKind::kInvalidArgument,
            "state weights must be non-negative");
    total += state_weights[s];
    Require(num_options[s] > 0, ErrorKind::kInvalidArgument,
            "every state needs at least one perturber option");
    Require(static_cast<int>(infoset[s].size()) == num_options[s],
            ErrorKind::kShapeMismatch, "infoset row width mismatch");
    for (int id : infoset[s]) {
      Require(id >= 0 && id < num_infosets, ErrorKind::kInvalidArgument,
              "infoset id out of range");
    }
    Require(static_cast<int>(payoff[s].size()) == num_options[s] * num_actions,
            ErrorKind::kShapeMismatch, "payoff row width mismatch");
    for (double g : payoff[s]) {
      Require(std::isfinite(g), ErrorKind::kInvalidArgument,
              "payoff must be finite");
    }
  }
  Require(std::abs(total - 1.0) <= 1e-9, ErrorKind::kInvalidArgument,
          "state weights must sum to 1");
}

StageGame BuildStageGame(const MgSpaModel& model, std::span<const double> v,
                         std::span<const double> state_weights, Exec exec) {
  Require(static_cast<int>(v.size()) == model.num_states(),
          ErrorKind::kShapeMismatch, "value vector needs one entry per state");
  StageGame game = SkeletonFromModel(model, state_weights);
  FillPayoffFromValue(model, v, exec, &game);
  return game;
}

StageGame BuildStageGame(const MgSpaModel& model, const ValueTable& v,
                         std::span<const double> state_weights, Exec exec) {
  Require(static_cast<int>(v.size()) == model.num_agents(),
          ErrorKind::kShapeMismatch, "value table needs one row per agent");
  for (const auto& row : v) {
    Require(row == v[0], ErrorKind::kInvalidArgument,
            "shared-reward value tables must agree across agents");
  }
  return BuildStageGame(model, std::span<const double>(v[0]), state_weights,
                        exec);
}

StageGame BuildStageGameFromQ(const MgSpaModel& model,
                              std::span<const double> q,
                              std::span<const double> state_weights,
                              Exec exec) {
  Require(static_cast<int>(q.size()) == model.num_states() *
                                            model.num_joint_actions() *
                                            model.num_joint_perturbations(),
          ErrorKind::kShapeMismatch, "q table has the wrong size");
  StageGame game = SkeletonFromModel(model, state_weights);
  FillPayoffFromQ(model, q, exec, &game);
  return game;
}

StageGame StageGameFromMatrix(const std::vector<std::vector<double>>& m) {
  Require(!m.empty() && !m[0].empty(), ErrorKind::kInvalidArgument,
          "matrix game must be non-empty");
  const int rows = static_cast<int>(m.size());
  const int cols = static_cast<int>(m[0].size());
  StageGame game;
  game.state_weights = {1.0};
  game.num_options = {cols};
  game.infoset = {std::vector<int>(cols, 0)};
  game.num_infosets = 1;
  game.num_actions = rows;
  game.payoff.assign(1, std::vector<double>(cols * rows));
  for (int i = 0; i < rows; ++i) {
    Require(static_cast<int>(m[i].size()) == cols, ErrorKind::kShapeMismatch,
            "matrix rows must share a width");
    for (int j = 0; j < cols; ++j) game.payoff[0][j * rows + i] = m[i][j];
  }
  game.Validate();
  return game;
}

}  // namespace mgspa
