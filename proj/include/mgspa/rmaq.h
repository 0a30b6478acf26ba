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

#ifndef MGSPA_RMAQ_H_
#define MGSPA_RMAQ_H_

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "mgspa/model.h"
#include "mgspa/stage_solver.h"

namespace mgspa {

enum class LrKind { kConstant, kPerVisitHarmonic };

struct LrSchedule {
  LrKind kind = LrKind::kConstant;
  double base = 0.1;

  // Rate for an entry already visited `visits` times.
  double Rate(int visits) const {
    return kind == LrKind::kConstant ? base : base / (1.0 + visits);
  }
};

std::string_view LrKindName(LrKind kind);
LrKind ParseLrKind(std::string_view name);

enum class Exploration { kUniform, kEpsilonGreedy };

std::string_view ExplorationName(Exploration e);
Exploration ParseExploration(std::string_view name);

struct TabularTransition {
  int s = 0;
  int a = 0;
  int b = 0;
  std::vector<double> r;
  int s_next = 0;
};

struct RmaqOptions {
  LrSchedule lr;
  double stage_tol = 1e-8;
  SolveMethod stage_method = SolveMethod::kSequenceFormLp;
  std::vector<double> state_weights;
  Exploration exploration = Exploration::kUniform;
  // Exploration probability for epsilon-greedy behavior.
  double explore_epsilon = 0.1;
};

class RmaqLearner {
 public:
  RmaqLearner(const MgSpaModel& model, RmaqOptions options);

  // One robust Q-learning step on the visited (s, a, b) entry.
  void Update(const TabularTransition& t);

  const QTable& q() const { return q_; }
  void set_q(QTable q);
  const std::vector<int>& visit_counts() const { return visits_; }
  int skipped_updates() const { return skipped_; }
  std::uint64_t version() const { return version_; }
  const RmaqOptions& options() const { return options_; }
  const MgSpaModel& model() const { return model_; }

  // Equilibrium of the stage game built on the current q, cached until the
  // next write.
  const SolveReport& StageSolution();
  // Agent and adversary marginals of that equilibrium.
  JointPolicy GreedyPolicy();

 private:
  MgSpaModel model_;
  RmaqOptions options_;
  QTable q_;
  std::vector<int> visits_;
  int skipped_ = 0;
  std::uint64_t version_ = 0;
  std::optional<std::uint64_t> cached_version_;
  SolveReport cached_;
};

struct RmaqCurvePoint {
  int episode = 0;
  // Exact discounted value of the greedy joint policy, averaged over states.
  double discounted_return = 0.0;
  // ||q - q_*||_inf, NaN without a reference.
  double q_gap = 0.0;
};

struct RmaqResult {
  RmaqLearner learner;
  std::vector<RmaqCurvePoint> curve;
};

// Runs episodes of behavior-policy play and updates. `q_star`, when given,
// is the planning reference for the gap column.
RmaqResult TrainRmaq(const MgSpaModel& model, const RmaqOptions& options,
                     int episodes, int steps_per_episode, std::uint64_t seed,
                     const std::vector<double>* q_star = nullptr);

// Mean over states of the exact value of a joint policy.
double MeanPolicyValue(const MgSpaModel& model, const JointPolicy& policy);

}  // namespace mgspa

#endif  // MGSPA_RMAQ_H_
