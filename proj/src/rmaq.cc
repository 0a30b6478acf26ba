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

#include "mgspa/rmaq.h"

#include <cmath>
#include <limits>

#include "mgspa/planning.h"
#include "mgspa/stage_game.h"

namespace mgspa {

std::string_view LrKindName(LrKind kind) {
  return kind == LrKind::kConstant ? "constant" : "per-visit-harmonic";
}

LrKind ParseLrKind(std::string_view name) {
  if (name == "constant") return LrKind::kConstant;
  if (name == "per-visit-harmonic") return LrKind::kPerVisitHarmonic;
  throw Error(ErrorKind::kConfiguration,
              "unknown learning-rate schedule '" + std::string(name) + "'");
}

std::string_view ExplorationName(Exploration e) {
  return e == Exploration::kUniform ? "uniform" : "epsilon-greedy";
}

Exploration ParseExploration(std::string_view name) {
  if (name == "uniform") return Exploration::kUniform;
  if (name == "epsilon-greedy") return Exploration::kEpsilonGreedy;
  throw Error(ErrorKind::kConfiguration,
              "unknown exploration '" + std::string(name) + "'");
}

RmaqLearner::RmaqLearner(const MgSpaModel& model, RmaqOptions options)
    : model_(model), options_(std::move(options)) {
  Require(model_.SharedReward(), ErrorKind::kInvalidArgument,
          "RMAQ needs a shared-reward model");
  Require(options_.lr.base >= 0.0 && options_.lr.base <= 1.0,
          ErrorKind::kInvalidArgument, "learning rate base must lie in [0, 1]");
  const int sab = model_.num_states() * model_.num_joint_actions() *
                  model_.num_joint_perturbations();
  q_.assign(model_.num_agents(), std::vector<double>(sab, 0.0));
  visits_.assign(sab, 0);
}

void RmaqLearner::set_q(QTable q) {
  Require(q.size() == q_.size() && q[0].size() == q_[0].size(),
          ErrorKind::kShapeMismatch, "q table shape mismatch");
  q_ = std::move(q);
  ++version_;
}

const SolveReport& RmaqLearner::StageSolution() {
  if (cached_version_ != version_) {
    const StageGame game =
        BuildStageGameFromQ(model_, q_[0], options_.state_weights);
    SolveOptions opt;
    opt.method = options_.stage_method;
    opt.tol = options_.stage_tol;
    cached_ = SolveZeroSum(game, opt);
    cached_version_ = version_;
  }
  return cached_;
}

JointPolicy RmaqLearner::GreedyPolicy() {
  const SolveReport& solved = StageSolution();
  const StageGame game =
      BuildStageGameFromQ(model_, q_[0], options_.state_weights);
  return ExtractMarginals(solved.strategy, game, model_, options_.stage_tol)
      .policy;
}

void RmaqLearner::Update(const TabularTransition& t) {
  const int sab = model_.SabIndex(t.s, t.a, t.b);
  Require(static_cast<int>(t.r.size()) == model_.num_agents(),
          ErrorKind::kShapeMismatch, "transition needs one reward per agent");
  const double alpha = options_.lr.Rate(visits_[sab]);
  ++visits_[sab];
  if (alpha == 0.0) return;
  double next_value = 0.0;
  if (model_.gamma() != 0.0) {
    try {
      next_value = StageSolution().state_values[t.s_next];
    } catch (const Error&) {
      ++skipped_;
      return;
    }
  }
  for (int i = 0; i < model_.num_agents(); ++i) {
    q_[i][sab] = (1.0 - alpha) * q_[i][sab] +
                 alpha * (t.r[i] + model_.gamma() * next_value);
  }
  ++version_;
}

double MeanPolicyValue(const MgSpaModel& model, const JointPolicy& policy) {
  const ValueTable v = EvaluatePolicy(model, policy);
  double acc = 0.0;
  for (double x : v[0]) acc += x;
  return acc / model.num_states();
}

RmaqResult TrainRmaq(const MgSpaModel& model, const RmaqOptions& options,
                     int episodes, int steps_per_episode, std::uint64_t seed,
                     const std::vector<double>* q_star) {
  Require(episodes >= 0 && steps_per_episode > 0, ErrorKind::kInvalidArgument,
          "episodes must be non-negative and steps positive");
  RmaqResult out{RmaqLearner(model, options), {}};
  RmaqLearner& learner = out.learner;
  Rng rng(seed);
  const JointPolicy uniform = UniformPolicy(model);
  std::uniform_int_distribution<int> start(0, model.num_states() - 1);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  for (int ep = 0; ep < episodes; ++ep) {
    int s = start(rng);
    for (int step = 0; step < steps_per_episode; ++step) {
      bool explore = options.exploration == Exploration::kUniform ||
                     coin(rng) < options.explore_epsilon;
      const JointPolicy behavior = explore ? uniform : learner.GreedyPolicy();
      const StepResult r = Step(model, s, behavior, rng);
      learner.Update({s, r.a, r.b, r.rewards, r.s_next});
      s = r.s_next;
    }
    RmaqCurvePoint point;
    point.episode = ep + 1;
    point.discounted_return = MeanPolicyValue(model, learner.GreedyPolicy());
    point.q_gap = std::numeric_limits<double>::quiet_NaN();
    if (q_star != nullptr) {
      double gap = 0.0;
      for (std::size_t k = 0; k < q_star->size(); ++k) {
        gap = std::max(gap, std::abs(learner.q()[0][k] - (*q_star)[k]));
      }
      point.q_gap = gap;
    }
    out.curve.push_back(point);
  }
  return out;
}

}  // namespace mgspa
