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

#include "mgspa/planning.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "mgspa/stage_game.h"

namespace mgspa {
namespace {

double SupDistance(std::span<const double> a, std::span<const double> b) {
  double out = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    out = std::max(out, std::abs(a[k] - b[k]));
  }
  return out;
}

ValueTable Replicate(const MgSpaModel& model, const std::vector<double>& v) {
  return ValueTable(model.num_agents(), v);
}

}  // namespace

std::vector<double> ApplyMinimaxOperator(const MgSpaModel& model,
                                         std::span<const double> v,
                                         const SolveOptions& stage,
                                         std::span<const double> weights) {
  const StageGame game = BuildStageGame(model, v, weights, stage.exec);
  return SolveZeroSum(game, stage).state_values;
}

ValueTable ApplyMinimaxOperator(const MgSpaModel& model, const ValueTable& v,
                                const SolveOptions& stage,
                                std::span<const double> weights) {
  Require(static_cast<int>(v.size()) == model.num_agents(),
          ErrorKind::kShapeMismatch, "value table needs one row per agent");
  return Replicate(model, ApplyMinimaxOperator(model, std::span(v[0]), stage,
                                               weights));
}

double BellmanResidual(const MgSpaModel& model, std::span<const double> v,
                       const SolveOptions& stage,
                       std::span<const double> weights) {
  return SupDistance(ApplyMinimaxOperator(model, v, stage, weights), v);
}

PlanningReport ValueIteration(const MgSpaModel& model,
                              const PlanningOptions& options,
                              std::span<const double> v0) {
  Require(options.tol > 0.0, ErrorKind::kInvalidArgument,
          "planning tolerance must be positive");
  Require(model.SharedReward(), ErrorKind::kInvalidArgument,
          "planning needs a shared-reward model");
  SolveOptions stage = options.stage;
  stage.tol = options.tol / 10.0;

  std::vector<double> v(model.num_states(), 0.0);
  if (!v0.empty()) {
    Require(static_cast<int>(v0.size()) == model.num_states(),
            ErrorKind::kShapeMismatch, "initial values need one entry per state");
    v.assign(v0.begin(), v0.end());
  }

  PlanningReport report;
  for (int k = 1; k <= options.max_iters; ++k) {
    const StageGame game =
        BuildStageGame(model, v, options.state_weights, stage.exec);
    const SolveReport solved = SolveZeroSum(game, stage);
    const double residual = SupDistance(solved.state_values, v);
    report.residual = residual;
    report.stage_strategy = solved.strategy;
    report.stage_exploitability = solved.exploitability;
    report.iterations = k - 1;
    if (residual <= options.tol) {
      report.v_star = Replicate(model, v);
      MarginalReport marginals =
          ExtractMarginals(solved.strategy, game, model, stage.tol * 10.0);
      report.equilibrium_policy = std::move(marginals.policy);
      report.warnings = std::move(marginals.warnings);
      return report;
    }
    report.residual_history.push_back(residual);
    v = solved.state_values;
  }
  report.v_star = Replicate(model, v);
  throw PlanningFailure("value iteration hit max_iters=" +
                            std::to_string(options.max_iters) +
                            " with residual " + std::to_string(report.residual),
                        report);
}

ValueTable EvaluatePolicy(const MgSpaModel& model, const JointPolicy& policy) {
  policy.Validate(model);
  const int ns = model.num_states();
  const int n = model.num_agents();
  const JointIndexer& acts = model.action_index();
  const JointIndexer& perts = model.perturbation_index();
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(ns, ns);
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(ns, n);
  for (int s = 0; s < ns; ++s) {
    for (int b = 0; b < perts.size(); ++b) {
      double pb = 1.0;
      for (int i = 0; i < n; ++i) pb *= policy.adversary[i][s][perts.Digit(b, i)];
      if (pb == 0.0) continue;
      for (int a = 0; a < acts.size(); ++a) {
        double pa = pb;
        for (int i = 0; i < n; ++i) {
          const int x = model.PerturbAgent(i, s, perts.Digit(b, i));
          pa *= policy.agent[i][x][acts.Digit(a, i)];
        }
        if (pa == 0.0) continue;
        for (int i = 0; i < n; ++i) r(s, i) += pa * model.Reward(i, s, a, b);
        const auto row = model.TransitionRow(s, a, b);
        for (int sn = 0; sn < ns; ++sn) p(s, sn) += pa * row[sn];
      }
    }
  }
  const Eigen::MatrixXd lhs =
      Eigen::MatrixXd::Identity(ns, ns) - model.gamma() * p;
  const Eigen::MatrixXd v = lhs.partialPivLu().solve(r);
  ValueTable out(n, std::vector<double>(ns));
  for (int i = 0; i < n; ++i) {
    for (int s = 0; s < ns; ++s) out[i][s] = v(s, i);
  }
  return out;
}

std::vector<double> QFromValue(const MgSpaModel& model,
                               std::span<const double> v) {
  const int na = model.num_joint_actions();
  const int nb = model.num_joint_perturbations();
  std::vector<double> q(model.num_states() * na * nb);
  for (int s = 0; s < model.num_states(); ++s) {
    for (int a = 0; a < na; ++a) {
      for (int b = 0; b < nb; ++b) {
        double acc = 0.0;
        const auto row = model.TransitionRow(s, a, b);
        for (int sn = 0; sn < model.num_states(); ++sn) acc += row[sn] * v[sn];
        q[model.SabIndex(s, a, b)] = model.Reward(0, s, a, b) + model.gamma() * acc;
      }
    }
  }
  return q;
}

}  // namespace mgspa
