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

#ifndef MGSPA_PLANNING_H_
#define MGSPA_PLANNING_H_

#include <span>
#include <string>
#include <vector>

#include "mgspa/model.h"
#include "mgspa/stage_solver.h"

namespace mgspa {

struct PlanningOptions {
  double tol = 1e-6;
  int max_iters = 100000;
  // Method and execution for the stage solves. The stage tolerance is always
  // tol / 10.
  SolveOptions stage;
  // Chance weights of the stage game; empty means uniform.
  std::vector<double> state_weights;
};

struct PlanningReport {
  ValueTable v_star;
  double residual = 0.0;
  int iterations = 0;
  JointPolicy equilibrium_policy;
  BehavioralStrategy stage_strategy;
  double stage_exploitability = 0.0;
  // Bellman residual after each accepted iterate.
  std::vector<double> residual_history;
  std::vector<std::string> warnings;
};

class PlanningFailure : public Error {
 public:
  PlanningFailure(const std::string& message, PlanningReport best)
      : Error(ErrorKind::kSolveFailure, message), best_(std::move(best)) {}
  const PlanningReport& best() const { return best_; }

 private:
  PlanningReport best_;
};

// (Lv)(s): equilibrium payoff of the stage game built from v, conditioned on
// the chance node landing on s.
std::vector<double> ApplyMinimaxOperator(const MgSpaModel& model,
                                         std::span<const double> v,
                                         const SolveOptions& stage = {},
                                         std::span<const double> weights = {});
ValueTable ApplyMinimaxOperator(const MgSpaModel& model, const ValueTable& v,
                                const SolveOptions& stage = {},
                                std::span<const double> weights = {});

// Iterates v <- Lv until the sup-norm residual is at most tol. Starts from
// v0 when given, else from zero.
PlanningReport ValueIteration(const MgSpaModel& model,
                              const PlanningOptions& options = {},
                              std::span<const double> v0 = {});

// ||Lv - v||_inf.
double BellmanResidual(const MgSpaModel& model, std::span<const double> v,
                       const SolveOptions& stage = {},
                       std::span<const double> weights = {});

// Exact value of a factorized joint policy: solves (I - gamma P) v = r.
ValueTable EvaluatePolicy(const MgSpaModel& model, const JointPolicy& policy);

// q(s, a, b) = r(s, a, b) + gamma * sum_s' p(s' | s, a, b) v(s').
std::vector<double> QFromValue(const MgSpaModel& model,
                               std::span<const double> v);

}  // namespace mgspa

#endif  // MGSPA_PLANNING_H_
