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

#ifndef MGSPA_STAGE_SOLVER_H_
#define MGSPA_STAGE_SOLVER_H_

#include <string>
#include <string_view>
#include <vector>

#include "mgspa/model.h"
#include "mgspa/stage_game.h"

namespace mgspa {

enum class SolveMethod { kSequenceFormLp, kNormalFormLp, kRegretSelfplay };

std::string_view SolveMethodName(SolveMethod method);
SolveMethod ParseSolveMethod(std::string_view name);

// lambda[s][o] for the perturber, chi[I][a] for the agent team.
struct BehavioralStrategy {
  std::vector<std::vector<double>> lambda;
  std::vector<std::vector<double>> chi;
};

struct SolveReport {
  BehavioralStrategy strategy;
  double game_value = 0.0;
  double exploitability = 0.0;
  // Simplex pivots for the LP methods, self-play rounds for regret.
  int iterations = 0;
  SolveMethod method = SolveMethod::kSequenceFormLp;
  // Expected payoff conditioned on the chance node landing on each state.
  std::vector<double> state_values;
};

struct SolveOptions {
  SolveMethod method = SolveMethod::kSequenceFormLp;
  double tol = 1e-8;
  // Sequence-form only: among optimal strategies, pick one maximizing the
  // smallest action probability.
  bool refine = true;
  // Regret self-play budget and audit period.
  int max_iterations = 200000;
  int check_every = 100;
  // Normal-form enumeration refuses games whose matrix exceeds this.
  long long max_normal_form_cells = 4000000;
  Exec exec = Exec::kParallel;
};

// Thrown when the requested tolerance is not certified. Carries the best
// strategies found.
class SolveFailure : public Error {
 public:
  SolveFailure(const std::string& message, SolveReport best)
      : Error(ErrorKind::kSolveFailure, message), best_(std::move(best)) {}
  const SolveReport& best() const { return best_; }

 private:
  SolveReport best_;
};

SolveReport SolveZeroSum(const StageGame& game,
                         const SolveOptions& options = {});

// Expected payoff to P2 under the chance weights.
double ExpectedPayoff(const StageGame& game, const BehavioralStrategy& strat);

struct BestResponseValues {
  // max over chi' of u(lambda, chi').
  double p2_best = 0.0;
  // min over lambda' of u(lambda', chi).
  double p1_best = 0.0;
};
BestResponseValues BestResponses(const StageGame& game,
                                 const BehavioralStrategy& strat,
                                 Exec exec = Exec::kParallel);

// [max_chi' u(lambda, chi') - u] + [u - min_lambda' u(lambda', chi)].
double Exploitability(const StageGame& game, const BehavioralStrategy& strat,
                      Exec exec = Exec::kParallel);

// Per-state readout sum_o lambda(o | s) sum_a chi(a | I(s, o)) g(s, o, a).
std::vector<double> StateValues(const StageGame& game,
                                const BehavioralStrategy& strat);

struct MarginalReport {
  JointPolicy policy;
  // max |chi(a | x) - prod_i pi_i(a_i | x_i)| over infosets reached with
  // positive probability.
  double agent_residual = 0.0;
  // max |lambda(b | s) - prod_i rho_i(b_i | s)|.
  double adversary_residual = 0.0;
  std::vector<std::string> warnings;
};

// Factorizes a stage solution into per-agent and per-adversary tables. Agent
// marginals weight each joint observation by its probability under the
// chance weights and lambda.
MarginalReport ExtractMarginals(const BehavioralStrategy& strat,
                                const StageGame& game,
                                const MgSpaModel& model, double tol = 1e-6);

}  // namespace mgspa

#endif  // MGSPA_STAGE_SOLVER_H_
