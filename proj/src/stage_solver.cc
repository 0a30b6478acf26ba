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

#include "mgspa/stage_solver.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mgspa/simplex.h"
#include "mgspa/stage_kernels.h"

namespace mgspa {
namespace {

using Table = std::vector<std::vector<double>>;

std::vector<bool> ReachedInfosets(const StageGame& game) {
  std::vector<bool> reached(game.num_infosets, false);
  for (int s = 0; s < game.num_states(); ++s) {
    if (game.state_weights[s] == 0.0) continue;
    for (int id : game.infoset[s]) reached[id] = true;
  }
  return reached;
}

std::vector<std::vector<std::pair<int, int>>> InfosetMembers(
    const StageGame& game) {
  std::vector<std::vector<std::pair<int, int>>> members(game.num_infosets);
  for (int s = 0; s < game.num_states(); ++s) {
    for (int o = 0; o < game.num_options[s]; ++o) {
      members[game.infoset[s][o]].emplace_back(s, o);
    }
  }
  return members;
}

Table UniformChi(const StageGame& game) {
  return Table(game.num_infosets,
               std::vector<double>(game.num_actions, 1.0 / game.num_actions));
}

Table UniformLambda(const StageGame& game) {
  Table lambda(game.num_states());
  for (int s = 0; s < game.num_states(); ++s) {
    lambda[s].assign(game.num_options[s], 1.0 / game.num_options[s]);
  }
  return lambda;
}

// Cleans round-off from an LP solution and renormalizes.
void Normalize(std::vector<double>* probs) {
  double total = 0.0;
  for (double& p : *probs) {
    p = std::max(p, 0.0);
    total += p;
  }
  if (total <= 0.0) {
    std::fill(probs->begin(), probs->end(), 1.0 / probs->size());
    return;
  }
  for (double& p : *probs) p /= total;
}

// Perturber rows for zero-weight states carry no payoff; give them a pure
// best response so the per-state readout is still meaningful.
void CompleteZeroWeightStates(const StageGame& game, const Table& chi,
                              Table* lambda) {
  Table u;
  OptionValues(game, chi, Exec::kSerial, &u);
  for (int s = 0; s < game.num_states(); ++s) {
    if (game.state_weights[s] != 0.0) continue;
    const int best = static_cast<int>(
        std::min_element(u[s].begin(), u[s].end()) - u[s].begin());
    (*lambda)[s].assign(game.num_options[s], 0.0);
    (*lambda)[s][best] = 1.0;
  }
}

bool SolveOk(const LpSolution& sol) { return sol.status == LpStatus::kOptimal; }

[[noreturn]] void LpFailed(const char* which, const LpSolution& sol) {
  const char* why = sol.status == LpStatus::kInfeasible  ? "infeasible"
                    : sol.status == LpStatus::kUnbounded ? "unbounded"
                    : sol.status == LpStatus::kNumerical ? "round-off"
                                                         : "pivot limit";
  throw Error(ErrorKind::kSolveFailure,
              std::string(which) + " LP failed: " + why);
}

// Agent team LP: max sum_s w_s t_s subject to
// t_s <= sum_a chi(I(s, o), a) g(s, o, a) for every option o.
Table SolveTeamSequenceForm(const StageGame& game, bool refine, double slack,
                            int* pivots) {
  const std::vector<bool> reached = ReachedInfosets(game);
  const int na = game.num_actions;
  std::vector<int> chi_var(game.num_infosets, -1);
  int nv = 0;
  for (int id = 0; id < game.num_infosets; ++id) {
    if (reached[id]) {
      chi_var[id] = nv;
      nv += na;
    }
  }
  std::vector<int> t_var(game.num_states(), -1);
  for (int s = 0; s < game.num_states(); ++s) {
    if (game.state_weights[s] > 0.0) t_var[s] = nv++;
  }
  const int delta = nv;
  const int total = refine ? nv + 1 : nv;

  auto build = [&](bool with_delta) {
    LinearProgram lp(total);
    for (int s = 0; s < game.num_states(); ++s) {
      if (t_var[s] < 0) continue;
      lp.free[t_var[s]] = true;
      for (int o = 0; o < game.num_options[s]; ++o) {
        std::vector<double> row(total, 0.0);
        row[t_var[s]] = 1.0;
        const int base = chi_var[game.infoset[s][o]];
        for (int a = 0; a < na; ++a) row[base + a] = -game.Payoff(s, o, a);
        lp.AddRow(std::move(row), RowSense::kLessEqual, 0.0);
      }
    }
    for (int id = 0; id < game.num_infosets; ++id) {
      if (chi_var[id] < 0) continue;
      std::vector<double> row(total, 0.0);
      for (int a = 0; a < na; ++a) row[chi_var[id] + a] = 1.0;
      lp.AddRow(std::move(row), RowSense::kEqual, 1.0);
    }
    if (!with_delta) {
      for (int s = 0; s < game.num_states(); ++s) {
        if (t_var[s] >= 0) lp.objective[t_var[s]] = game.state_weights[s];
      }
    }
    return lp;
  };

  LinearProgram lp = build(false);
  LpSolution sol = SolveLp(lp);
  *pivots += sol.pivots;
  if (!SolveOk(sol)) LpFailed("agent-team", sol);

  std::vector<double> x = sol.x;
  if (refine) {
    LinearProgram rlp = build(true);
    std::vector<double> row(total, 0.0);
    for (int s = 0; s < game.num_states(); ++s) {
      if (t_var[s] >= 0) row[t_var[s]] = game.state_weights[s];
    }
    rlp.AddRow(std::move(row), RowSense::kGreaterEqual, sol.objective - slack);
    for (int id = 0; id < game.num_infosets; ++id) {
      if (chi_var[id] < 0) continue;
      for (int a = 0; a < na; ++a) {
        std::vector<double> r(total, 0.0);
        r[chi_var[id] + a] = 1.0;
        r[delta] = -1.0;
        rlp.AddRow(std::move(r), RowSense::kGreaterEqual, 0.0);
      }
    }
    rlp.objective[delta] = 1.0;
    const LpSolution rsol = SolveLp(rlp);
    *pivots += rsol.pivots;
    if (SolveOk(rsol)) x = rsol.x;
  }

  Table chi = UniformChi(game);
  for (int id = 0; id < game.num_infosets; ++id) {
    if (chi_var[id] < 0) continue;
    for (int a = 0; a < na; ++a) chi[id][a] = x[chi_var[id] + a];
    Normalize(&chi[id]);
  }
  return chi;
}

// Perturber LP: min sum_I z_I subject to
// z_I >= sum_{(s, o) -> I} w_s lambda(o | s) g(s, o, a) for every action a.
Table SolvePerturberSequenceForm(const StageGame& game, bool refine,
                                 double slack, int* pivots) {
  const std::vector<bool> reached = ReachedInfosets(game);
  const auto members = InfosetMembers(game);
  const int na = game.num_actions;
  std::vector<int> lambda_var(game.num_states(), -1);
  int nv = 0;
  for (int s = 0; s < game.num_states(); ++s) {
    if (game.state_weights[s] > 0.0) {
      lambda_var[s] = nv;
      nv += game.num_options[s];
    }
  }
  std::vector<int> z_var(game.num_infosets, -1);
  for (int id = 0; id < game.num_infosets; ++id) {
    if (reached[id]) z_var[id] = nv++;
  }
  const int delta = nv;
  const int total = refine ? nv + 1 : nv;

  auto build = [&](bool with_delta) {
    LinearProgram lp(total);
    lp.maximize = with_delta;
    for (int id = 0; id < game.num_infosets; ++id) {
      if (z_var[id] < 0) continue;
      lp.free[z_var[id]] = true;
      for (int a = 0; a < na; ++a) {
        std::vector<double> row(total, 0.0);
        row[z_var[id]] = -1.0;
        for (const auto& [s, o] : members[id]) {
          if (lambda_var[s] < 0) continue;
          row[lambda_var[s] + o] += game.state_weights[s] * game.Payoff(s, o, a);
        }
        lp.AddRow(std::move(row), RowSense::kLessEqual, 0.0);
      }
    }
    for (int s = 0; s < game.num_states(); ++s) {
      if (lambda_var[s] < 0) continue;
      std::vector<double> row(total, 0.0);
      for (int o = 0; o < game.num_options[s]; ++o) row[lambda_var[s] + o] = 1.0;
      lp.AddRow(std::move(row), RowSense::kEqual, 1.0);
    }
    if (!with_delta) {
      for (int id = 0; id < game.num_infosets; ++id) {
        if (z_var[id] >= 0) lp.objective[z_var[id]] = 1.0;
      }
    }
    return lp;
  };

  LinearProgram lp = build(false);
  LpSolution sol = SolveLp(lp);
  *pivots += sol.pivots;
  if (!SolveOk(sol)) LpFailed("perturber", sol);

  std::vector<double> x = sol.x;
  if (refine) {
    LinearProgram rlp = build(true);
    std::vector<double> row(total, 0.0);
    for (int id = 0; id < game.num_infosets; ++id) {
      if (z_var[id] >= 0) row[z_var[id]] = 1.0;
    }
    rlp.AddRow(std::move(row), RowSense::kLessEqual, sol.objective + slack);
    for (int s = 0; s < game.num_states(); ++s) {
      if (lambda_var[s] < 0) continue;
      for (int o = 0; o < game.num_options[s]; ++o) {
        std::vector<double> r(total, 0.0);
        r[lambda_var[s] + o] = 1.0;
        r[delta] = -1.0;
        rlp.AddRow(std::move(r), RowSense::kGreaterEqual, 0.0);
      }
    }
    rlp.objective[delta] = 1.0;
    const LpSolution rsol = SolveLp(rlp);
    *pivots += rsol.pivots;
    if (SolveOk(rsol)) x = rsol.x;
  }

  Table lambda = UniformLambda(game);
  for (int s = 0; s < game.num_states(); ++s) {
    if (lambda_var[s] < 0) continue;
    for (int o = 0; o < game.num_options[s]; ++o) {
      lambda[s][o] = x[lambda_var[s] + o];
    }
    Normalize(&lambda[s]);
  }
  return lambda;
}

// `slack` is in the payoff units of `game`.
BehavioralStrategy SolveSequenceForm(const StageGame& game, bool refine,
                                     double slack, int* pivots) {
  BehavioralStrategy strat;
  strat.chi = SolveTeamSequenceForm(game, refine, slack, pivots);
  strat.lambda = SolvePerturberSequenceForm(game, refine, slack, pivots);
  return strat;
}

// Enumerates every pure map over `radices` (positions with radix 0 are held
// at a fixed filler value of 0).
std::vector<PureMap> EnumerateMaps(const std::vector<int>& radices) {
  std::vector<PureMap> maps;
  PureMap current(radices.size(), 0);
  while (true) {
    maps.push_back(current);
    int p = static_cast<int>(radices.size()) - 1;
    while (p >= 0) {
      if (radices[p] > 1 && ++current[p] < radices[p]) break;
      current[p] = 0;
      --p;
    }
    if (p < 0) break;
  }
  return maps;
}

BehavioralStrategy SolveNormalForm(const StageGame& game,
                                   const SolveOptions& options, int* pivots) {
  const std::vector<bool> reached = ReachedInfosets(game);
  std::vector<int> p1_radix(game.num_states(), 1);
  double p1_count = 1.0;
  for (int s = 0; s < game.num_states(); ++s) {
    if (game.state_weights[s] > 0.0) {
      p1_radix[s] = game.num_options[s];
      p1_count *= p1_radix[s];
    }
  }
  std::vector<int> p2_radix(game.num_infosets, 1);
  double p2_count = 1.0;
  for (int id = 0; id < game.num_infosets; ++id) {
    if (reached[id]) {
      p2_radix[id] = game.num_actions;
      p2_count *= game.num_actions;
    }
  }
  if (p1_count * p2_count > static_cast<double>(options.max_normal_form_cells)) {
    throw Error(ErrorKind::kInvalidArgument,
                "normal form too large: " + std::to_string(p2_count) + " x " +
                    std::to_string(p1_count) + " pure strategies");
  }
  const std::vector<PureMap> p1_maps = EnumerateMaps(p1_radix);
  const std::vector<PureMap> p2_maps = EnumerateMaps(p2_radix);
  const Table m = NormalFormMatrix(game, p2_maps, p1_maps, options.exec);
  const int rows = static_cast<int>(p2_maps.size());
  const int cols = static_cast<int>(p1_maps.size());

  // Row player: max v s.t. v <= sum_i x_i m[i][j].
  LinearProgram row_lp(rows + 1);
  row_lp.free[rows] = true;
  row_lp.objective[rows] = 1.0;
  for (int j = 0; j < cols; ++j) {
    std::vector<double> r(rows + 1);
    for (int i = 0; i < rows; ++i) r[i] = -m[i][j];
    r[rows] = 1.0;
    row_lp.AddRow(std::move(r), RowSense::kLessEqual, 0.0);
  }
  {
    std::vector<double> r(rows + 1, 1.0);
    r[rows] = 0.0;
    row_lp.AddRow(std::move(r), RowSense::kEqual, 1.0);
  }
  const LpSolution row_sol = SolveLp(row_lp);
  *pivots += row_sol.pivots;
  if (!SolveOk(row_sol)) LpFailed("normal-form row", row_sol);

  // Column player: min u s.t. sum_j y_j m[i][j] <= u.
  LinearProgram col_lp(cols + 1);
  col_lp.maximize = false;
  col_lp.free[cols] = true;
  col_lp.objective[cols] = 1.0;
  for (int i = 0; i < rows; ++i) {
    std::vector<double> r(cols + 1);
    for (int j = 0; j < cols; ++j) r[j] = m[i][j];
    r[cols] = -1.0;
    col_lp.AddRow(std::move(r), RowSense::kLessEqual, 0.0);
  }
  {
    std::vector<double> r(cols + 1, 1.0);
    r[cols] = 0.0;
    col_lp.AddRow(std::move(r), RowSense::kEqual, 1.0);
  }
  const LpSolution col_sol = SolveLp(col_lp);
  *pivots += col_sol.pivots;
  if (!SolveOk(col_sol)) LpFailed("normal-form column", col_sol);

  // Mixed to behavioral: each information set is met once per play, so the
  // behavioral probability of a move is the mass of pure maps choosing it.
  BehavioralStrategy strat;
  strat.chi = UniformChi(game);
  for (int id = 0; id < game.num_infosets; ++id) {
    if (!reached[id]) continue;
    std::fill(strat.chi[id].begin(), strat.chi[id].end(), 0.0);
    for (int i = 0; i < rows; ++i) {
      strat.chi[id][p2_maps[i][id]] += std::max(row_sol.x[i], 0.0);
    }
    Normalize(&strat.chi[id]);
  }
  strat.lambda = UniformLambda(game);
  for (int s = 0; s < game.num_states(); ++s) {
    if (game.state_weights[s] == 0.0) continue;
    std::fill(strat.lambda[s].begin(), strat.lambda[s].end(), 0.0);
    for (int j = 0; j < cols; ++j) {
      strat.lambda[s][p1_maps[j][s]] += std::max(col_sol.x[j], 0.0);
    }
    Normalize(&strat.lambda[s]);
  }
  return strat;
}

void RegretMatch(const std::vector<double>& regret, std::vector<double>* out) {
  double total = 0.0;
  for (double r : regret) total += std::max(r, 0.0);
  out->resize(regret.size());
  for (std::size_t k = 0; k < regret.size(); ++k) {
    (*out)[k] = total > 0.0 ? std::max(regret[k], 0.0) / total
                            : 1.0 / regret.size();
  }
}

BehavioralStrategy Averaged(const Table& chi_sum, const Table& lambda_sum) {
  BehavioralStrategy strat{lambda_sum, chi_sum};
  for (auto& row : strat.chi) Normalize(&row);
  for (auto& row : strat.lambda) Normalize(&row);
  return strat;
}

// Alternating regret matching plus with linearly weighted averages.
SolveReport SolveRegret(const StageGame& game, const SolveOptions& options) {
  const double tol = options.tol;
  const auto members = InfosetMembers(game);
  const int na = game.num_actions;
  Table chi = UniformChi(game), lambda = UniformLambda(game);
  Table chi_regret(game.num_infosets, std::vector<double>(na, 0.0));
  Table lambda_regret(game.num_states());
  for (int s = 0; s < game.num_states(); ++s) {
    lambda_regret[s].assign(game.num_options[s], 0.0);
  }
  Table chi_sum(game.num_infosets, std::vector<double>(na, 0.0));
  Table lambda_sum = lambda_regret;
  Table cfv, u;

  SolveReport best;
  best.method = SolveMethod::kRegretSelfplay;
  best.exploitability = std::numeric_limits<double>::infinity();
  const int check_every = std::max(1, options.check_every);
  for (int t = 1; t <= options.max_iterations; ++t) {
    InfosetValues(game, members, lambda, options.exec, &cfv);
    for (int id = 0; id < game.num_infosets; ++id) {
      double ev = 0.0;
      for (int a = 0; a < na; ++a) ev += chi[id][a] * cfv[id][a];
      for (int a = 0; a < na; ++a) {
        chi_regret[id][a] = std::max(chi_regret[id][a] + cfv[id][a] - ev, 0.0);
      }
      RegretMatch(chi_regret[id], &chi[id]);
      for (int a = 0; a < na; ++a) chi_sum[id][a] += t * chi[id][a];
    }
    OptionValues(game, chi, options.exec, &u);
    for (int s = 0; s < game.num_states(); ++s) {
      const double w = game.state_weights[s];
      double ev = 0.0;
      for (int o = 0; o < game.num_options[s]; ++o) ev += lambda[s][o] * u[s][o];
      for (int o = 0; o < game.num_options[s]; ++o) {
        lambda_regret[s][o] =
            std::max(lambda_regret[s][o] + w * (ev - u[s][o]), 0.0);
      }
      RegretMatch(lambda_regret[s], &lambda[s]);
      for (int o = 0; o < game.num_options[s]; ++o) {
        lambda_sum[s][o] += t * lambda[s][o];
      }
    }
    if (t % check_every != 0 && t != options.max_iterations) continue;
    BehavioralStrategy avg = Averaged(chi_sum, lambda_sum);
    CompleteZeroWeightStates(game, avg.chi, &avg.lambda);
    const double expl = Exploitability(game, avg, options.exec);
    if (expl < best.exploitability) {
      best.strategy = std::move(avg);
      best.exploitability = expl;
      best.iterations = t;
    }
    if (expl <= tol) break;
  }
  best.game_value = ExpectedPayoff(game, best.strategy);
  best.state_values = StateValues(game, best.strategy);
  if (best.exploitability > tol) {
    throw SolveFailure("regret self-play did not reach exploitability " +
                           std::to_string(tol) + " (best " +
                           std::to_string(best.exploitability) + ")",
                       best);
  }
  return best;
}

}  // namespace

std::string_view SolveMethodName(SolveMethod method) {
  switch (method) {
    case SolveMethod::kSequenceFormLp: return "sequence-form-lp";
    case SolveMethod::kNormalFormLp: return "normal-form-lp";
    case SolveMethod::kRegretSelfplay: return "regret-selfplay";
  }
  return "unknown";
}

SolveMethod ParseSolveMethod(std::string_view name) {
  for (SolveMethod m : {SolveMethod::kSequenceFormLp, SolveMethod::kNormalFormLp,
                        SolveMethod::kRegretSelfplay}) {
    if (SolveMethodName(m) == name) return m;
  }
  throw Error(ErrorKind::kConfiguration,
              "unknown solve method '" + std::string(name) + "'");
}

double ExpectedPayoff(const StageGame& game, const BehavioralStrategy& strat) {
  const std::vector<double> per_state = StateValues(game, strat);
  double acc = 0.0;
  for (int s = 0; s < game.num_states(); ++s) {
    acc += game.state_weights[s] * per_state[s];
  }
  return acc;
}

std::vector<double> StateValues(const StageGame& game,
                                const BehavioralStrategy& strat) {
  std::vector<double> out(game.num_states(), 0.0);
  for (int s = 0; s < game.num_states(); ++s) {
    double acc = 0.0;
    for (int o = 0; o < game.num_options[s]; ++o) {
      const double l = strat.lambda[s][o];
      if (l == 0.0) continue;
      const std::vector<double>& c = strat.chi[game.infoset[s][o]];
      double inner = 0.0;
      for (int a = 0; a < game.num_actions; ++a) {
        inner += c[a] * game.Payoff(s, o, a);
      }
      acc += l * inner;
    }
    out[s] = acc;
  }
  return out;
}

BestResponseValues BestResponses(const StageGame& game,
                                 const BehavioralStrategy& strat, Exec exec) {
  BestResponseValues out;
  Table cfv;
  InfosetValues(game, InfosetMembers(game), strat.lambda, exec, &cfv);
  for (const auto& row : cfv) out.p2_best += *std::max_element(row.begin(), row.end());
  Table u;
  OptionValues(game, strat.chi, exec, &u);
  for (int s = 0; s < game.num_states(); ++s) {
    if (game.state_weights[s] == 0.0) continue;
    out.p1_best +=
        game.state_weights[s] * *std::min_element(u[s].begin(), u[s].end());
  }
  return out;
}

double Exploitability(const StageGame& game, const BehavioralStrategy& strat,
                      Exec exec) {
  const BestResponseValues br = BestResponses(game, strat, exec);
  return std::max(br.p2_best - br.p1_best, 0.0);
}

SolveReport SolveZeroSum(const StageGame& game, const SolveOptions& options) {
  game.Validate();
  Require(options.tol >= 0.0, ErrorKind::kInvalidArgument,
          "solve tolerance must be non-negative");
  if (options.method == SolveMethod::kRegretSelfplay) {
    return SolveRegret(game, options);
  }
  // Equilibria are invariant under positive affine maps of the payoffs;
  // solving on payoffs rescaled to [-1, 1] keeps the simplex well
  // conditioned when the raw payoffs are large and nearly equal.
  const double tol = options.tol;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& row : game.payoff) {
    for (double g : row) {
      lo = std::min(lo, g);
      hi = std::max(hi, g);
    }
  }
  const double half = hi > lo ? 0.5 * (hi - lo) : 1.0;
  const double mid = hi > lo ? 0.5 * (hi + lo) : 0.0;
  StageGame work = game;
  for (auto& row : work.payoff) {
    for (double& g : row) g = (g - mid) / half;
  }
  // Each side may give up at most a quarter of the tolerance to the
  // refinement, so the certified bound still holds.
  const double slack = tol / 4.0 / half;

  SolveReport report;
  report.method = options.method;
  report.strategy =
      options.method == SolveMethod::kSequenceFormLp
          ? SolveSequenceForm(work, options.refine, slack, &report.iterations)
          : SolveNormalForm(work, options, &report.iterations);
  CompleteZeroWeightStates(game, report.strategy.chi, &report.strategy.lambda);
  report.game_value = ExpectedPayoff(game, report.strategy);
  report.state_values = StateValues(game, report.strategy);
  report.exploitability = Exploitability(game, report.strategy, options.exec);
  if (report.exploitability > tol && options.refine &&
      options.method == SolveMethod::kSequenceFormLp) {
    // The refinement spends part of the tolerance; fall back to the plain
    // optimal vertex when rounding pushes it over.
    BehavioralStrategy alt =
        SolveSequenceForm(work, false, 0.0, &report.iterations);
    CompleteZeroWeightStates(game, alt.chi, &alt.lambda);
    const double alt_expl = Exploitability(game, alt, options.exec);
    if (alt_expl < report.exploitability) {
      report.strategy = std::move(alt);
      report.exploitability = alt_expl;
      report.game_value = ExpectedPayoff(game, report.strategy);
      report.state_values = StateValues(game, report.strategy);
    }
  }
  if (report.exploitability > tol) {
    throw SolveFailure("LP solution exploitability " +
                           std::to_string(report.exploitability) +
                           " exceeds tolerance",
                       report);
  }
  return report;
}

MarginalReport ExtractMarginals(const BehavioralStrategy& strat,
                                const StageGame& game, const MgSpaModel& model,
                                double tol) {
  const int n = model.num_agents();
  const int ns = model.num_states();
  const JointIndexer& obs = model.observation_index();
  const JointIndexer& acts = model.action_index();
  const JointIndexer& perts = model.perturbation_index();
  Require(game.num_infosets == obs.size() && game.num_actions == acts.size() &&
              game.num_states() == ns,
          ErrorKind::kShapeMismatch, "stage game does not match the model");

  std::vector<double> obs_mass(obs.size(), 0.0);
  for (int s = 0; s < ns; ++s) {
    for (int o = 0; o < game.num_options[s]; ++o) {
      obs_mass[game.infoset[s][o]] += game.state_weights[s] * strat.lambda[s][o];
    }
  }

  MarginalReport out;
  out.policy.agent.resize(n);
  out.policy.adversary.resize(n);
  for (int i = 0; i < n; ++i) {
    const int na = model.num_agent_actions(i);
    auto& table = out.policy.agent[i];
    table.assign(ns, std::vector<double>(na, 0.0));
    std::vector<double> mass(ns, 0.0);
    std::vector<int> count(ns, 0);
    Table unweighted(ns, std::vector<double>(na, 0.0));
    for (int x = 0; x < obs.size(); ++x) {
      const int own = obs.Digit(x, i);
      mass[own] += obs_mass[x];
      ++count[own];
      for (int a = 0; a < acts.size(); ++a) {
        const int ai = acts.Digit(a, i);
        table[own][ai] += obs_mass[x] * strat.chi[x][a];
        unweighted[own][ai] += strat.chi[x][a];
      }
    }
    for (int y = 0; y < ns; ++y) {
      if (mass[y] > 0.0) {
        for (double& p : table[y]) p /= mass[y];
      } else {
        table[y] = unweighted[y];
        for (double& p : table[y]) p /= count[y];
      }
      Normalize(&table[y]);
    }

    const int nb = model.num_adversary_actions(i);
    auto& adv = out.policy.adversary[i];
    adv.assign(ns, std::vector<double>(nb, 0.0));
    for (int s = 0; s < ns; ++s) {
      for (int b = 0; b < perts.size(); ++b) {
        adv[s][perts.Digit(b, i)] += strat.lambda[s][b];
      }
      Normalize(&adv[s]);
    }
  }

  for (int x = 0; x < obs.size(); ++x) {
    if (obs_mass[x] <= 0.0) continue;
    for (int a = 0; a < acts.size(); ++a) {
      double prod = 1.0;
      for (int i = 0; i < n; ++i) {
        prod *= out.policy.agent[i][obs.Digit(x, i)][acts.Digit(a, i)];
      }
      out.agent_residual =
          std::max(out.agent_residual, std::abs(strat.chi[x][a] - prod));
    }
  }
  for (int s = 0; s < ns; ++s) {
    for (int b = 0; b < perts.size(); ++b) {
      double prod = 1.0;
      for (int i = 0; i < n; ++i) {
        prod *= out.policy.adversary[i][s][perts.Digit(b, i)];
      }
      out.adversary_residual =
          std::max(out.adversary_residual, std::abs(strat.lambda[s][b] - prod));
    }
  }
  if (out.agent_residual > tol) {
    out.warnings.push_back("agent team equilibrium does not factorize: residual " +
                           std::to_string(out.agent_residual));
  }
  if (out.adversary_residual > tol) {
    out.warnings.push_back("perturber equilibrium does not factorize: residual " +
                           std::to_string(out.adversary_residual));
  }
  return out;
}

}  // namespace mgspa
