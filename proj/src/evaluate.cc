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

#include "mgspa/evaluate.h"

#include <cmath>
#include <deque>
#include <limits>

namespace mgspa {

namespace {

// Lowest adversary action of `agent` that leaves state s unchanged.
int IdentityPerturbation(const MgSpaModel& model, int agent, int s) {
  for (int b = 0; b < model.num_adversary_actions(agent); ++b) {
    if (model.PerturbAgent(agent, s, b) == s) return b;
  }
  throw Error(ErrorKind::kConfiguration,
              "adversary " + std::to_string(agent) +
                  " has no identity perturbation at state " +
                  std::to_string(s));
}

int IdentityJoint(const MgSpaModel& model, int s) {
  std::vector<int> digits(model.num_agents());
  for (int i = 0; i < model.num_agents(); ++i) {
    digits[i] = IdentityPerturbation(model, i, s);
  }
  return model.perturbation_index().Encode(digits);
}

double Mean(const std::vector<double>& x) {
  double acc = 0.0;
  for (double v : x) acc += v;
  return x.empty() ? 0.0 : acc / x.size();
}

double SampleVariance(const std::vector<double>& x) {
  if (x.size() < 2) return 0.0;
  const double m = Mean(x);
  double acc = 0.0;
  for (double v : x) acc += (v - m) * (v - m);
  return acc / (x.size() - 1);
}

}  // namespace

EvalStats Summarize(const std::vector<double>& episode_rewards,
                    const std::vector<double>& discounted_returns, long steps,
                    std::uint64_t seed) {
  EvalStats s;
  s.episodes = static_cast<int>(episode_rewards.size());
  s.steps = steps;
  s.seed = seed;
  s.mean_episode_reward = Mean(episode_rewards);
  s.reward_variance = SampleVariance(episode_rewards);
  s.mean_discounted_return = Mean(discounted_returns);
  double total = 0.0;
  for (double r : episode_rewards) total += r;
  s.mean_step_reward = steps > 0 ? total / steps : 0.0;
  return s;
}

JointPolicy NominalOptimalPolicy(const MgSpaModel& model, double tol) {
  Require(model.SharedReward(), ErrorKind::kConfiguration,
          "nominal policy needs a shared reward");
  const int S = model.num_states();
  const int A = model.num_joint_actions();
  std::vector<int> b_id(S);
  for (int s = 0; s < S; ++s) b_id[s] = IdentityJoint(model, s);
  std::vector<double> v(S, 0.0), next(S, 0.0);
  std::vector<int> greedy(S, 0);
  auto backup = [&](int s, int a) {
    double q = model.Reward(0, s, a, b_id[s]);
    const auto row = model.TransitionRow(s, a, b_id[s]);
    for (int t = 0; t < S; ++t) q += model.gamma() * row[t] * v[t];
    return q;
  };
  for (int iter = 0; iter < 1000000; ++iter) {
    double delta = 0.0;
    for (int s = 0; s < S; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      for (int a = 0; a < A; ++a) best = std::max(best, backup(s, a));
      next[s] = best;
      delta = std::max(delta, std::abs(best - v[s]));
    }
    v.swap(next);
    if (delta <= tol) break;
  }
  for (int s = 0; s < S; ++s) {
    double best = backup(s, 0);
    for (int a = 1; a < A; ++a) {
      const double q = backup(s, a);
      // Ties within round-off go to the lowest joint index.
      if (q > best + 1e-9 * (1.0 + std::abs(best))) {
        best = q;
        greedy[s] = a;
      }
    }
  }
  JointPolicy p;
  const int N = model.num_agents();
  p.agent.resize(N);
  p.adversary.resize(N);
  for (int i = 0; i < N; ++i) {
    p.agent[i].assign(S, std::vector<double>(model.num_agent_actions(i), 0.0));
    p.adversary[i].assign(
        S, std::vector<double>(model.num_adversary_actions(i), 0.0));
    for (int s = 0; s < S; ++s) {
      p.agent[i][s][model.action_index().Digit(greedy[s], i)] = 1.0;
      p.adversary[i][s][IdentityPerturbation(model, i, s)] = 1.0;
    }
  }
  return p;
}

JointPolicy RobustEquilibriumPolicy(const MgSpaModel& model,
                                    const PlanningOptions& options) {
  return ValueIteration(model, options).equilibrium_policy;
}

EvalStats EvaluateTabular(const MgSpaModel& model, const JointPolicy& policy,
                          const TabularEvalOptions& options,
                          std::uint64_t seed) {
  policy.Validate(model);
  Require(options.episodes >= 1 && options.horizon >= 1,
          ErrorKind::kInvalidArgument,
          "evaluation needs positive episodes and horizon");
  if (options.attack_probability) {
    const double p = *options.attack_probability;
    Require(p >= 0.0 && p <= 1.0, ErrorKind::kInvalidArgument,
            "attack probability must lie in [0, 1]");
  }
  const int S = model.num_states();
  const int N = model.num_agents();
  Rng rng = DerivedRng(seed, 3);
  std::uniform_int_distribution<int> start(0, S - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> totals, discounted;
  std::vector<int> b(N), a(N), moved;
  for (int ep = 0; ep < options.episodes; ++ep) {
    int s = start(rng);
    double total = 0.0, disc = 0.0, g = 1.0;
    for (int t = 0; t < options.horizon; ++t) {
      for (int i = 0; i < N; ++i) {
        if (!options.attack_probability) {
          b[i] = SampleIndex(policy.adversary[i][s], rng);
          continue;
        }
        b[i] = IdentityPerturbation(model, i, s);
        if (unit(rng) < *options.attack_probability) {
          moved.clear();
          for (int k = 0; k < model.num_adversary_actions(i); ++k) {
            if (model.PerturbAgent(i, s, k) != s) moved.push_back(k);
          }
          if (!moved.empty()) {
            std::uniform_int_distribution<int> pick(
                0, static_cast<int>(moved.size()) - 1);
            b[i] = moved[pick(rng)];
          }
        }
      }
      for (int i = 0; i < N; ++i) {
        const int x = model.PerturbAgent(i, s, b[i]);
        a[i] = SampleIndex(policy.agent[i][x], rng);
      }
      const int ja = model.action_index().Encode(a);
      const int jb = model.perturbation_index().Encode(b);
      const double r = model.Reward(0, s, ja, jb);
      total += r;
      disc += g * r;
      g *= model.gamma();
      s = SampleIndex(model.TransitionRow(s, ja, jb), rng);
    }
    totals.push_back(total);
    discounted.push_back(disc);
  }
  return Summarize(totals, discounted,
                   static_cast<long>(options.episodes) * options.horizon, seed);
}

EvalStats EvaluateContinuous(const ContinuousEnv& env_proto,
                             const AgentBundle& policy,
                             const AttackSpec& attack,
                             const AgentBundle* adversary,
                             const ContinuousEvalOptions& options,
                             std::uint64_t seed) {
  const int n = env_proto.num_agents();
  Require(policy.num_agents == n && policy.obs_dim == env_proto.obs_dim() &&
              policy.act_dim == env_proto.act_dim(),
          ErrorKind::kShapeMismatch,
          "policy does not match environment '" + env_proto.name() + "'");
  if (adversary != nullptr) {
    Require(adversary->num_agents == n &&
                adversary->obs_dim == env_proto.obs_dim(),
            ErrorKind::kShapeMismatch,
            "adversary does not match environment '" + env_proto.name() + "'");
  }
  Require(options.episodes >= 1, ErrorKind::kInvalidArgument,
          "evaluation needs at least one episode");
  std::unique_ptr<ContinuousEnv> env = env_proto.Clone();
  Rng rng = DerivedRng(seed, 4);
  const int h = policy.history;
  std::vector<double> totals, discounted;
  long steps = 0;
  for (int ep = 0; ep < options.episodes; ++ep) {
    std::vector<std::vector<double>> obs = env->Reset(rng);
    std::vector<std::deque<std::vector<double>>> frames(n);
    double total = 0.0, disc = 0.0, g = 1.0;
    bool done = false;
    while (!done) {
      const auto attacked = ApplyAttack(attack, obs, adversary, rng);
      std::vector<std::vector<double>> actions(n);
      for (int i = 0; i < n; ++i) {
        frames[i].push_front(attacked[i]);
        if (static_cast<int>(frames[i].size()) > h) frames[i].pop_back();
        actions[i] = ActorAction(
            policy, i, FrameStack({frames[i].begin(), frames[i].end()}, h));
      }
      EnvStep step = env->Step(actions);
      total += step.rewards[0];
      disc += g * step.rewards[0];
      g *= options.gamma;
      obs = std::move(step.observations);
      done = step.done;
      ++steps;
    }
    totals.push_back(total);
    discounted.push_back(disc);
  }
  return Summarize(totals, discounted, steps, seed);
}

std::vector<MatrixRow> RobustnessMatrix(
    const std::vector<std::string>& policies,
    const std::vector<std::string>& attacks,
    const std::vector<std::uint64_t>& seeds, const CellEvaluator& eval) {
  Require(!seeds.empty(), ErrorKind::kConfiguration,
          "robustness matrix needs at least one seed");
  const int P = static_cast<int>(policies.size());
  const int K = static_cast<int>(attacks.size());
  const int R = static_cast<int>(seeds.size());
  std::vector<MatrixRow> cells(static_cast<std::size_t>(P) * K * R);
  // Cells are independent; each writes only its own slot.
#pragma omp parallel for schedule(dynamic)
  for (int c = 0; c < P * K * R; ++c) {
    const int p = c / (K * R), k = (c / R) % K, r = c % R;
    MatrixRow& row = cells[c];
    row.policy = policies[p];
    row.attack = attacks[k];
    row.seed = seeds[r];
    try {
      row.stats = eval(p, k, seeds[r]);
    } catch (const std::exception& e) {
      row.failed = true;
      row.error = e.what();
    }
  }
  if (R == 1) return cells;
  std::vector<MatrixRow> rows;
  for (int p = 0; p < P; ++p) {
    for (int k = 0; k < K; ++k) {
      MatrixRow agg;
      agg.policy = policies[p];
      agg.attack = attacks[k];
      agg.seeds = 0;
      std::vector<double> means, disc, step;
      for (int r = 0; r < R; ++r) {
        const MatrixRow& cell = cells[(p * K + k) * R + r];
        rows.push_back(cell);
        if (cell.failed) continue;
        means.push_back(cell.stats.mean_episode_reward);
        disc.push_back(cell.stats.mean_discounted_return);
        step.push_back(cell.stats.mean_step_reward);
        agg.stats.episodes += cell.stats.episodes;
        agg.stats.steps += cell.stats.steps;
        ++agg.seeds;
      }
      if (means.empty()) {
        agg.failed = true;
        agg.error = "every seed failed";
      }
      agg.stats.mean_episode_reward = Mean(means);
      agg.stats.reward_variance = SampleVariance(means);
      agg.stats.mean_discounted_return = Mean(disc);
      agg.stats.mean_step_reward = Mean(step);
      rows.push_back(agg);
    }
  }
  return rows;
}

CsvTable MatrixToCsv(const std::vector<MatrixRow>& rows) {
  CsvTable t;
  t.schema = "mgspa robustness-matrix v1";
  t.header = {"policy",
              "attack",
              "seed",
              "status",
              "mean_episode_reward",
              "reward_variance",
              "mean_discounted_return",
              "mean_step_reward",
              "episodes",
              "seeds",
              "display_mean_plus_100"};
  for (const MatrixRow& r : rows) {
    std::string status = r.failed ? "failed" : "ok";
    if (r.failed && !r.error.empty()) {
      std::string why = r.error;
      for (char& ch : why) {
        if (ch == ',' || ch == '"' || ch == '\n' || ch == '\r') ch = ' ';
      }
      status += ":" + why;
    }
    t.rows.push_back(
        {r.policy, r.attack, r.seed ? std::to_string(*r.seed) : "aggregate",
         status, FormatDouble(r.stats.mean_episode_reward),
         FormatDouble(r.stats.reward_variance),
         FormatDouble(r.stats.mean_discounted_return),
         FormatDouble(r.stats.mean_step_reward),
         std::to_string(r.stats.episodes), std::to_string(r.seeds),
         FormatDouble(r.stats.mean_episode_reward + 100.0)});
  }
  return t;
}

}  // namespace mgspa
