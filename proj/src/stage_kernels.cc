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

#include "mgspa/stage_kernels.h"

namespace mgspa {
namespace {

inline double ValuePayoff(const MgSpaModel& model, std::span<const double> v,
                          int s, int a, int b) {
  double acc = 0.0;
  const std::span<const double> row = model.TransitionRow(s, a, b);
  for (int sn = 0; sn < model.num_states(); ++sn) acc += row[sn] * v[sn];
  return model.Reward(0, s, a, b) + model.gamma() * acc;
}

inline double PureProfileValue(const StageGame& game, const PureMap& p2,
                               const PureMap& p1) {
  double acc = 0.0;
  for (int s = 0; s < game.num_states(); ++s) {
    const double w = game.state_weights[s];
    if (w == 0.0) continue;
    const int o = p1[s];
    acc += w * game.Payoff(s, o, p2[game.infoset[s][o]]);
  }
  return acc;
}

inline void InfosetRow(const StageGame& game,
                       const std::vector<std::pair<int, int>>& members,
                       const std::vector<std::vector<double>>& lambda,
                       std::vector<double>* out) {
  out->assign(game.num_actions, 0.0);
  for (const auto& [s, o] : members) {
    const double reach = game.state_weights[s] * lambda[s][o];
    if (reach == 0.0) continue;
    for (int a = 0; a < game.num_actions; ++a) {
      (*out)[a] += reach * game.Payoff(s, o, a);
    }
  }
}

inline void OptionRow(const StageGame& game,
                      const std::vector<std::vector<double>>& chi, int s,
                      std::vector<double>* out) {
  out->assign(game.num_options[s], 0.0);
  for (int o = 0; o < game.num_options[s]; ++o) {
    const std::vector<double>& c = chi[game.infoset[s][o]];
    double acc = 0.0;
    for (int a = 0; a < game.num_actions; ++a) acc += c[a] * game.Payoff(s, o, a);
    (*out)[o] = acc;
  }
}

}  // namespace

void FillPayoffFromValue(const MgSpaModel& model, std::span<const double> v,
                         Exec exec, StageGame* game) {
  const int ns = model.num_states();
  const int na = model.num_joint_actions();
  const int nb = model.num_joint_perturbations();
  const int cells = ns * nb * na;
  if (exec == Exec::kSerial) {
    for (int k = 0; k < cells; ++k) {
      const int s = k / (nb * na), b = (k / na) % nb, a = k % na;
      game->payoff[s][b * na + a] = ValuePayoff(model, v, s, a, b);
    }
    return;
  }
#pragma omp parallel for schedule(static)
  for (int k = 0; k < cells; ++k) {
    const int s = k / (nb * na), b = (k / na) % nb, a = k % na;
    game->payoff[s][b * na + a] = ValuePayoff(model, v, s, a, b);
  }
}

void FillPayoffFromQ(const MgSpaModel& model, std::span<const double> q,
                     Exec exec, StageGame* game) {
  const int ns = model.num_states();
  const int na = model.num_joint_actions();
  const int nb = model.num_joint_perturbations();
  const int cells = ns * nb * na;
  if (exec == Exec::kSerial) {
    for (int k = 0; k < cells; ++k) {
      const int s = k / (nb * na), b = (k / na) % nb, a = k % na;
      game->payoff[s][b * na + a] = q[model.SabIndex(s, a, b)];
    }
    return;
  }
#pragma omp parallel for schedule(static)
  for (int k = 0; k < cells; ++k) {
    const int s = k / (nb * na), b = (k / na) % nb, a = k % na;
    game->payoff[s][b * na + a] = q[model.SabIndex(s, a, b)];
  }
}

std::vector<std::vector<double>> NormalFormMatrix(
    const StageGame& game, const std::vector<PureMap>& p2_maps,
    const std::vector<PureMap>& p1_maps, Exec exec) {
  const int rows = static_cast<int>(p2_maps.size());
  const int cols = static_cast<int>(p1_maps.size());
  std::vector<std::vector<double>> m(rows, std::vector<double>(cols));
  if (exec == Exec::kSerial) {
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) {
        m[i][j] = PureProfileValue(game, p2_maps[i], p1_maps[j]);
      }
    }
    return m;
  }
#pragma omp parallel for schedule(static)
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      m[i][j] = PureProfileValue(game, p2_maps[i], p1_maps[j]);
    }
  }
  return m;
}

void InfosetValues(const StageGame& game,
                   const std::vector<std::vector<std::pair<int, int>>>& members,
                   const std::vector<std::vector<double>>& lambda, Exec exec,
                   std::vector<std::vector<double>>* cfv) {
  const int ni = game.num_infosets;
  cfv->resize(ni);
  if (exec == Exec::kSerial) {
    for (int i = 0; i < ni; ++i) InfosetRow(game, members[i], lambda, &(*cfv)[i]);
    return;
  }
#pragma omp parallel for schedule(static)
  for (int i = 0; i < ni; ++i) InfosetRow(game, members[i], lambda, &(*cfv)[i]);
}

void OptionValues(const StageGame& game,
                  const std::vector<std::vector<double>>& chi, Exec exec,
                  std::vector<std::vector<double>>* u) {
  const int ns = game.num_states();
  u->resize(ns);
  if (exec == Exec::kSerial) {
    for (int s = 0; s < ns; ++s) OptionRow(game, chi, s, &(*u)[s]);
    return;
  }
#pragma omp parallel for schedule(static)
  for (int s = 0; s < ns; ++s) OptionRow(game, chi, s, &(*u)[s]);
}

}  // namespace mgspa
