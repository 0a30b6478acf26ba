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

#ifndef MGSPA_STAGE_KERNELS_H_
#define MGSPA_STAGE_KERNELS_H_

#include <span>
#include <vector>

#include "mgspa/model.h"
#include "mgspa/stage_game.h"

// Data-parallel kernels behind the stage game. Each kernel has an OpenMP
// path and a serial reference path computing every element with the same
// arithmetic, so the two agree bit for bit.

namespace mgspa {

// payoff[s][b * A + a] = r(s, a, b) + gamma * sum_s' p(s' | s, a, b) v(s').
void FillPayoffFromValue(const MgSpaModel& model, std::span<const double> v,
                         Exec exec, StageGame* game);

// payoff[s][b * A + a] = q(s, a, b).
void FillPayoffFromQ(const MgSpaModel& model, std::span<const double> q,
                     Exec exec, StageGame* game);

// Pure strategy of P1: one option per state. Of P2: one action per infoset.
using PureMap = std::vector<int>;

// m[i][j] = sum_s w_s g(s, p1[j][s], p2[i][infoset(s, p1[j][s])]).
std::vector<std::vector<double>> NormalFormMatrix(
    const StageGame& game, const std::vector<PureMap>& p2_maps,
    const std::vector<PureMap>& p1_maps, Exec exec);

// Counterfactual values for P2: cfv[I][a] = sum over (s, o) reaching I of
// w_s lambda(o | s) g(s, o, a). `members[I]` lists the (s, o) pairs.
void InfosetValues(const StageGame& game,
                   const std::vector<std::vector<std::pair<int, int>>>& members,
                   const std::vector<std::vector<double>>& lambda, Exec exec,
                   std::vector<std::vector<double>>* cfv);

// Option values for P1: u[s][o] = sum_a chi(a | infoset(s, o)) g(s, o, a).
void OptionValues(const StageGame& game,
                  const std::vector<std::vector<double>>& chi, Exec exec,
                  std::vector<std::vector<double>>* u);

}  // namespace mgspa

#endif  // MGSPA_STAGE_KERNELS_H_
