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

#ifndef MGSPA_TESTS_ORACLES_H_
#define MGSPA_TESTS_ORACLES_H_

// Brute-force reference computations used as independent oracles. Nothing
// here calls into the solver code under test.

#include <algorithm>
#include <limits>
#include <vector>

#include "mgspa/stage_game.h"
#include "mgspa/stage_solver.h"

namespace mgspa::testing {

// Calls fn(map) for every assignment of values in [0, radix[k]) to slot k.
template <typename Fn>
void ForEachPureMap(const std::vector<int>& radix, Fn fn) {
  std::vector<int> map(radix.size(), 0);
  while (true) {
    fn(map);
    std::size_t k = 0;
    while (k < map.size() && ++map[k] == radix[k]) map[k++] = 0;
    if (k == map.size()) return;
  }
}

// u(lambda, pure P2 map), summed term by term from the definition.
inline double PayoffVsPureTeam(const StageGame& g,
                               const std::vector<std::vector<double>>& lambda,
                               const std::vector<int>& team) {
  double u = 0.0;
  for (int s = 0; s < g.num_states(); ++s) {
    for (int o = 0; o < g.num_options[s]; ++o) {
      u += g.state_weights[s] * lambda[s][o] *
           g.payoff[s][o * g.num_actions + team[g.infoset[s][o]]];
    }
  }
  return u;
}

// u(pure P1 map, chi).
inline double PayoffVsPurePerturber(const StageGame& g,
                                    const std::vector<int>& perturber,
                                    const std::vector<std::vector<double>>& chi) {
  double u = 0.0;
  for (int s = 0; s < g.num_states(); ++s) {
    const int o = perturber[s];
    for (int a = 0; a < g.num_actions; ++a) {
      u += g.state_weights[s] * chi[g.infoset[s][o]][a] *
           g.payoff[s][o * g.num_actions + a];
    }
  }
  return u;
}

// Exploitability by enumerating every pure strategy of both players.
inline double BruteForceExploitability(const StageGame& g,
                                       const BehavioralStrategy& strat) {
  double best_team = -std::numeric_limits<double>::infinity();
  ForEachPureMap(std::vector<int>(g.num_infosets, g.num_actions),
                 [&](const std::vector<int>& m) {
                   best_team = std::max(best_team,
                                        PayoffVsPureTeam(g, strat.lambda, m));
                 });
  double best_perturber = std::numeric_limits<double>::infinity();
  ForEachPureMap(g.num_options, [&](const std::vector<int>& m) {
    best_perturber =
        std::min(best_perturber, PayoffVsPurePerturber(g, m, strat.chi));
  });
  return best_team - best_perturber;
}

// Pure maximin and minimax of a matrix (rows maximize).
inline std::pair<double, double> PureMaximinMinimax(
    const std::vector<std::vector<double>>& m) {
  double maximin = -std::numeric_limits<double>::infinity();
  for (const auto& row : m) {
    maximin = std::max(maximin, *std::min_element(row.begin(), row.end()));
  }
  double minimax = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < m[0].size(); ++j) {
    double col_max = -std::numeric_limits<double>::infinity();
    for (const auto& row : m) col_max = std::max(col_max, row[j]);
    minimax = std::min(minimax, col_max);
  }
  return {maximin, minimax};
}

}  // namespace mgspa::testing

#endif  // MGSPA_TESTS_ORACLES_H_
