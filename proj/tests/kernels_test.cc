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

#include <vector>

#include "doctest.h"
#include "mgspa/model.h"
#include "mgspa/stage_game.h"
#include "mgspa/stage_kernels.h"
#include "mgspa/stage_solver.h"

namespace mgspa {
namespace {

TEST_CASE("parallel kernels match the serial reference bit for bit") {
  Rng rng(21);
  std::uniform_real_distribution<double> unif(-10.0, 10.0);
  for (int k = 0; k < 10; ++k) {
    const MgSpaModel m = RandomModel({}, rng);
    std::vector<double> v(m.num_states());
    for (double& x : v) x = unif(rng);
    const StageGame serial = BuildStageGame(m, v, {}, Exec::kSerial);
    const StageGame parallel = BuildStageGame(m, v, {}, Exec::kParallel);
    CHECK(serial.payoff == parallel.payoff);

    std::vector<double> q(m.num_states() * m.num_joint_actions() *
                          m.num_joint_perturbations());
    for (double& x : q) x = unif(rng);
    CHECK(BuildStageGameFromQ(m, q, {}, Exec::kSerial).payoff ==
          BuildStageGameFromQ(m, q, {}, Exec::kParallel).payoff);

    SolveOptions a, b;
    a.method = b.method = SolveMethod::kRegretSelfplay;
    a.tol = b.tol = 1e-3;
    a.exec = Exec::kSerial;
    b.exec = Exec::kParallel;
    const SolveReport ra = SolveZeroSum(serial, a);
    const SolveReport rb = SolveZeroSum(serial, b);
    CHECK(ra.strategy.chi == rb.strategy.chi);
    CHECK(ra.strategy.lambda == rb.strategy.lambda);
    CHECK(ra.iterations == rb.iterations);
  }
}

TEST_CASE("normal-form matrix kernels agree") {
  const MgSpaModel m = BuildToyTwoPlayer();
  const std::vector<double> v{3.0, -1.0};
  const StageGame g = BuildStageGame(m, v);
  std::vector<PureMap> p1, p2;
  for (int x = 0; x < 16; ++x) p1.push_back({x / 4, x % 4});
  for (int x = 0; x < 256; ++x) {
    p2.push_back({x / 64, (x / 16) % 4, (x / 4) % 4, x % 4});
  }
  CHECK(NormalFormMatrix(g, p2, p1, Exec::kSerial) ==
        NormalFormMatrix(g, p2, p1, Exec::kParallel));
}

}  // namespace
}  // namespace mgspa
