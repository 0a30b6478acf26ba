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

#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "mgspa/model.h"
#include "mgspa/perturb.h"

namespace mgspa {
namespace {

int A(int a1, int a2) { return 2 * a1 + a2; }
int B(int b1, int b2) { return 2 * b1 + b2; }

TEST_CASE("toy game reward, transition and perturbation tables") {
  const MgSpaModel m = BuildToyTwoPlayer();
  CHECK(m.gamma() == 0.99);
  CHECK(m.num_agents() == 2);
  CHECK(m.num_states() == 2);
  for (int b = 0; b < 4; ++b) {
    CHECK(m.Reward(0, 0, A(1, 1), b) == 1.0);
    CHECK(m.Reward(0, 0, A(1, 0), b) == 0.0);
    CHECK(m.Reward(0, 1, A(1, 0), b) == 1.0);
    CHECK(m.Reward(0, 1, A(0, 0), b) == 0.0);
    CHECK(m.Transition(0, A(1, 1), b, 1) == 1.0);
    CHECK(m.Transition(0, A(1, 0), b, 0) == 1.0);
  }
  CHECK(m.PerturbAgent(0, 0, 1) == 1);
  CHECK(m.PerturbAgent(0, 0, 0) == 0);
  CHECK(Perturb(m, 0, B(0, 1)) == std::vector<int>{0, 1});
  CHECK(m.SharedReward());
  CHECK(m.reward_bound() == 1.0);
}

TEST_CASE("transition rows are stochastic and tables bijective") {
  Rng rng(7);
  std::vector<MgSpaModel> models{BuildToyTwoPlayer()};
  for (int k = 0; k < 20; ++k) models.push_back(RandomModel({}, rng));
  for (const MgSpaModel& m : models) {
    for (int s = 0; s < m.num_states(); ++s) {
      for (int a = 0; a < m.num_joint_actions(); ++a) {
        for (int b = 0; b < m.num_joint_perturbations(); ++b) {
          double total = 0.0;
          for (double p : m.TransitionRow(s, a, b)) {
            CHECK(p >= 0.0);
            total += p;
          }
          CHECK(std::abs(total - 1.0) <= 1e-12);
        }
      }
      for (int i = 0; i < m.num_agents(); ++i) {
        std::set<int> image;
        for (int b = 0; b < m.num_adversary_actions(i); ++b) {
          image.insert(m.PerturbAgent(i, s, b));
        }
        CHECK(static_cast<int>(image.size()) == m.num_adversary_actions(i));
      }
    }
    CHECK(m.SharedReward());
  }
}

TEST_CASE("model construction rejects invalid inputs") {
  MgSpaModel::Params p = BuildToyTwoPlayer().params();
  SUBCASE("non-bijective perturbation") {
    p.perturb.tables = {{{0, 0}, {1, 0}}};
    CHECK_THROWS_AS(MgSpaModel{p}, Error);
  }
  SUBCASE("non-stochastic row") {
    p.transition[0] = 0.5;
    CHECK_THROWS_AS(MgSpaModel{p}, Error);
  }
  SUBCASE("gamma out of range") {
    p.gamma = 1.0;
    CHECK_THROWS_AS(MgSpaModel{p}, Error);
  }
  SUBCASE("continuous kind on a tabular model") {
    p.perturb.kind = PerturbKind::kGaussianAdditive;
    CHECK_THROWS_AS(MgSpaModel{p}, Error);
  }
}

TEST_CASE("unknown perturbation kind is a configuration error") {
  try {
    ParsePerturbKind("swirl");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kConfiguration);
  }
}

TEST_CASE("linear-additive perturbation clamps to the ball") {
  Rng rng(1);
  PerturbFn f;
  f.kind = PerturbKind::kLinearAdditive;
  const std::vector<double> s1{0.3}, b1{0.2};
  CHECK(PerturbContinuous(f, s1, b1, 0.5, BallNorm::kLInf, rng)[0] ==
        doctest::Approx(0.5).epsilon(1e-15));
  const std::vector<double> s2{0.0}, b2{0.9};
  CHECK(PerturbContinuous(f, s2, b2, 0.5, BallNorm::kLInf, rng)[0] == 0.5);
}

TEST_CASE("l2 projection rescales radially") {
  std::vector<double> centre{1.0, 1.0}, x{4.0, 5.0};
  ProjectToBall(centre, 1.0, BallNorm::kL2, x);
  CHECK(x[0] == doctest::Approx(1.6));
  CHECK(x[1] == doctest::Approx(1.8));
}

TEST_CASE("every continuous kind stays inside the ball") {
  Rng rng(11);
  std::uniform_real_distribution<double> unif(-3.0, 3.0);
  const PerturbKind kinds[] = {
      PerturbKind::kLinearAdditive,   PerturbKind::kGaussianAdditive,
      PerturbKind::kUniform,          PerturbKind::kLaplaceAdditive,
      PerturbKind::kFixedGaussian,    PerturbKind::kNonoptimalGaussian};
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    PerturbFn f;
    f.kind = kinds[k % 6];
    const BallNorm norm = (k / 6) % 2 ? BallNorm::kL2 : BallNorm::kLInf;
    const double eps = 0.5 * (1 + k % 3);
    std::vector<double> s(3), b(3);
    for (double& x : s) x = unif(rng);
    for (double& x : b) x = unif(rng);
    const auto out = PerturbContinuous(f, s, b, eps, norm, rng);
    worst = std::max(worst, BallDistance(s, out, norm) - eps);
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("step with point-mass policies is deterministic") {
  const MgSpaModel m = BuildToyTwoPlayer();
  JointPolicy pi = UniformPolicy(m);
  for (int i = 0; i < 2; ++i) {
    for (int s = 0; s < 2; ++s) {
      pi.agent[i][s] = {0.0, 1.0};
      pi.adversary[i][s] = {1.0, 0.0};
    }
  }
  Rng rng(3);
  const StepResult r = Step(m, 0, pi, rng);
  CHECK(r.b == B(0, 0));
  CHECK(r.a == A(1, 1));
  CHECK(r.rewards == std::vector<double>{1.0, 1.0});
  CHECK(r.s_next == 1);
  Rng other(99);
  const StepResult r2 = Step(m, 0, pi, other);
  CHECK(r2.a == r.a);
  CHECK(r2.s_next == r.s_next);
}

TEST_CASE("uniform play earns the exhaustive expected reward") {
  const MgSpaModel m = BuildToyTwoPlayer();
  // Oracle: average reward over the full outcome table of each state.
  double expected = 0.0;
  for (int s = 0; s < 2; ++s) {
    double acc = 0.0;
    for (int b = 0; b < 4; ++b) {
      for (int a1 = 0; a1 < 2; ++a1) {
        for (int a2 = 0; a2 < 2; ++a2) {
          acc += ((s == 0) == (a1 == a2)) ? 1.0 : 0.0;
        }
      }
    }
    expected += acc / 16.0 / 2.0;
  }
  const JointPolicy pi = UniformPolicy(m);
  Rng rng(2024);
  int s = 0;
  double total = 0.0;
  const int steps = 100000;
  for (int t = 0; t < steps; ++t) {
    const StepResult r = Step(m, s, pi, rng);
    total += r.rewards[0];
    s = r.s_next;
  }
  CHECK(std::abs(total / steps - expected) <= 0.02);
}

TEST_CASE("discounted return") {
  std::vector<double> ones(3000, 1.0);
  const double closed = (1.0 - std::pow(0.99, 3000)) / (1.0 - 0.99);
  CHECK(std::abs(DiscountedReturn(ones, 0.99) - closed) <= 1e-11);
  CHECK(std::abs(DiscountedReturn(ones, 0.99) - 100.0) <= 1e-10);
  std::vector<double> zeros(10, 0.0);
  CHECK(DiscountedReturn(zeros, 0.9) == 0.0);
  std::vector<double> short_seq{1.0, 0.0, 1.0};
  CHECK(DiscountedReturn(short_seq, 0.5) == 1.25);
  const std::vector<std::vector<double>> per_agent{{1.0, 2.0}, {1.0, 2.0}};
  CHECK(DiscountedReturn(per_agent, 0.5) == std::vector<double>{1.5, 3.0});
}

}  // namespace
}  // namespace mgspa
