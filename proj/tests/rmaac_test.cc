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

#include "mgspa/rmaac.h"

#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "mgspa/mlp.h"
#include "mgspa/particle_env.h"
#include "mgspa/replay_buffer.h"
#include "rmaac_oracles.h"

namespace mgspa {
namespace {

using namespace testing;  // NOLINT

TEST_CASE("mlp with zero weights outputs its biases") {
  Mlp net(3, {4, 4}, 2, OutputHead::kLinear);
  const int last = net.num_params() - 2;
  net.params()[last] = 0.25;
  net.params()[last + 1] = -1.5;
  Rng rng(1);
  const Eigen::MatrixXd y = net.Forward(Uniform(5, 3, -2, 2, rng));
  for (int r = 0; r < 5; ++r) {
    CHECK(y(r, 0) == 0.25);
    CHECK(y(r, 1) == -1.5);
  }
  CHECK_THROWS_AS(net.Forward(Eigen::MatrixXd::Zero(2, 4)), Error);
}

TEST_CASE("mlp gradients match finite differences") {
  Rng rng(2);
  int checked = 0;
  for (int trial = 0; checked < 20; ++trial) {
    Mlp net(4, {8, 8}, 3, trial % 2 ? OutputHead::kTanh : OutputHead::kLinear,
            0.7);
    net.InitRandom(rng);
    net.params() *= 3.0;
    const Eigen::MatrixXd x = Uniform(6, 4, -1, 1, rng);
    const Eigen::MatrixXd up = Uniform(6, 3, -1, 1, rng);
    if (net.MinAbsHiddenPreactivation(x) < 1e-3) continue;
    ++checked;
    const Mlp::Grads g = net.Backward(x, up);
    REQUIRE(g.params.size() == net.num_params());
    auto f = [&] { return (net.Forward(x).array() * up.array()).sum(); };
    CHECK(RelativeError(g.params, FiniteDifference(net.params(), f)) <=
          kFdRelTol);
    Eigen::MatrixXd xv = x;
    Eigen::VectorXd gin(x.size());
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      const double keep = xv.data()[k];
      xv.data()[k] = keep + kFdStep;
      const double a = (net.Forward(xv).array() * up.array()).sum();
      xv.data()[k] = keep - kFdStep;
      const double b = (net.Forward(xv).array() * up.array()).sum();
      xv.data()[k] = keep;
      gin[k] = (a - b) / (2 * kFdStep);
    }
    const Eigen::VectorXd got =
        Eigen::Map<const Eigen::VectorXd>(g.input.data(), g.input.size());
    CHECK(RelativeError(got, gin) <= kFdRelTol);
  }
}

TEST_CASE("mlp json round trip") {
  Rng rng(3);
  Mlp net(3, {5}, 2, OutputHead::kTanh, 0.5);
  net.InitRandom(rng);
  const Mlp back = Mlp::FromJson(net.ToJson());
  CHECK(back.params() == net.params());
  CHECK(back.sizes() == net.sizes());
  CHECK(back.output_scale() == 0.5);
}

TEST_CASE("assembled gradients match finite differences") {
  Rng rng(4);
  int checked = 0;
  for (std::uint64_t seed = 1; checked < 30; ++seed) {
    const SmallShape& shape = kShapes[seed % 3];
    AgentBundle b = SmallBundle(shape, seed);
    const Minibatch mb = RandomBatch(b, 5, rng);
    if (KinkMargin(b, mb) < 1e-3) continue;
    ++checked;
    CAPTURE(seed);
    const int i = static_cast<int>(seed % shape.agents);
    const double gamma = 0.95;

    const GradResult c = CriticGradient(b, mb, i, gamma);
    CHECK(c.objective == doctest::Approx(CriticLossOracle(b, mb, i, gamma)));
    CHECK(RelativeError(c.grad,
                        FiniteDifference(b.agents[i].critic.params(), [&] {
                          return CriticLossOracle(b, mb, i, gamma);
                        })) <= kFdRelTol);

    const Mlp critic = b.agents[i].critic;
    const GradResult a = ActorGradient(b, critic, mb, i);
    CHECK(RelativeError(a.grad,
                        FiniteDifference(b.agents[i].actor.params(), [&] {
                          return PolicyObjectiveOracle(b, critic, mb, i);
                        })) <= kFdRelTol);

    const GradResult r = AdversaryGradient(b, critic, mb, i);
    CHECK(RelativeError(r.grad,
                        FiniteDifference(b.agents[i].adversary.params(), [&] {
                          return PolicyObjectiveOracle(b, critic, mb, i);
                        })) <= kFdRelTol);
  }
}

TEST_CASE("critic loss examples") {
  RmaacConfig c;
  c.hidden = 4;
  AgentBundle b = MakeBundle(1, 2, 1, c, 1);
  b.agents[0].critic.params().setZero();
  b.agents[0].critic_target.params().setZero();
  Rng rng(5);
  Minibatch mb = RandomBatch(b, 8, rng);
  mb.rew.setOnes();
  CHECK(CriticGradient(b, mb, 0, 0.0).objective == 1.0);
  // Constant critic at r / (1 - gamma) is a fixed point: zero loss and zero
  // gradient, so a step leaves it in place.
  const double gamma = 0.9;
  const int bias = b.agents[0].critic.num_params() - 1;
  b.agents[0].critic.params()[bias] = 1.0 / (1.0 - gamma);
  b.agents[0].critic_target.params()[bias] = 1.0 / (1.0 - gamma);
  const GradResult g = CriticGradient(b, mb, 0, gamma);
  CHECK(g.objective <= 1e-20);
  CHECK(g.grad.norm() <= 1e-12);
  for (int trial = 0; trial < 10; ++trial) {
    AgentBundle r = MakeBundle(2, 3, 2, c, 10 + trial);
    CHECK(CriticGradient(r, RandomBatch(r, 6, rng), trial % 2, 0.95).objective >=
          0.0);
  }
}

TEST_CASE("actor gradient examples") {
  RmaacConfig c;
  c.hidden = 4;
  AgentBundle b = MakeBundle(1, 1, 1, c, 2);
  Rng rng(6);
  const Minibatch mb = RandomBatch(b, 4, rng);
  Mlp flat = b.agents[0].critic;
  flat.params().setZero();
  flat.params()[flat.num_params() - 1] = 3.0;
  CHECK(ActorGradient(b, flat, mb, 0).grad.norm() == 0.0);

  // Critic -|a - c| built from two rectifiers; linear actor a = w s + u.
  const double target = 0.3;
  Mlp critic(3, {2}, 1, OutputHead::kLinear);
  Eigen::VectorXd& p = critic.params();
  p.setZero();
  // Layer 0 weights (2 x 3, column-major): column 1 is the action input.
  p[2] = 1.0;
  p[3] = -1.0;
  p[6] = -target;
  p[7] = target;
  p[8] = -1.0;
  p[9] = -1.0;
  Mlp actor(1, {}, 1, OutputHead::kLinear);
  for (double start : {-0.8, 0.9}) {
    actor.params() << 0.5, start;
    b.agents[0].actor = actor;
    b.agents[0].adversary.params().setZero();
    Minibatch one = RandomBatch(b, 1, rng);
    const double a0 = actor.Forward(one.actor_input[0])(0, 0);
    const GradResult g = ActorGradient(b, critic, one, 0);
    Mlp moved = actor;
    moved.params() += 1e-3 * g.grad;
    const double a1 = moved.Forward(one.actor_input[0])(0, 0);
    CAPTURE(start);
    CHECK((a1 - a0) * (target - a0) > 0.0);
  }
}

TEST_CASE("adversary gradient examples") {
  Rng rng(7);
  AgentBundle b = SmallBundle({2, 1, 1, 1}, 3);
  const Minibatch mb = RandomBatch(b, 6, rng);
  const Mlp critic = b.agents[0].critic;
  // Actor constant in s~: weights zero, bias only.
  Mlp& actor = b.agents[0].actor;
  const Eigen::VectorXd keep = actor.params();
  actor.params().setZero();
  actor.params()[actor.num_params() - 1] = 0.2;
  const GradResult with = AdversaryGradient(b, critic, mb, 0, true);
  const GradResult without = AdversaryGradient(b, critic, mb, 0, false);
  CHECK((with.grad - without.grad).norm() == 0.0);
  actor.params() = keep;
  CHECK((AdversaryGradient(b, critic, mb, 0, true).grad -
         AdversaryGradient(b, critic, mb, 0, false).grad)
            .norm() > 0.0);
  // Inside the ball the projection Jacobian is the identity.
  const Eigen::MatrixXd bb = Uniform(4, 3, -0.2, 0.2, rng);
  const Eigen::MatrixXd g = Uniform(4, 3, -1, 1, rng);
  CHECK(PerturbVjp(bb, g, 0.5, BallNorm::kLInf) == g);
  CHECK(PerturbVjp(bb, g, 0.5, BallNorm::kL2) == g);
}

TEST_CASE("stochastic policy gradients match their surrogates") {
  Rng rng(8);
  const double sa = 0.4, sb = 0.3, eps = 0.5;
  int checked = 0;
  for (int trial = 0; checked < 10; ++trial) {
    Mlp critic(6, {8, 8}, 1, OutputHead::kLinear);
    Mlp actor(2, {8, 8}, 2, OutputHead::kTanh);
    Mlp adv(2, {8, 8}, 2, OutputHead::kTanh, 0.2);
    for (Mlp* n : {&critic, &actor, &adv}) {
      n->InitRandom(rng);
      n->params() *= 3.0;
    }
    const Eigen::MatrixXd s = Uniform(5, 2, -1, 1, rng);
    const Eigen::MatrixXd a = Uniform(5, 2, -1, 1, rng);
    const Eigen::MatrixXd b = Uniform(5, 2, -0.15, 0.15, rng);
    if (actor.MinAbsHiddenPreactivation(s + b) < 1e-3 ||
        adv.MinAbsHiddenPreactivation(s) < 1e-3) {
      continue;
    }
    ++checked;
    Eigen::MatrixXd x(5, 6);
    x << s, a, b;
    const Eigen::VectorXd q = critic.Forward(x).col(0);
    const StochasticGradients g =
        StochasticPolicyGradients(critic, actor, sa, adv, sb, s, a, b, eps,
                                  BallNorm::kLInf);
    auto log_gauss = [](const Eigen::MatrixXd& v, const Eigen::MatrixXd& mu,
                        double sigma) {
      return Eigen::VectorXd(
          (-(v - mu).rowwise().squaredNorm() / (2 * sigma * sigma)));
    };
    auto actor_surrogate = [&] {
      return q.dot(log_gauss(a, actor.Forward(Clamp(s, b, eps)), sa)) / 5;
    };
    CHECK(RelativeError(g.actor, FiniteDifference(actor.params(),
                                                  actor_surrogate)) <=
          kFdRelTol);
    // b = mu(s) + noise with the noise frozen at the sampled value.
    const Eigen::MatrixXd noise = b - adv.Forward(s);
    auto adversary_surrogate = [&] {
      const Eigen::MatrixXd mu = adv.Forward(s);
      const Eigen::MatrixXd moved = mu + noise;
      return (q.dot(log_gauss(b, mu, sb)) +
              q.dot(log_gauss(a, actor.Forward(Clamp(s, moved, eps)), sa))) /
             5;
    };
    CHECK(RelativeError(g.adversary, FiniteDifference(adv.params(),
                                                      adversary_surrogate)) <=
          kFdRelTol);
  }
}

TEST_CASE("soft update") {
  Mlp live(2, {3}, 1, OutputHead::kLinear);
  Mlp target = live;
  live.params().setConstant(2.0);
  Mlp t = target;
  SoftUpdate(live, 0.01, &t);
  for (Eigen::Index k = 0; k < t.num_params(); ++k) CHECK(t.params()[k] == 0.02);
  t = target;
  SoftUpdate(live, 1.0, &t);
  CHECK(t.params() == live.params());
  t = target;
  SoftUpdate(live, 0.0, &t);
  CHECK(t.params() == target.params());
  CHECK_THROWS_AS(SoftUpdate(live, 1.5, &t), Error);
  CHECK_THROWS_AS(SoftUpdate(live, -0.1, &t), Error);
  Rng rng(9);
  for (double tau : {0.01, 0.3, 0.77}) {
    live.InitRandom(rng);
    Mlp tt = live;
    tt.InitRandom(rng);
    const double before = (tt.params() - live.params()).norm();
    SoftUpdate(live, tau, &tt);
    CHECK((tt.params() - live.params()).norm() ==
          doctest::Approx((1 - tau) * before).epsilon(1e-12));
  }
}

TEST_CASE("frame stack") {
  const std::vector<double> x0{0, 0}, x1{1, 1}, x2{2, 2};
  CHECK(FrameStack({x2}, 1) == x2);
  CHECK(FrameStack({x2, x1, x0}, 3) == std::vector<double>{2, 2, 1, 1, 0, 0});
  CHECK(FrameStack({x1, x0}, 4) ==
        std::vector<double>{1, 1, 0, 0, 0, 0, 0, 0});
  CHECK_THROWS_AS(FrameStack({x0}, 0), Error);
}

TEST_CASE("replay buffer capacity and distinct sampling") {
  TransitionLayout layout{1, 1, 1, 1};
  ReplayBuffer buf(5, layout);
  Rng rng(10);
  for (int t = 0; t < 12; ++t) {
    const double v = t;
    buf.Add({{v}, {v}, {v}, {v}, {v}, {v}});
    CHECK(buf.size() <= buf.capacity());
  }
  CHECK(buf.size() == 5);
  // The ring keeps the five most recent records.
  const Minibatch all = buf.Gather({0, 1, 2, 3, 4});
  std::set<double> kept;
  for (int r = 0; r < 5; ++r) kept.insert(all.rew(r, 0));
  CHECK(kept == std::set<double>{7, 8, 9, 10, 11});
  for (int trial = 0; trial < 200; ++trial) {
    const auto idx = buf.SampleIndices(1 + trial % 5, rng);
    CHECK(std::set<int>(idx.begin(), idx.end()).size() == idx.size());
  }
  CHECK_THROWS_AS(buf.SampleIndices(6, rng), Error);
  CHECK_THROWS_AS(buf.Add({{1.0}, {}, {1.0}, {1.0}, {1.0}, {1.0}}), Error);
}

TEST_CASE("perturbed rows stay inside the ball") {
  Rng rng(11);
  for (BallNorm norm : {BallNorm::kLInf, BallNorm::kL2}) {
    const Eigen::MatrixXd o = Uniform(50, 4, -1, 1, rng);
    const Eigen::MatrixXd b = Uniform(50, 4, -3, 3, rng);
    const Eigen::MatrixXd st = PerturbRows(o, b, 0.5, norm);
    for (int r = 0; r < 50; ++r) {
      const Eigen::RowVectorXd d = st.row(r) - o.row(r);
      const double dist =
          norm == BallNorm::kLInf ? d.cwiseAbs().maxCoeff() : d.norm();
      CHECK(dist <= 0.5 + 1e-12);
    }
  }
}

RmaacConfig TinyConfig() {
  RmaacConfig c;
  c.hidden = 8;
  c.minibatch = 16;
  c.buffer_capacity = 1000;
  c.iteration_steps = 2;
  c.episodes = 6;
  c.update_every = 10;
  return c;
}

TEST_CASE("zero episodes leave the bundle unchanged") {
  auto env = MakeEnv("particle-nav");
  RmaacConfig c = TinyConfig();
  c.episodes = 0;
  const AgentBundle b = MakeBundle(2, 10, 2, c, 1);
  const RmaacResult r = TrainRmaac(*env, b, c, 1);
  CHECK(r.curve.empty());
  CHECK(BundleToJson(r.bundle).dump() == BundleToJson(b).dump());
}

TEST_CASE("zero reward environment") {
  auto env = MakeEnv("particle-nav-zero");
  RmaacConfig c = TinyConfig();
  c.episodes = 40;
  const AgentBundle b = MakeBundle(2, 10, 2, c, 2);
  const RmaacResult r = TrainRmaac(*env, b, c, 2);
  for (const auto& p : r.curve) CHECK(p.mean_episode_reward == 0.0);
  Rng rng(12);
  const Minibatch mb = RandomBatch(b, 64, rng);
  const double before = CriticGradient(b, mb, 0, 0.0).objective;
  const double after = CriticGradient(r.bundle, mb, 0, 0.0).objective;
  CHECK(after < before);
}

TEST_CASE("training is deterministic per seed") {
  auto env = MakeEnv("particle-nav");
  const RmaacConfig c = TinyConfig();
  const RmaacResult a = TrainRmaac(*env, MakeBundle(2, 10, 2, c, 3), c, 3);
  const RmaacResult b = TrainRmaac(*env, MakeBundle(2, 10, 2, c, 3), c, 3);
  REQUIRE(a.curve.size() == b.curve.size());
  for (std::size_t k = 0; k < a.curve.size(); ++k) {
    CHECK(a.curve[k].mean_episode_reward == b.curve[k].mean_episode_reward);
  }
  CHECK(BundleToJson(a.bundle).dump() == BundleToJson(b.bundle).dump());
  CHECK(a.updates > 0);
}

TEST_CASE("single frame stack is bit-identical to the unstacked path") {
  auto env = MakeEnv("particle-nav");
  RmaacConfig plain = TinyConfig();
  RmaacConfig one = plain;
  one.frame_stack = 1;
  const RmaacResult a = TrainRmaac(*env, MakeBundle(2, 10, 2, plain, 4), plain, 4);
  const RmaacResult b = TrainRmaac(*env, MakeBundle(2, 10, 2, one, 4), one, 4);
  REQUIRE(a.curve.size() == b.curve.size());
  for (std::size_t k = 0; k < a.curve.size(); ++k) {
    CHECK(a.curve[k].mean_episode_reward == b.curve[k].mean_episode_reward);
  }
  CHECK(BundleToJson(a.bundle).dump() == BundleToJson(b.bundle).dump());

  RmaacConfig four = plain;
  four.frame_stack = 4;
  const RmaacResult d = TrainRmaac(*env, MakeBundle(2, 10, 2, four, 4), four, 4);
  CHECK(d.curve.size() == static_cast<std::size_t>(four.episodes));
  CHECK(d.bundle.agents[0].actor.input_dim() == 40);
}

TEST_CASE("disabled adversaries stay at zero output") {
  auto env = MakeEnv("particle-nav");
  RmaacConfig c = TinyConfig();
  c.adversary_enabled = false;
  const RmaacResult r = TrainRmaac(*env, MakeBundle(2, 10, 2, c, 5), c, 5);
  for (const AgentNets& n : r.bundle.agents) {
    CHECK(n.adversary.params().norm() == 0.0);
  }
}

TEST_CASE("divergence guard and non-differentiable perturbation") {
  auto env = MakeEnv("particle-nav");
  RmaacConfig c = TinyConfig();
  c.divergence_bound = 1e-3;
  try {
    TrainRmaac(*env, MakeBundle(2, 10, 2, c, 6), c, 6);
    FAIL("expected divergence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kDivergence);
  }
  RmaacConfig u = TinyConfig();
  u.episodes = 1;
  u.perturb = PerturbKind::kUniform;
  const RmaacResult r = TrainRmaac(*env, MakeBundle(2, 10, 2, u, 6), u, 6);
  CHECK(r.warnings.size() == 1);
}

TEST_CASE("checkpoint and config round trips") {
  RmaacConfig c = TinyConfig();
  c.frame_stack = 2;
  const AgentBundle b = MakeBundle(2, 10, 2, c, 7);
  CHECK(BundleToJson(BundleFromJson(BundleToJson(b))).dump() ==
        BundleToJson(b).dump());
  CHECK(RmaacConfigToJson(RmaacConfigFromJson(RmaacConfigToJson(c))).dump() ==
        RmaacConfigToJson(c).dump());
  try {
    RmaacConfigFromJson({{"gama", 0.9}});
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("gama") != std::string::npos);
  }
  const RmaacConfig d = RmaacConfigFromJson(nlohmann::json::object());
  CHECK(d.gamma == 0.95);
  CHECK(d.tau == 0.01);
  CHECK(d.epsilon == 0.5);
  CHECK(d.iteration_steps == 20);
}

TEST_CASE("non-optimal snapshot is taken at the checkpoint fraction") {
  auto env = MakeEnv("particle-nav");
  RmaacConfig c = TinyConfig();
  c.episodes = 10;
  const RmaacResult r = TrainRmaac(*env, MakeBundle(2, 10, 2, c, 8), c, 8);
  REQUIRE(r.nonoptimal.has_value());
  CHECK(r.nonoptimal->num_agents == 2);
}

}  // namespace
}  // namespace mgspa
