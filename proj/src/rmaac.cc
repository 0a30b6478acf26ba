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

#include <algorithm>
#include <cmath>
#include <deque>

#include "mgspa/serialize.h"

namespace mgspa {
namespace {

Eigen::MatrixXd CriticInput(const std::vector<Eigen::MatrixXd>& s,
                            const std::vector<Eigen::MatrixXd>& a,
                            const std::vector<Eigen::MatrixXd>& b) {
  const Eigen::Index rows = s.front().rows();
  Eigen::Index cols = 0;
  for (const auto* group : {&s, &a, &b}) {
    for (const auto& m : *group) cols += m.cols();
  }
  Eigen::MatrixXd x(rows, cols);
  Eigen::Index c = 0;
  for (const auto* group : {&s, &a, &b}) {
    for (const auto& m : *group) {
      x.middleCols(c, m.cols()) = m;
      c += m.cols();
    }
  }
  return x;
}

// Stacked input whose most recent frame is replaced by `frame`.
Eigen::MatrixXd ReplaceFrame(const Eigen::MatrixXd& stacked,
                             const Eigen::MatrixXd& frame) {
  Eigen::MatrixXd out = stacked;
  out.leftCols(frame.cols()) = frame;
  return out;
}

// Stacked input one step later: `frame` followed by all but the oldest
// frame of `stacked`.
Eigen::MatrixXd ShiftInFrame(const Eigen::MatrixXd& stacked,
                             const Eigen::MatrixXd& frame) {
  Eigen::MatrixXd out(stacked.rows(), stacked.cols());
  out.leftCols(frame.cols()) = frame;
  const Eigen::Index rest = stacked.cols() - frame.cols();
  if (rest > 0) out.rightCols(rest) = stacked.leftCols(rest);
  return out;
}

Eigen::MatrixXd RowOf(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::MatrixXd>(v.data(), 1,
                                           static_cast<Eigen::Index>(v.size()));
}

std::vector<double> ToVector(const Eigen::MatrixXd& row) {
  return std::vector<double>(row.data(), row.data() + row.size());
}

struct PolicyGrads {
  double objective = 0.0;
  Eigen::VectorXd actor;
  Eigen::VectorXd adversary;
};

PolicyGrads ComputePolicyGrads(const AgentBundle& bundle, const Mlp& critic,
                               const Minibatch& mb, int agent,
                               bool want_adversary, bool include_reg) {
  const AgentNets& nets = bundle.agents[agent];
  const int k = mb.size();
  const int n = bundle.num_agents;
  const int d = bundle.obs_dim;
  const int m = bundle.act_dim;
  const Eigen::MatrixXd b = nets.adversary.Forward(mb.obs[agent]);
  const Eigen::MatrixXd st =
      PerturbRows(mb.obs[agent], b, bundle.epsilon, bundle.norm);
  const Eigen::MatrixXd input = ReplaceFrame(mb.actor_input[agent], st);
  std::vector<Eigen::MatrixXd> acts = mb.act;
  std::vector<Eigen::MatrixXd> perts = mb.pert;
  acts[agent] = nets.actor.Forward(input);
  perts[agent] = b;
  const Eigen::MatrixXd x = CriticInput(mb.obs, acts, perts);
  PolicyGrads out;
  out.objective = critic.Forward(x).mean();
  const Eigen::MatrixXd gx =
      critic.Backward(x, Eigen::MatrixXd::Constant(k, 1, 1.0 / k)).input;
  const Eigen::MatrixXd ga = gx.middleCols(n * d + agent * m, m);
  const Mlp::Grads actor_back = nets.actor.Backward(input, ga);
  out.actor = actor_back.params;
  if (want_adversary) {
    Eigen::MatrixXd up = gx.middleCols(n * d + n * m + agent * d, d);
    if (include_reg) {
      up += PerturbVjp(b, actor_back.input.leftCols(d), bundle.epsilon,
                       bundle.norm);
    }
    out.adversary = nets.adversary.Backward(mb.obs[agent], up).params;
  }
  return out;
}

double Decay(double start, double end, int episode, int episodes) {
  if (episodes <= 1) return start;
  return start + (end - start) * episode / static_cast<double>(episodes - 1);
}

}  // namespace

void RmaacConfig::Validate() const {
  auto check = [](bool ok, const std::string& what) {
    Require(ok, ErrorKind::kConfiguration, "rmaac config: " + what);
  };
  check(gamma >= 0.0 && gamma < 1.0, "gamma must lie in [0, 1)");
  check(tau >= 0.0 && tau <= 1.0, "tau must lie in [0, 1]");
  check(epsilon >= 0.0, "epsilon must be non-negative");
  check(lr_actor >= 0.0 && lr_critic >= 0.0 && lr_adversary >= 0.0,
        "learning rates must be non-negative");
  check(iteration_steps >= 1, "iteration_steps must be at least 1");
  check(hidden >= 1, "hidden must be positive");
  check(buffer_capacity >= minibatch, "buffer must hold a minibatch");
  check(minibatch >= 1, "minibatch must be positive");
  check(episodes >= 0, "episodes must be non-negative");
  check(update_every >= 1, "update_every must be positive");
  check(!frame_stack || *frame_stack >= 1, "frame_stack must be at least 1");
  check(checkpoint_fraction > 0.0 && checkpoint_fraction <= 1.0,
        "checkpoint_fraction must lie in (0, 1]");
  check(perturb != PerturbKind::kTablePermutation,
        "table-permutation needs a discrete state");
}

nlohmann::json RmaacConfigToJson(const RmaacConfig& c) {
  nlohmann::json j;
  j["gamma"] = c.gamma;
  j["tau"] = c.tau;
  j["epsilon"] = c.epsilon;
  j["norm"] = BallNormName(c.norm);
  j["perturb"] = PerturbKindName(c.perturb);
  j["perturb_sigma"] = c.perturb_sigma;
  j["lr_actor"] = c.lr_actor;
  j["lr_critic"] = c.lr_critic;
  j["lr_adversary"] = c.lr_adversary;
  j["iteration_steps"] = c.iteration_steps;
  j["hidden"] = c.hidden;
  j["buffer_capacity"] = c.buffer_capacity;
  j["minibatch"] = c.minibatch;
  j["episodes"] = c.episodes;
  j["update_every"] = c.update_every;
  j["action_noise_start"] = c.action_noise_start;
  j["action_noise_end"] = c.action_noise_end;
  j["perturb_noise_start"] = c.perturb_noise_start;
  j["perturb_noise_end"] = c.perturb_noise_end;
  j["optimizer"] = OptimizerName(c.optimizer);
  j["frame_stack"] = c.frame_stack ? nlohmann::json(*c.frame_stack)
                                   : nlohmann::json(nullptr);
  j["adversary_enabled"] = c.adversary_enabled;
  j["checkpoint_fraction"] = c.checkpoint_fraction;
  j["divergence_bound"] = c.divergence_bound;
  return j;
}

RmaacConfig RmaacConfigFromJson(const nlohmann::json& j,
                                const RmaacConfig& base) {
  const std::string where = "rmaac";
  CheckKeys(j,
            {"gamma", "tau", "epsilon", "norm", "perturb", "perturb_sigma",
             "lr_actor", "lr_critic", "lr_adversary", "iteration_steps",
             "hidden", "buffer_capacity", "minibatch", "episodes",
             "update_every", "action_noise_start", "action_noise_end",
             "perturb_noise_start", "perturb_noise_end", "optimizer",
             "frame_stack", "adversary_enabled", "checkpoint_fraction",
             "divergence_bound"},
            where);
  RmaacConfig c = base;
  MaybeGetKey(j, "gamma", where, &c.gamma);
  MaybeGetKey(j, "tau", where, &c.tau);
  MaybeGetKey(j, "epsilon", where, &c.epsilon);
  if (j.contains("norm")) {
    c.norm = ParseBallNorm(GetKey<std::string>(j, "norm", where));
  }
  if (j.contains("perturb")) {
    c.perturb = ParsePerturbKind(GetKey<std::string>(j, "perturb", where));
  }
  MaybeGetKey(j, "perturb_sigma", where, &c.perturb_sigma);
  MaybeGetKey(j, "lr_actor", where, &c.lr_actor);
  MaybeGetKey(j, "lr_critic", where, &c.lr_critic);
  MaybeGetKey(j, "lr_adversary", where, &c.lr_adversary);
  MaybeGetKey(j, "iteration_steps", where, &c.iteration_steps);
  MaybeGetKey(j, "hidden", where, &c.hidden);
  MaybeGetKey(j, "buffer_capacity", where, &c.buffer_capacity);
  MaybeGetKey(j, "minibatch", where, &c.minibatch);
  MaybeGetKey(j, "episodes", where, &c.episodes);
  MaybeGetKey(j, "update_every", where, &c.update_every);
  MaybeGetKey(j, "action_noise_start", where, &c.action_noise_start);
  MaybeGetKey(j, "action_noise_end", where, &c.action_noise_end);
  MaybeGetKey(j, "perturb_noise_start", where, &c.perturb_noise_start);
  MaybeGetKey(j, "perturb_noise_end", where, &c.perturb_noise_end);
  if (j.contains("optimizer")) {
    c.optimizer = ParseOptimizer(GetKey<std::string>(j, "optimizer", where));
  }
  if (j.contains("frame_stack")) {
    if (j.at("frame_stack").is_null()) {
      c.frame_stack.reset();
    } else {
      c.frame_stack = GetKey<int>(j, "frame_stack", where);
    }
  }
  MaybeGetKey(j, "adversary_enabled", where, &c.adversary_enabled);
  MaybeGetKey(j, "checkpoint_fraction", where, &c.checkpoint_fraction);
  MaybeGetKey(j, "divergence_bound", where, &c.divergence_bound);
  return c;
}

double AgentBundle::MaxParamNorm() const {
  double out = 0.0;
  for (const AgentNets& a : agents) {
    for (const Mlp* net : {&a.critic, &a.actor, &a.adversary, &a.critic_target,
                           &a.actor_target, &a.adversary_target}) {
      const double norm = net->params().norm();
      if (!(norm <= out)) out = norm;
    }
  }
  return out;
}

AgentBundle MakeBundle(int num_agents, int obs_dim, int act_dim,
                       const RmaacConfig& config, std::uint64_t seed) {
  config.Validate();
  Require(num_agents >= 1 && obs_dim >= 1 && act_dim >= 1,
          ErrorKind::kInvalidArgument, "bundle dimensions must be positive");
  AgentBundle bundle;
  bundle.num_agents = num_agents;
  bundle.obs_dim = obs_dim;
  bundle.act_dim = act_dim;
  bundle.history = config.history();
  bundle.epsilon = config.epsilon;
  bundle.norm = config.norm;
  Rng rng = DerivedRng(seed, 1);
  const std::vector<int> hidden{config.hidden, config.hidden};
  for (int i = 0; i < num_agents; ++i) {
    AgentNets nets;
    nets.critic = Mlp(bundle.critic_input_dim(), hidden, 1, OutputHead::kLinear);
    nets.actor = Mlp(bundle.actor_input_dim(), hidden, act_dim,
                     OutputHead::kTanh);
    nets.adversary = Mlp(obs_dim, hidden, obs_dim, OutputHead::kTanh,
                         config.epsilon);
    nets.critic.InitRandom(rng);
    nets.actor.InitRandom(rng);
    nets.adversary.InitRandom(rng);
    if (!config.adversary_enabled) nets.adversary.params().setZero();
    nets.critic_target = nets.critic;
    nets.actor_target = nets.actor;
    nets.adversary_target = nets.adversary;
    bundle.agents.push_back(std::move(nets));
  }
  return bundle;
}

nlohmann::json BundleToJson(const AgentBundle& bundle) {
  nlohmann::json j;
  j["num_agents"] = bundle.num_agents;
  j["obs_dim"] = bundle.obs_dim;
  j["act_dim"] = bundle.act_dim;
  j["history"] = bundle.history;
  j["epsilon"] = bundle.epsilon;
  j["norm"] = BallNormName(bundle.norm);
  j["agents"] = nlohmann::json::array();
  for (const AgentNets& a : bundle.agents) {
    j["agents"].push_back({{"critic", a.critic.ToJson()},
                           {"actor", a.actor.ToJson()},
                           {"adversary", a.adversary.ToJson()},
                           {"critic_target", a.critic_target.ToJson()},
                           {"actor_target", a.actor_target.ToJson()},
                           {"adversary_target", a.adversary_target.ToJson()}});
  }
  return j;
}

AgentBundle BundleFromJson(const nlohmann::json& j) {
  const std::string where = "bundle";
  CheckKeys(j,
            {"num_agents", "obs_dim", "act_dim", "history", "epsilon", "norm",
             "agents"},
            where);
  AgentBundle b;
  b.num_agents = GetKey<int>(j, "num_agents", where);
  b.obs_dim = GetKey<int>(j, "obs_dim", where);
  b.act_dim = GetKey<int>(j, "act_dim", where);
  b.history = GetKey<int>(j, "history", where);
  b.epsilon = GetKey<double>(j, "epsilon", where);
  b.norm = ParseBallNorm(GetKey<std::string>(j, "norm", where));
  const nlohmann::json& agents = j.at("agents");
  Require(agents.is_array() && static_cast<int>(agents.size()) == b.num_agents,
          ErrorKind::kParse, "bundle: agent count mismatch");
  for (const auto& a : agents) {
    CheckKeys(a,
              {"critic", "actor", "adversary", "critic_target", "actor_target",
               "adversary_target"},
              "bundle agent");
    AgentNets nets;
    nets.critic = Mlp::FromJson(a.at("critic"));
    nets.actor = Mlp::FromJson(a.at("actor"));
    nets.adversary = Mlp::FromJson(a.at("adversary"));
    nets.critic_target = Mlp::FromJson(a.at("critic_target"));
    nets.actor_target = Mlp::FromJson(a.at("actor_target"));
    nets.adversary_target = Mlp::FromJson(a.at("adversary_target"));
    Require(nets.critic.input_dim() == b.critic_input_dim() &&
                nets.actor.input_dim() == b.actor_input_dim() &&
                nets.actor.output_dim() == b.act_dim &&
                nets.adversary.input_dim() == b.obs_dim &&
                nets.adversary.output_dim() == b.obs_dim &&
                nets.critic_target.sizes() == nets.critic.sizes() &&
                nets.actor_target.sizes() == nets.actor.sizes() &&
                nets.adversary_target.sizes() == nets.adversary.sizes(),
            ErrorKind::kParse, "bundle: network shapes do not match");
    b.agents.push_back(std::move(nets));
  }
  return b;
}

std::vector<double> FrameStack(
    const std::vector<std::vector<double>>& recent_first, int h) {
  Require(h >= 1, ErrorKind::kInvalidArgument, "frame stack needs h >= 1");
  Require(!recent_first.empty(), ErrorKind::kInvalidArgument,
          "frame stack needs at least one observation");
  std::vector<double> out;
  for (int k = 0; k < h; ++k) {
    const auto& frame =
        recent_first[std::min<std::size_t>(k, recent_first.size() - 1)];
    out.insert(out.end(), frame.begin(), frame.end());
  }
  return out;
}

Eigen::MatrixXd PerturbRows(const Eigen::MatrixXd& obs,
                            const Eigen::MatrixXd& b, double epsilon,
                            BallNorm norm) {
  Require(obs.rows() == b.rows() && obs.cols() == b.cols(),
          ErrorKind::kShapeMismatch, "perturbation shape mismatch");
  Eigen::MatrixXd out = obs + b;
  std::vector<double> centre(obs.cols());
  std::vector<double> cand(obs.cols());
  for (Eigen::Index r = 0; r < obs.rows(); ++r) {
    for (Eigen::Index c = 0; c < obs.cols(); ++c) {
      centre[c] = obs(r, c);
      cand[c] = out(r, c);
    }
    ProjectToBall(centre, epsilon, norm, cand);
    for (Eigen::Index c = 0; c < obs.cols(); ++c) out(r, c) = cand[c];
  }
  return out;
}

Eigen::MatrixXd PerturbVjp(const Eigen::MatrixXd& b, const Eigen::MatrixXd& g,
                           double epsilon, BallNorm norm) {
  Eigen::MatrixXd out = g;
  for (Eigen::Index r = 0; r < b.rows(); ++r) {
    if (norm == BallNorm::kLInf) {
      for (Eigen::Index c = 0; c < b.cols(); ++c) {
        if (std::abs(b(r, c)) > epsilon) out(r, c) = 0.0;
      }
      continue;
    }
    const double len = b.row(r).norm();
    if (len <= epsilon) continue;
    const double dot = b.row(r).dot(g.row(r));
    out.row(r) = (epsilon / len) * (g.row(r) - b.row(r) * (dot / (len * len)));
  }
  return out;
}

GradResult CriticGradient(const AgentBundle& bundle, const Minibatch& mb,
                          int agent, double gamma) {
  const int n = bundle.num_agents;
  const int k = mb.size();
  std::vector<Eigen::MatrixXd> a2(n);
  std::vector<Eigen::MatrixXd> b2(n);
  for (int j = 0; j < n; ++j) {
    const AgentNets& nets = bundle.agents[j];
    b2[j] = nets.adversary_target.Forward(mb.next_obs[j]);
    const Eigen::MatrixXd st =
        PerturbRows(mb.next_obs[j], b2[j], bundle.epsilon, bundle.norm);
    a2[j] = nets.actor_target.Forward(ShiftInFrame(mb.actor_input[j], st));
  }
  const AgentNets& nets = bundle.agents[agent];
  const Eigen::VectorXd y =
      mb.rew.col(agent) +
      gamma * nets.critic_target.Forward(CriticInput(mb.next_obs, a2, b2)).col(0);
  const Eigen::MatrixXd x = CriticInput(mb.obs, mb.act, mb.pert);
  const Eigen::VectorXd diff = nets.critic.Forward(x).col(0) - y;
  GradResult out;
  out.objective = diff.squaredNorm() / k;
  out.grad = nets.critic.Backward(x, (2.0 / k) * diff).params;
  return out;
}

GradResult ActorGradient(const AgentBundle& bundle, const Mlp& critic,
                         const Minibatch& mb, int agent) {
  PolicyGrads pg = ComputePolicyGrads(bundle, critic, mb, agent, false, false);
  return {pg.objective, std::move(pg.actor)};
}

GradResult AdversaryGradient(const AgentBundle& bundle, const Mlp& critic,
                             const Minibatch& mb, int agent,
                             bool include_reg) {
  PolicyGrads pg =
      ComputePolicyGrads(bundle, critic, mb, agent, true, include_reg);
  return {pg.objective, std::move(pg.adversary)};
}

StochasticGradients StochasticPolicyGradients(
    const Mlp& critic, const Mlp& actor_mean, double actor_sigma,
    const Mlp& adversary_mean, double adversary_sigma, const Eigen::MatrixXd& s,
    const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double epsilon,
    BallNorm norm) {
  Require(actor_sigma > 0.0 && adversary_sigma > 0.0,
          ErrorKind::kInvalidArgument, "policy scales must be positive");
  const Eigen::Index k = s.rows();
  Eigen::MatrixXd x(k, s.cols() + a.cols() + b.cols());
  x << s, a, b;
  const Eigen::VectorXd q = critic.Forward(x).col(0);
  const Eigen::MatrixXd st = PerturbRows(s, b, epsilon, norm);
  // d log pi / d mu, per row.
  const Eigen::MatrixXd score_a =
      (a - actor_mean.Forward(st)) / (actor_sigma * actor_sigma);
  const Eigen::MatrixXd weighted = (score_a.array().colwise() * q.array()).matrix() / k;
  const Mlp::Grads actor_back = actor_mean.Backward(st, weighted);
  StochasticGradients out;
  out.actor = actor_back.params;
  // Score of rho plus reg = grad_s~ log pi routed back through f.
  const Eigen::MatrixXd score_b =
      (b - adversary_mean.Forward(s)) / (adversary_sigma * adversary_sigma);
  const Eigen::MatrixXd up =
      (score_b.array().colwise() * q.array()).matrix() / k +
      PerturbVjp(b, actor_back.input, epsilon, norm);
  out.adversary = adversary_mean.Backward(s, up).params;
  return out;
}

std::vector<double> ActorAction(const AgentBundle& bundle, int agent,
                                const std::vector<double>& input) {
  return ToVector(bundle.agents[agent].actor.Forward(RowOf(input)));
}

std::vector<double> AdversaryAction(const AgentBundle& bundle, int agent,
                                    const std::vector<double>& obs) {
  return ToVector(bundle.agents[agent].adversary.Forward(RowOf(obs)));
}

RmaacResult TrainRmaac(const ContinuousEnv& env_proto, AgentBundle bundle,
                       const RmaacConfig& config, std::uint64_t seed) {
  config.Validate();
  const int n = env_proto.num_agents();
  const int d = env_proto.obs_dim();
  const int m = env_proto.act_dim();
  const int h = config.history();
  const bool stacked = config.frame_stack.has_value();
  Require(bundle.num_agents == n && bundle.obs_dim == d &&
              bundle.act_dim == m && bundle.history == h,
          ErrorKind::kShapeMismatch, "bundle does not match the environment");
  std::unique_ptr<ContinuousEnv> env = env_proto.Clone();
  Rng rng = DerivedRng(seed, 2);
  RmaacResult result{std::move(bundle), {}, std::nullopt, 0, {}};
  AgentBundle& B = result.bundle;

  PerturbFn fn;
  fn.kind = config.perturb;
  fn.sigma = config.perturb_sigma;
  const bool reg = fn.IsAdditiveInB();
  if (!reg && config.adversary_enabled) {
    result.warnings.push_back("perturbation '" +
                              std::string(PerturbKindName(fn.kind)) +
                              "' is not differentiable in b; reg omitted");
  }

  std::vector<Optimizer> critic_opt;
  std::vector<Optimizer> actor_opt;
  std::vector<Optimizer> adversary_opt;
  for (const AgentNets& a : B.agents) {
    critic_opt.emplace_back(config.optimizer, a.critic.num_params(),
                            config.lr_critic);
    actor_opt.emplace_back(config.optimizer, a.actor.num_params(),
                           config.lr_actor);
    adversary_opt.emplace_back(config.optimizer, a.adversary.num_params(),
                               config.lr_adversary);
  }
  ReplayBuffer buffer(config.buffer_capacity, {n, d, m, h * d});
  const int snapshot_episode = std::max(
      1, static_cast<int>(std::lround(config.checkpoint_fraction *
                                      config.episodes)));
  long total_steps = 0;
  const std::vector<double> zero_b(d, 0.0);
  const std::vector<double> origin(d, 0.0);

  auto update = [&]() {
    for (int i = 0; i < n; ++i) {
      const Minibatch mb = buffer.Sample(config.minibatch, rng);
      AgentNets& nets = B.agents[i];
      const GradResult c = CriticGradient(B, mb, i, config.gamma);
      critic_opt[i].Descend(nets.critic.params(), c.grad);
      for (int it = 0; it < config.iteration_steps; ++it) {
        PolicyGrads pg = ComputePolicyGrads(B, nets.critic, mb, i,
                                            config.adversary_enabled, reg);
        actor_opt[i].Descend(nets.actor.params(), -pg.actor);
        if (config.adversary_enabled) {
          adversary_opt[i].Descend(nets.adversary.params(), pg.adversary);
        }
      }
    }
    for (AgentNets& a : B.agents) {
      SoftUpdate(a.critic, config.tau, &a.critic_target);
      SoftUpdate(a.actor, config.tau, &a.actor_target);
      SoftUpdate(a.adversary, config.tau, &a.adversary_target);
    }
    ++result.updates;
    const double norm = B.MaxParamNorm();
    if (!(norm <= config.divergence_bound)) {
      throw Error(ErrorKind::kDivergence,
                  "rmaac diverged: parameter norm " + std::to_string(norm) +
                      " after update " + std::to_string(result.updates));
    }
  };

  for (int ep = 0; ep < config.episodes; ++ep) {
    const double sa =
        Decay(config.action_noise_start, config.action_noise_end, ep,
              config.episodes);
    const double sb = config.epsilon * Decay(config.perturb_noise_start,
                                             config.perturb_noise_end, ep,
                                             config.episodes);
    std::normal_distribution<double> noise_a(0.0, sa > 0 ? sa : 1.0);
    std::normal_distribution<double> noise_b(0.0, sb > 0 ? sb : 1.0);
    std::vector<std::vector<double>> obs = env->Reset(rng);
    std::vector<std::deque<std::vector<double>>> frames(n);
    double episode_reward = 0.0;
    bool done = false;
    while (!done) {
      ContinuousTransition t;
      std::vector<std::vector<double>> actions(n);
      for (int i = 0; i < n; ++i) {
        std::vector<double> b = zero_b;
        if (config.adversary_enabled) {
          b = AdversaryAction(B, i, obs[i]);
          if (sb > 0) {
            for (double& x : b) x += noise_b(rng);
          }
          ProjectToBall(origin, config.epsilon, config.norm, b);
        }
        const std::vector<double> st =
            PerturbContinuous(fn, obs[i], b, config.epsilon, config.norm, rng);
        std::vector<double> input;
        if (stacked) {
          frames[i].push_front(st);
          if (static_cast<int>(frames[i].size()) > h) frames[i].pop_back();
          input = FrameStack({frames[i].begin(), frames[i].end()}, h);
        } else {
          input = st;
        }
        std::vector<double> a = ActorAction(B, i, input);
        for (double& x : a) {
          if (sa > 0) x += noise_a(rng);
          x = std::clamp(x, -1.0, 1.0);
        }
        t.obs.insert(t.obs.end(), obs[i].begin(), obs[i].end());
        t.act.insert(t.act.end(), a.begin(), a.end());
        t.pert.insert(t.pert.end(), b.begin(), b.end());
        t.actor_input.insert(t.actor_input.end(), input.begin(), input.end());
        actions[i] = std::move(a);
      }
      EnvStep step = env->Step(actions);
      t.rew = step.rewards;
      for (int i = 0; i < n; ++i) {
        t.next_obs.insert(t.next_obs.end(), step.observations[i].begin(),
                          step.observations[i].end());
      }
      buffer.Add(t);
      episode_reward += step.rewards[0];
      obs = std::move(step.observations);
      done = step.done;
      ++total_steps;
      if (buffer.size() >= config.minibatch &&
          total_steps % config.update_every == 0) {
        update();
      }
    }
    result.curve.push_back({ep, episode_reward});
    if (ep + 1 == snapshot_episode) result.nonoptimal = B;
  }
  return result;
}

}  // namespace mgspa
