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

#include "mgspa/harness.h"

#include <filesystem>
#include <optional>

#include "mgspa/planning.h"
#include "mgspa/rmaq.h"
#include "mgspa/serialize.h"
#include "mgspa/stage_game.h"

namespace mgspa {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

class RunDir {
 public:
  explicit RunDir(RunOutput* out) : out_(out) {
    std::error_code ec;
    fs::create_directories(out_->out_dir, ec);
    Require(!ec, ErrorKind::kIo,
            "cannot create '" + out_->out_dir + "': " + ec.message());
  }

  std::string Path(const std::string& rel) const {
    return (fs::path(out_->out_dir) / rel).string();
  }

  void Json(const std::string& rel, const nlohmann::json& j) {
    Prepare(rel);
    WriteJsonFile(Path(rel), j);
    out_->files.push_back(rel);
  }

  void Csv(const std::string& rel, const CsvTable& t) {
    Prepare(rel);
    WriteTextFile(Path(rel), t.ToString());
    out_->files.push_back(rel);
  }

 private:
  void Prepare(const std::string& rel) const {
    const fs::path parent = fs::path(Path(rel)).parent_path();
    std::error_code ec;
    fs::create_directories(parent, ec);
    Require(!ec, ErrorKind::kIo, "cannot create '" + parent.string() + "'");
  }

  RunOutput* out_;
};

std::string SeedDir(std::uint64_t seed) {
  return "seed-" + std::to_string(seed) + "/";
}

void RunPlan(const ExperimentConfig& c, RunDir& dir, RunOutput& out) {
  const MgSpaModel model = LoadModel(c.model);
  const PlanningReport r = ValueIteration(model, ToPlanningOptions(c.planning));
  out.warnings.insert(out.warnings.end(), r.warnings.begin(),
                      r.warnings.end());
  dir.Json("plan.json", {{"v_star", r.v_star},
                         {"residual", r.residual},
                         {"iterations", r.iterations},
                         {"stage_exploitability", r.stage_exploitability},
                         {"policy", PolicyToJson(r.equilibrium_policy)},
                         {"warnings", r.warnings}});
  CsvTable values;
  values.schema = "mgspa plan-values v1";
  values.header = {"agent", "state", "value"};
  for (std::size_t i = 0; i < r.v_star.size(); ++i) {
    for (std::size_t s = 0; s < r.v_star[i].size(); ++s) {
      values.rows.push_back({std::to_string(i), std::to_string(s),
                             FormatDouble(r.v_star[i][s])});
    }
  }
  dir.Csv("values.csv", values);
  CsvTable res;
  res.schema = "mgspa plan-residuals v1";
  res.header = {"iteration", "residual"};
  for (std::size_t k = 0; k < r.residual_history.size(); ++k) {
    res.rows.push_back(
        {std::to_string(k + 1), FormatDouble(r.residual_history[k])});
  }
  dir.Csv("residuals.csv", res);
}

void RunSolveStage(const ExperimentConfig& c, RunDir& dir) {
  const MgSpaModel model = LoadModel(c.model);
  std::vector<double> v = c.stage.values;
  if (v.empty()) v.assign(model.num_states(), 0.0);
  Require(static_cast<int>(v.size()) == model.num_states(),
          ErrorKind::kConfiguration,
          "stage.values needs one entry per state");
  const StageGame game = BuildStageGame(model, v, c.stage.state_weights);
  SolveOptions opt;
  opt.method = c.stage.method;
  opt.tol = c.stage.tol;
  const SolveReport r = SolveZeroSum(game, opt);
  dir.Json("stage.json", SolveReportToJson(r));
  CsvTable t;
  t.schema = "mgspa stage-solution v1";
  t.header = {"method", "game_value", "exploitability", "iterations"};
  t.rows.push_back({std::string(SolveMethodName(r.method)),
                    FormatDouble(r.game_value), FormatDouble(r.exploitability),
                    std::to_string(r.iterations)});
  dir.Csv("stage.csv", t);
}

void RunTrainRmaq(const ExperimentConfig& c, RunDir& dir) {
  const MgSpaModel model = LoadModel(c.model);
  const PlanningReport plan =
      ValueIteration(model, ToPlanningOptions(c.planning));
  const std::vector<double> q_star = QFromValue(model, plan.v_star[0]);
  for (std::uint64_t seed : c.seeds) {
    RmaqResult r = TrainRmaq(model, ToRmaqOptions(c.rmaq), c.rmaq.episodes,
                             c.rmaq.steps_per_episode, seed, &q_star);
    CsvTable t;
    t.schema = "mgspa rmaq-curve v1";
    t.header = {"episode", "discounted_return", "q_gap"};
    for (const RmaqCurvePoint& p : r.curve) {
      t.rows.push_back({std::to_string(p.episode),
                        FormatDouble(p.discounted_return),
                        FormatDouble(p.q_gap)});
    }
    const std::string d = SeedDir(seed);
    dir.Csv(d + "curve.csv", t);
    dir.Json(d + "q.json", {{"q", r.learner.q()},
                            {"visits", r.learner.visit_counts()},
                            {"skipped_updates", r.learner.skipped_updates()}});
    dir.Json(d + "policy.json", PolicyToJson(r.learner.GreedyPolicy()));
  }
}

void RunTrainRmaac(const ExperimentConfig& c, RunDir& dir, RunOutput& out) {
  const std::unique_ptr<ContinuousEnv> env = MakeEnv(c.env);
  const Json cfg = RmaacConfigToJson(c.rmaac);
  for (std::uint64_t seed : c.seeds) {
    const AgentBundle init = MakeBundle(env->num_agents(), env->obs_dim(),
                                        env->act_dim(), c.rmaac, seed);
    RmaacResult r = TrainRmaac(*env, init, c.rmaac, seed);
    const std::string d = SeedDir(seed);
    CsvTable t;
    t.schema = "mgspa rmaac-curve v1";
    t.header = {"episode", "mean_episode_reward"};
    for (const RmaacCurvePoint& p : r.curve) {
      t.rows.push_back(
          {std::to_string(p.episode), FormatDouble(p.mean_episode_reward)});
    }
    dir.Csv(d + "curve.csv", t);
    dir.Json(d + "checkpoint.json", {{"env", c.env},
                                     {"seed", seed},
                                     {"updates", r.updates},
                                     {"config", cfg},
                                     {"bundle", BundleToJson(r.bundle)}});
    if (r.nonoptimal) {
      dir.Json(d + "nonoptimal.json", {{"env", c.env},
                                       {"seed", seed},
                                       {"config", cfg},
                                       {"bundle", BundleToJson(*r.nonoptimal)}});
    }
    for (const std::string& w : r.warnings) {
      out.warnings.push_back("seed " + std::to_string(seed) + ": " + w);
    }
  }
}

// Loaded object or the error that loading raised; cells rethrow it.
template <typename T>
struct Loaded {
  std::optional<T> value;
  std::string error;

  const T& Get() const {
    if (!value) throw Error(ErrorKind::kIo, error);
    return *value;
  }
};

template <typename T, typename F>
Loaded<T> TryLoad(F f) {
  Loaded<T> l;
  try {
    l.value = f();
  } catch (const std::exception& e) {
    l.error = e.what();
  }
  return l;
}

std::vector<MatrixRow> TabularMatrix(const ExperimentConfig& c,
                                     const std::vector<PolicyRef>& refs) {
  const MgSpaModel model = LoadModel(c.model);
  std::vector<Loaded<JointPolicy>> policies;
  std::vector<std::string> names;
  for (const PolicyRef& p : refs) {
    names.push_back(p.name);
    policies.push_back(TryLoad<JointPolicy>([&] {
      if (p.source == "robust") {
        return RobustEquilibriumPolicy(model, ToPlanningOptions(c.planning));
      }
      if (p.source == "nominal") return NominalOptimalPolicy(model);
      if (p.source == "uniform") return UniformPolicy(model);
      return PolicyFromJson(ReadJsonFile(p.source));
    }));
  }
  std::vector<std::string> attacks;
  for (double p : c.evaluate.attack_probabilities) {
    attacks.push_back("flip:p=" + FormatDouble(p));
  }
  return RobustnessMatrix(
      names, attacks, c.seeds, [&](int pi, int ai, std::uint64_t seed) {
        TabularEvalOptions o;
        o.episodes = c.evaluate.episodes;
        o.horizon = c.evaluate.horizon;
        o.attack_probability = c.evaluate.attack_probabilities[ai];
        return EvaluateTabular(model, policies[pi].Get(), o, seed);
      });
}

std::vector<MatrixRow> ContinuousMatrix(const ExperimentConfig& c,
                                        const std::vector<PolicyRef>& refs) {
  const std::unique_ptr<ContinuousEnv> env = MakeEnv(c.env);
  Require(!refs.empty(), ErrorKind::kConfiguration,
          "continuous evaluation needs evaluate.policies checkpoints");
  std::vector<AttackSpec> attacks = c.evaluate.attacks;
  if (attacks.empty()) attacks.push_back(AttackSpec::For(AttackFamily::kF1));
  std::vector<Loaded<AgentBundle>> policy, trained, nonoptimal;
  std::vector<std::string> names, labels;
  for (const PolicyRef& p : refs) {
    names.push_back(p.name);
    policy.push_back(TryLoad<AgentBundle>([&] { return LoadBundle(p.source); }));
    trained.push_back(TryLoad<AgentBundle>([&] {
      return LoadBundle(p.adversary.empty() ? p.source : p.adversary);
    }));
    nonoptimal.push_back(TryLoad<AgentBundle>([&] {
      Require(!p.nonoptimal.empty(), ErrorKind::kConfiguration,
              "policy '" + p.name + "' has no non-optimal checkpoint");
      return LoadBundle(p.nonoptimal);
    }));
  }
  for (const AttackSpec& a : attacks) labels.push_back(a.Label());
  ContinuousEvalOptions o;
  o.episodes = c.evaluate.episodes;
  o.gamma = c.rmaac.gamma;
  return RobustnessMatrix(
      names, labels, c.seeds, [&](int pi, int ai, std::uint64_t seed) {
        const AttackSpec& a = attacks[ai];
        const AgentBundle* adv = nullptr;
        if (a.source == AdversarySource::kTrained) adv = &trained[pi].Get();
        if (a.source == AdversarySource::kNonoptimal) {
          adv = &nonoptimal[pi].Get();
        }
        return EvaluateContinuous(*env, policy[pi].Get(), a, adv, o, seed);
      });
}

void RunMatrix(const ExperimentConfig& c, bool single, const std::string& stem,
               RunDir& dir, RunOutput& out) {
  std::vector<PolicyRef> refs = c.evaluate.policies;
  if (refs.empty() && c.domain == Domain::kTabular) {
    refs = {{"robust", "robust", "", ""}, {"nominal", "nominal", "", ""}};
  }
  if (single && refs.size() > 1) refs.resize(1);
  out.rows = c.domain == Domain::kTabular ? TabularMatrix(c, refs)
                                          : ContinuousMatrix(c, refs);
  dir.Csv(stem + ".csv", MatrixToCsv(out.rows));
  if (c.seeds.size() > 1) {
    for (std::uint64_t seed : c.seeds) {
      std::vector<MatrixRow> mine;
      for (const MatrixRow& r : out.rows) {
        if (r.seed == seed) mine.push_back(r);
      }
      dir.Csv(SeedDir(seed) + stem + ".csv", MatrixToCsv(mine));
    }
  }
  for (const MatrixRow& r : out.rows) {
    if (r.failed && r.seed) {
      out.warnings.push_back("cell " + r.policy + " / " + r.attack +
                             " failed: " + r.error);
    }
  }
}

}  // namespace

const std::vector<std::string>& CommandNames() {
  static const std::vector<std::string> kNames{
      "plan", "train-rmaq", "train-rmaac", "evaluate", "solve-stage", "matrix"};
  return kNames;
}

AgentBundle LoadBundle(const std::string& path) {
  const Json j = ReadJsonFile(path);
  return BundleFromJson(j.contains("bundle") ? j.at("bundle") : j);
}

RunOutput RunExperiment(const std::string& command, ExperimentConfig config) {
  bool known = false;
  for (const std::string& n : CommandNames()) known |= n == command;
  Require(known, ErrorKind::kConfiguration,
          "unknown command '" + command + "'");
  Require(config.command.empty() || config.command == command,
          ErrorKind::kConfiguration,
          "config is for '" + config.command + "', not '" + command + "'");
  config.command = command;
  if (command == "train-rmaac") config.domain = Domain::kContinuous;
  if (command == "plan" || command == "train-rmaq" ||
      command == "solve-stage") {
    config.domain = Domain::kTabular;
  }
  if (config.out.empty()) config.out = "runs/" + command;
  config.Validate();
  RunOutput out;
  out.out_dir = config.out;
  RunDir dir(&out);
  dir.Json("config.json", ConfigToJson(config));
  if (command == "plan") {
    RunPlan(config, dir, out);
  } else if (command == "solve-stage") {
    RunSolveStage(config, dir);
  } else if (command == "train-rmaq") {
    RunTrainRmaq(config, dir);
  } else if (command == "train-rmaac") {
    RunTrainRmaac(config, dir, out);
  } else if (command == "evaluate") {
    RunMatrix(config, true, "evaluate", dir, out);
  } else {
    RunMatrix(config, false, "matrix", dir, out);
  }
  return out;
}

nlohmann::json SuccessRecord(const std::string& command, const RunOutput& r) {
  return {{"status", "ok"},
          {"command", command},
          {"out", r.out_dir},
          {"files", r.files},
          {"warnings", r.warnings}};
}

nlohmann::json ErrorRecord(const std::string& command, const std::string& kind,
                           const std::string& message) {
  return {{"status", "error"},
          {"command", command},
          {"kind", kind},
          {"message", message}};
}

}  // namespace mgspa
