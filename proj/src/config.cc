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

#include "mgspa/config.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "mgspa/serialize.h"

namespace mgspa {

namespace {

using Json = nlohmann::json;

std::string_view DomainName(Domain d) {
  return d == Domain::kTabular ? "tabular" : "continuous";
}

Domain ParseDomain(const std::string& name) {
  if (name == "tabular") return Domain::kTabular;
  if (name == "continuous") return Domain::kContinuous;
  throw Error(ErrorKind::kParse, "config: unknown domain '" + name + "'");
}

const Json& Section(const Json& j, const char* key) {
  static const Json kEmpty = Json::object();
  if (!j.contains(key)) return kEmpty;
  const Json& s = j.at(key);
  Require(s.is_object(), ErrorKind::kParse,
          std::string("config: key '") + key + "' must be an object");
  return s;
}

SolveMethod GetMethod(const Json& j, const char* key, const std::string& where,
                      SolveMethod fallback) {
  if (!j.contains(key)) return fallback;
  return ParseSolveMethod(GetKey<std::string>(j, key, where));
}

PolicyRef PolicyRefFromJson(const Json& j) {
  const std::string where = "config.evaluate.policies";
  Require(j.is_object(), ErrorKind::kParse, where + ": entries are objects");
  CheckKeys(j, {"name", "source", "adversary", "nonoptimal"}, where);
  PolicyRef p;
  p.source = GetKey<std::string>(j, "source", where);
  p.name = p.source;
  MaybeGetKey(j, "name", where, &p.name);
  MaybeGetKey(j, "adversary", where, &p.adversary);
  MaybeGetKey(j, "nonoptimal", where, &p.nonoptimal);
  return p;
}

}  // namespace

void ExperimentConfig::Validate() const {
  Require(!seeds.empty(), ErrorKind::kConfiguration,
          "config: seeds must be non-empty");
  if (model.gamma) {
    Require(*model.gamma >= 0.0 && *model.gamma < 1.0,
            ErrorKind::kConfiguration, "config: model.gamma must be in [0, 1)");
  }
  Require(planning.tol > 0.0 && planning.max_iters > 0,
          ErrorKind::kConfiguration,
          "config: planning needs positive tol and max_iters");
  Require(stage.tol >= 0.0, ErrorKind::kConfiguration,
          "config: stage.tol must be non-negative");
  Require(rmaq.alpha > 0.0 && rmaq.alpha <= 1.0, ErrorKind::kConfiguration,
          "config: rmaq.alpha must be in (0, 1]");
  Require(rmaq.episodes >= 0 && rmaq.steps_per_episode >= 1,
          ErrorKind::kConfiguration, "config: rmaq schedule is invalid");
  Require(rmaq.explore_epsilon >= 0.0 && rmaq.explore_epsilon <= 1.0,
          ErrorKind::kConfiguration,
          "config: rmaq.explore_epsilon must be in [0, 1]");
  rmaac.Validate();
  Require(evaluate.episodes >= 1 && evaluate.horizon >= 1,
          ErrorKind::kConfiguration,
          "config: evaluate needs positive episodes and horizon");
  for (double p : evaluate.attack_probabilities) {
    Require(p >= 0.0 && p <= 1.0, ErrorKind::kConfiguration,
            "config: attack probabilities must lie in [0, 1]");
  }
  for (const AttackSpec& a : evaluate.attacks) a.Validate();
}

Json ConfigToJson(const ExperimentConfig& c) {
  Json j;
  if (!c.command.empty()) j["command"] = c.command;
  j["domain"] = DomainName(c.domain);
  j["model"] = {{"source", c.model.source}};
  if (c.model.gamma) j["model"]["gamma"] = *c.model.gamma;
  j["env"] = c.env;
  j["seeds"] = c.seeds;
  j["out"] = c.out;
  j["planning"] = {{"tol", c.planning.tol},
                   {"max_iters", c.planning.max_iters},
                   {"stage_method", SolveMethodName(c.planning.stage_method)},
                   {"state_weights", c.planning.state_weights}};
  j["stage"] = {{"values", c.stage.values},
                {"method", SolveMethodName(c.stage.method)},
                {"tol", c.stage.tol},
                {"state_weights", c.stage.state_weights}};
  j["rmaq"] = {{"alpha", c.rmaq.alpha},
               {"lr", LrKindName(c.rmaq.lr)},
               {"episodes", c.rmaq.episodes},
               {"steps_per_episode", c.rmaq.steps_per_episode},
               {"exploration", ExplorationName(c.rmaq.exploration)},
               {"explore_epsilon", c.rmaq.explore_epsilon},
               {"stage_tol", c.rmaq.stage_tol},
               {"stage_method", SolveMethodName(c.rmaq.stage_method)}};
  j["rmaac"] = RmaacConfigToJson(c.rmaac);
  Json policies = Json::array();
  for (const PolicyRef& p : c.evaluate.policies) {
    Json e = {{"name", p.name}, {"source", p.source}};
    if (!p.adversary.empty()) e["adversary"] = p.adversary;
    if (!p.nonoptimal.empty()) e["nonoptimal"] = p.nonoptimal;
    policies.push_back(e);
  }
  Json attacks = Json::array();
  for (const AttackSpec& a : c.evaluate.attacks) {
    attacks.push_back(AttackSpecToJson(a));
  }
  j["evaluate"] = {{"episodes", c.evaluate.episodes},
                   {"horizon", c.evaluate.horizon},
                   {"attack_probabilities", c.evaluate.attack_probabilities},
                   {"policies", policies},
                   {"attacks", attacks}};
  return j;
}

ExperimentConfig ConfigFromJson(const Json& j) {
  Require(j.is_object(), ErrorKind::kParse, "config must be a JSON object");
  const std::string where = "config";
  CheckKeys(j,
            {"command", "domain", "model", "env", "seeds", "out", "planning",
             "stage", "rmaq", "rmaac", "evaluate"},
            where);
  ExperimentConfig c;
  MaybeGetKey(j, "command", where, &c.command);
  if (j.contains("domain")) {
    c.domain = ParseDomain(GetKey<std::string>(j, "domain", where));
  }
  MaybeGetKey(j, "env", where, &c.env);
  MaybeGetKey(j, "seeds", where, &c.seeds);
  MaybeGetKey(j, "out", where, &c.out);

  const Json& m = Section(j, "model");
  CheckKeys(m, {"source", "gamma"}, "config.model");
  MaybeGetKey(m, "source", "config.model", &c.model.source);
  if (m.contains("gamma")) {
    c.model.gamma = GetKey<double>(m, "gamma", "config.model");
  }

  const Json& p = Section(j, "planning");
  const std::string wp = "config.planning";
  CheckKeys(p, {"tol", "max_iters", "stage_method", "state_weights"}, wp);
  MaybeGetKey(p, "tol", wp, &c.planning.tol);
  MaybeGetKey(p, "max_iters", wp, &c.planning.max_iters);
  c.planning.stage_method =
      GetMethod(p, "stage_method", wp, c.planning.stage_method);
  MaybeGetKey(p, "state_weights", wp, &c.planning.state_weights);

  const Json& s = Section(j, "stage");
  const std::string ws = "config.stage";
  CheckKeys(s, {"values", "method", "tol", "state_weights"}, ws);
  MaybeGetKey(s, "values", ws, &c.stage.values);
  c.stage.method = GetMethod(s, "method", ws, c.stage.method);
  MaybeGetKey(s, "tol", ws, &c.stage.tol);
  MaybeGetKey(s, "state_weights", ws, &c.stage.state_weights);

  const Json& q = Section(j, "rmaq");
  const std::string wq = "config.rmaq";
  CheckKeys(q,
            {"alpha", "lr", "episodes", "steps_per_episode", "exploration",
             "explore_epsilon", "stage_tol", "stage_method"},
            wq);
  MaybeGetKey(q, "alpha", wq, &c.rmaq.alpha);
  if (q.contains("lr")) c.rmaq.lr = ParseLrKind(GetKey<std::string>(q, "lr", wq));
  MaybeGetKey(q, "episodes", wq, &c.rmaq.episodes);
  MaybeGetKey(q, "steps_per_episode", wq, &c.rmaq.steps_per_episode);
  if (q.contains("exploration")) {
    c.rmaq.exploration =
        ParseExploration(GetKey<std::string>(q, "exploration", wq));
  }
  MaybeGetKey(q, "explore_epsilon", wq, &c.rmaq.explore_epsilon);
  MaybeGetKey(q, "stage_tol", wq, &c.rmaq.stage_tol);
  c.rmaq.stage_method = GetMethod(q, "stage_method", wq, c.rmaq.stage_method);

  c.rmaac = RmaacConfigFromJson(Section(j, "rmaac"));

  const Json& e = Section(j, "evaluate");
  const std::string we = "config.evaluate";
  CheckKeys(e,
            {"episodes", "horizon", "attack_probabilities", "policies",
             "attacks"},
            we);
  MaybeGetKey(e, "episodes", we, &c.evaluate.episodes);
  MaybeGetKey(e, "horizon", we, &c.evaluate.horizon);
  MaybeGetKey(e, "attack_probabilities", we,
              &c.evaluate.attack_probabilities);
  if (e.contains("policies")) {
    Require(e.at("policies").is_array(), ErrorKind::kParse,
            we + ": key 'policies' must be an array");
    for (const Json& x : e.at("policies")) {
      c.evaluate.policies.push_back(PolicyRefFromJson(x));
    }
  }
  if (e.contains("attacks")) {
    Require(e.at("attacks").is_array(), ErrorKind::kParse,
            we + ": key 'attacks' must be an array");
    for (const Json& x : e.at("attacks")) {
      c.evaluate.attacks.push_back(AttackSpecFromJson(x));
    }
  }
  c.Validate();
  return c;
}

void ApplyOverride(const std::string& assignment, Json* j) {
  const std::size_t eq = assignment.find('=');
  Require(eq != std::string::npos && eq > 0, ErrorKind::kParse,
          "override '" + assignment + "' is not key=value");
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  Json value = Json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  Json* node = j;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = path.find('.', start);
    const std::string key = path.substr(start, dot - start);
    Require(!key.empty(), ErrorKind::kParse,
            "override '" + assignment + "' has an empty key");
    if (!node->is_object()) *node = Json::object();
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

ExperimentConfig LoadConfig(const std::string& path,
                            const std::vector<std::string>& overrides) {
  Json j = Json::object();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::kIo, "cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    if (text.find_first_not_of(" \t\r\n") != std::string::npos) {
      j = Json::parse(text, nullptr, false);
      Require(!j.is_discarded(), ErrorKind::kParse,
              "config '" + path + "' is not valid JSON");
    }
  }
  for (const std::string& o : overrides) ApplyOverride(o, &j);
  return ConfigFromJson(j);
}

MgSpaModel LoadModel(const ModelSection& section) {
  if (section.source == "toy") {
    return BuildToyTwoPlayer(section.gamma.value_or(0.99));
  }
  MgSpaModel m = ModelFromJson(ReadJsonFile(section.source));
  return section.gamma ? m.WithGamma(*section.gamma) : m;
}

PlanningOptions ToPlanningOptions(const PlanningSection& s) {
  PlanningOptions o;
  o.tol = s.tol;
  o.max_iters = s.max_iters;
  o.stage.method = s.stage_method;
  o.state_weights = s.state_weights;
  return o;
}

RmaqOptions ToRmaqOptions(const RmaqSection& s) {
  RmaqOptions o;
  o.lr.kind = s.lr;
  o.lr.base = s.alpha;
  o.stage_tol = s.stage_tol;
  o.stage_method = s.stage_method;
  o.exploration = s.exploration;
  o.explore_epsilon = s.explore_epsilon;
  return o;
}

}  // namespace mgspa
