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

#include "mgspa/serialize.h"

#include <charconv>
#include <fstream>
#include <sstream>

namespace mgspa {

void CheckKeys(const Json& j, std::initializer_list<const char*> allowed,
               const std::string& where) {
  if (!j.is_object()) {
    throw Error(ErrorKind::kParse, where + ": expected an object");
  }
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : allowed) ok = ok || item.key() == k;
    if (!ok) {
      throw Error(ErrorKind::kParse,
                  where + ": unknown key '" + item.key() + "'");
    }
  }
}

Json PerturbToJson(const PerturbFn& fn) {
  Json j;
  j["kind"] = std::string(PerturbKindName(fn.kind));
  j["sigma"] = fn.sigma;
  if (!fn.tables.empty()) j["tables"] = fn.tables;
  if (!fn.agent_epsilon.empty()) j["agent_epsilon"] = fn.agent_epsilon;
  return j;
}

PerturbFn PerturbFromJson(const Json& j) {
  CheckKeys(j, {"kind", "sigma", "tables", "agent_epsilon"}, "perturb");
  PerturbFn fn;
  fn.kind = ParsePerturbKind(GetKey<std::string>(j, "kind", "perturb"));
  if (j.contains("sigma")) fn.sigma = GetKey<double>(j, "sigma", "perturb");
  if (j.contains("tables")) {
    fn.tables = GetKey<std::vector<PerturbTable>>(j, "tables", "perturb");
  }
  if (j.contains("agent_epsilon")) {
    fn.agent_epsilon =
        GetKey<std::vector<double>>(j, "agent_epsilon", "perturb");
  }
  return fn;
}

Json ModelToJson(const MgSpaModel& model) {
  const MgSpaModel::Params& p = model.params();
  Json j;
  j["states"] = p.num_states;
  j["actions"] = {{"agent", p.agent_actions},
                  {"adversary", p.adversary_actions}};
  j["transition"] = p.transition;
  j["rewards"] = p.rewards;
  j["perturb"] = PerturbToJson(p.perturb);
  j["gamma"] = p.gamma;
  j["epsilon"] = p.epsilon;
  j["metric"] = std::string(BallNormName(p.metric));
  return j;
}

MgSpaModel ModelFromJson(const Json& j) {
  const std::string where = "model";
  CheckKeys(j, {"states", "actions", "transition", "rewards", "perturb",
                "gamma", "epsilon", "metric"},
            where);
  MgSpaModel::Params p;
  p.num_states = GetKey<int>(j, "states", where);
  const Json actions = GetKey<Json>(j, "actions", where);
  CheckKeys(actions, {"agent", "adversary"}, "model.actions");
  p.agent_actions = GetKey<std::vector<int>>(actions, "agent", "model.actions");
  p.adversary_actions =
      GetKey<std::vector<int>>(actions, "adversary", "model.actions");
  p.transition = GetKey<std::vector<double>>(j, "transition", where);
  p.rewards = GetKey<std::vector<std::vector<double>>>(j, "rewards", where);
  p.perturb = PerturbFromJson(GetKey<Json>(j, "perturb", where));
  p.gamma = GetKey<double>(j, "gamma", where);
  p.epsilon = GetKey<double>(j, "epsilon", where);
  if (j.contains("metric")) {
    p.metric = ParseBallNorm(GetKey<std::string>(j, "metric", where));
  }
  return MgSpaModel(std::move(p));
}

Json StageGameToJson(const StageGame& game) {
  Json j;
  j["state_weights"] = game.state_weights;
  j["num_options"] = game.num_options;
  j["infoset"] = game.infoset;
  j["num_infosets"] = game.num_infosets;
  j["num_actions"] = game.num_actions;
  j["payoff"] = game.payoff;
  return j;
}

StageGame StageGameFromJson(const Json& j) {
  const std::string where = "stage_game";
  // A bare matrix is accepted as a convenience.
  if (j.is_object() && j.contains("matrix")) {
    CheckKeys(j, {"matrix"}, where);
    return StageGameFromMatrix(
        GetKey<std::vector<std::vector<double>>>(j, "matrix", where));
  }
  CheckKeys(j, {"state_weights", "num_options", "infoset", "num_infosets",
                "num_actions", "payoff"},
            where);
  StageGame game;
  game.state_weights = GetKey<std::vector<double>>(j, "state_weights", where);
  game.num_options = GetKey<std::vector<int>>(j, "num_options", where);
  game.infoset = GetKey<std::vector<std::vector<int>>>(j, "infoset", where);
  game.num_infosets = GetKey<int>(j, "num_infosets", where);
  game.num_actions = GetKey<int>(j, "num_actions", where);
  game.payoff = GetKey<std::vector<std::vector<double>>>(j, "payoff", where);
  game.Validate();
  return game;
}

Json StrategyToJson(const BehavioralStrategy& strat) {
  return {{"lambda", strat.lambda}, {"chi", strat.chi}};
}

BehavioralStrategy StrategyFromJson(const Json& j) {
  CheckKeys(j, {"lambda", "chi"}, "strategy");
  BehavioralStrategy strat;
  strat.lambda =
      GetKey<std::vector<std::vector<double>>>(j, "lambda", "strategy");
  strat.chi = GetKey<std::vector<std::vector<double>>>(j, "chi", "strategy");
  return strat;
}

Json SolveReportToJson(const SolveReport& report) {
  Json j;
  j["strategy"] = StrategyToJson(report.strategy);
  j["game_value"] = report.game_value;
  j["exploitability"] = report.exploitability;
  j["iterations"] = report.iterations;
  j["method"] = std::string(SolveMethodName(report.method));
  j["state_values"] = report.state_values;
  return j;
}

Json PolicyToJson(const JointPolicy& policy) {
  return {{"agent", policy.agent}, {"adversary", policy.adversary}};
}

JointPolicy PolicyFromJson(const Json& j) {
  CheckKeys(j, {"agent", "adversary"}, "policy");
  using Tables = std::vector<std::vector<std::vector<double>>>;
  JointPolicy policy;
  policy.agent = GetKey<Tables>(j, "agent", "policy");
  policy.adversary = GetKey<Tables>(j, "adversary", "policy");
  return policy;
}

Json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  // An empty file reads as an empty object.
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    return Json::object();
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::kParse, path + ": " + e.what());
  }
}

void WriteTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIo, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorKind::kIo, "write failed for '" + path + "'");
}

void WriteJsonFile(const std::string& path, const Json& j) {
  WriteTextFile(path, j.dump(2) + "\n");
}

std::string FormatDouble(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

double ParseDouble(const std::string& s) {
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error(ErrorKind::kParse, "not a number: '" + s + "'");
  }
  return x;
}

namespace {

void AppendRow(const std::vector<std::string>& cells, std::string* out) {
  for (std::size_t c = 0; c < cells.size(); ++c) {
    Require(cells[c].find_first_of(",\"\n\r") == std::string::npos,
            ErrorKind::kInvalidArgument,
            "csv cell needs quoting: '" + cells[c] + "'");
    if (c > 0) *out += ',';
    *out += cells[c];
  }
  *out += '\n';
}

std::vector<std::string> SplitRow(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

}  // namespace

std::string CsvTable::ToString() const {
  std::string out = "# " + schema + "\n";
  AppendRow(header, &out);
  for (const auto& row : rows) {
    Require(row.size() == header.size(), ErrorKind::kShapeMismatch,
            "csv row width differs from the header");
    AppendRow(row, &out);
  }
  return out;
}

CsvTable CsvTable::Parse(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (t.schema.empty()) t.schema = line.substr(line.size() > 1 ? 2 : 1);
      continue;
    }
    std::vector<std::string> cells = SplitRow(line);
    if (!have_header) {
      t.header = std::move(cells);
      have_header = true;
      continue;
    }
    Require(cells.size() == t.header.size(), ErrorKind::kParse,
            "csv row width differs from the header");
    t.rows.push_back(std::move(cells));
  }
  Require(have_header, ErrorKind::kParse, "csv has no header");
  return t;
}

int CsvTable::Column(const std::string& name) const {
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == name) return static_cast<int>(c);
  }
  throw Error(ErrorKind::kInvalidArgument, "no csv column '" + name + "'");
}

}  // namespace mgspa
