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

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "mgspa/config.h"
#include "mgspa/evaluate.h"
#include "mgspa/harness.h"
#include "mgspa/serialize.h"

namespace mgspa {
namespace {

namespace fs = std::filesystem;

std::string TempDir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("mgspa_harness_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p.string();
}

std::string Slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string WriteFile(const std::string& dir, const std::string& name,
                      const std::string& text) {
  const std::string path = dir + "/" + name;
  std::ofstream(path) << text;
  return path;
}

// Exact expected one-step reward at state s under independent per-adversary
// flips with probability p, by enumeration of flips and agent actions.
double ExpectedStepReward(const MgSpaModel& m, const JointPolicy& pi, double p,
                          int s) {
  double total = 0.0;
  for (int f0 = 0; f0 < 2; ++f0) {
    for (int f1 = 0; f1 < 2; ++f1) {
      const double pf = (f0 ? p : 1 - p) * (f1 ? p : 1 - p);
      const int b[2] = {f0, f1};
      const int x0 = m.PerturbAgent(0, s, b[0]);
      const int x1 = m.PerturbAgent(1, s, b[1]);
      for (int a0 = 0; a0 < 2; ++a0) {
        for (int a1 = 0; a1 < 2; ++a1) {
          const double pa = pi.agent[0][x0][a0] * pi.agent[1][x1][a1];
          total += pf * pa * m.Reward(0, s, 2 * a0 + a1, 2 * b[0] + b[1]);
        }
      }
    }
  }
  return total;
}

TEST_CASE("empty config gives the defaults") {
  const std::string dir = TempDir("empty");
  const ExperimentConfig c = LoadConfig(WriteFile(dir, "c.json", "  \n"));
  CHECK(c.rmaac.gamma == 0.95);
  CHECK(c.rmaac.tau == 0.01);
  CHECK(c.rmaac.epsilon == 0.5);
  CHECK(c.rmaac.iteration_steps == 20);
  CHECK(c.rmaq.alpha == 0.1);
  CHECK(c.seeds == std::vector<std::uint64_t>{1});
  const ExperimentConfig o =
      LoadConfig(WriteFile(dir, "d.json", "{}"), {"rmaac.gamma=0.99"});
  CHECK(o.rmaac.gamma == 0.99);
  const ExperimentConfig f = LoadConfig(
      WriteFile(dir, "e.json", R"({"rmaac": {"gamma": 0.9}})"),
      {"rmaac.gamma=0.99", "seeds=[3,4]"});
  CHECK(f.rmaac.gamma == 0.99);
  CHECK(f.seeds == std::vector<std::uint64_t>{3, 4});
}

TEST_CASE("config errors name the key") {
  const std::string dir = TempDir("errors");
  auto message = [&](const std::string& text) {
    try {
      LoadConfig(WriteFile(dir, "c.json", text));
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kParse);
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message(R"({"rmaq": {"alpah": 0.1}})").find("alpah") !=
        std::string::npos);
  CHECK(message(R"({"sedes": [1]})").find("sedes") != std::string::npos);
  CHECK(message(R"({"rmaac": {"gamma": "high"}})").find("gamma") !=
        std::string::npos);
  CHECK(message("{not json").find("not valid JSON") != std::string::npos);
  CHECK_THROWS_AS(LoadConfig(dir + "/missing.json"), Error);
}

TEST_CASE("config json round trip") {
  const std::string dir = TempDir("roundtrip");
  const ExperimentConfig c = LoadConfig(
      WriteFile(dir, "c.json", R"({
        "domain": "continuous", "seeds": [1, 2],
        "model": {"gamma": 0.9},
        "rmaac": {"frame_stack": 4, "hidden": 16},
        "evaluate": {"policies": [{"name": "a", "source": "x.json"}],
                     "attacks": [{"family": "f2", "sigma": 0.3}]}})"));
  const nlohmann::json j = ConfigToJson(c);
  CHECK(ConfigToJson(ConfigFromJson(j)) == j);
  CHECK(c.evaluate.attacks[0].sigma == 0.3);
  CHECK(*c.model.gamma == 0.9);
}

TEST_CASE("toy evaluation: robust is flat, nominal loses 1 - p") {
  const MgSpaModel m = BuildToyTwoPlayer();
  const JointPolicy re = RobustEquilibriumPolicy(m);
  const JointPolicy ne = NominalOptimalPolicy(m);
  TabularEvalOptions o;
  o.episodes = 400;
  o.horizon = 25;
  for (double p : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    CAPTURE(p);
    o.attack_probability = p;
    for (int s = 0; s < 2; ++s) {
      CHECK(ExpectedStepReward(m, ne, p, s) == doctest::Approx(1 - p));
      CHECK(ExpectedStepReward(m, re, p, s) == doctest::Approx(0.5));
    }
    const EvalStats a = EvaluateTabular(m, re, o, 11);
    const EvalStats b = EvaluateTabular(m, ne, o, 11);
    CHECK(a.steps == 10000);
    CHECK(std::abs(a.mean_step_reward - 0.5) <= 0.03);
    CHECK(std::abs(b.mean_step_reward - (1 - p)) <= 0.03);
    CHECK(a.reward_variance >= 0.0);
  }
}

TEST_CASE("zero reward environment evaluates to zero") {
  auto env = MakeEnv("particle-nav-zero");
  RmaacConfig c;
  c.hidden = 8;
  const AgentBundle b = MakeBundle(2, 10, 2, c, 1);
  ContinuousEvalOptions o;
  o.episodes = 5;
  const EvalStats s =
      EvaluateContinuous(*env, b, AttackSpec::For(AttackFamily::kF1), &b, o, 1);
  CHECK(s.mean_episode_reward == 0.0);
  CHECK(s.reward_variance == 0.0);
  CHECK(s.steps == 125);
  AgentBundle wrong = MakeBundle(2, 9, 2, c, 1);
  CHECK_THROWS_AS(EvaluateContinuous(*env, wrong,
                                     AttackSpec::For(AttackFamily::kF4), nullptr,
                                     o, 1),
                  Error);
}

TEST_CASE("matrix cardinality, order, failures and aggregates") {
  int calls = 0;
  const auto rows = RobustnessMatrix(
      {"p0", "p1"}, {"a0", "a1", "a2"}, {7},
      [&](int p, int a, std::uint64_t seed) {
#pragma omp atomic
        ++calls;
        if (p == 1 && a == 2) throw Error(ErrorKind::kIo, "missing checkpoint");
        EvalStats s;
        s.mean_episode_reward = 10 * p + a;
        s.seed = seed;
        return s;
      });
  REQUIRE(rows.size() == 6);
  CHECK(calls == 6);
  CHECK(rows[1].policy == "p0");
  CHECK(rows[1].attack == "a1");
  CHECK(rows[4].stats.mean_episode_reward == 11.0);
  CHECK(rows[5].failed);
  CHECK(!rows[4].failed);

  const auto agg = RobustnessMatrix(
      {"p"}, {"a"}, {1, 2, 3}, [](int, int, std::uint64_t seed) {
        EvalStats s;
        s.mean_episode_reward = static_cast<double>(seed);
        return s;
      });
  REQUIRE(agg.size() == 4);
  CHECK(!agg[3].seed.has_value());
  CHECK(agg[3].stats.mean_episode_reward == 2.0);
  CHECK(agg[3].stats.reward_variance == 1.0);
  CHECK(agg[3].seeds == 3);
}

TEST_CASE("csv round trip and display column") {
  std::vector<MatrixRow> rows(2);
  rows[0].policy = "p";
  rows[0].attack = "f1:eps=0.5";
  rows[0].seed = 3;
  rows[0].stats.mean_episode_reward = -27.123456789012345;
  rows[0].stats.reward_variance = 1.0 / 3.0;
  rows[1].policy = "q";
  rows[1].attack = "f1:eps=0.5";
  rows[1].failed = true;
  rows[1].error = "cannot open 'a,b'";
  const CsvTable t = MatrixToCsv(rows);
  const std::string text = t.ToString();
  CHECK(text.rfind("# mgspa robustness-matrix v1\n", 0) == 0);
  const CsvTable back = CsvTable::Parse(text);
  CHECK(back.schema == t.schema);
  CHECK(back.header == t.header);
  CHECK(back.rows == t.rows);
  const int mean = back.Column("mean_episode_reward");
  CHECK(ParseDouble(back.rows[0][mean]) == rows[0].stats.mean_episode_reward);
  CHECK(ParseDouble(back.rows[0][back.Column("reward_variance")]) == 1.0 / 3.0);
  CHECK(ParseDouble(back.rows[0][back.Column("display_mean_plus_100")]) ==
        doctest::Approx(72.876543210987655));
  CHECK(back.rows[1][back.Column("seed")] == "aggregate");
  CHECK(back.rows[1][back.Column("status")].rfind("failed", 0) == 0);
  CHECK_THROWS_AS(CsvTable::Parse("# s\na,b\n1\n"), Error);
}

TEST_CASE("toy matrix through the harness") {
  const std::string dir = TempDir("matrix");
  ExperimentConfig c;
  c.out = dir + "/run";
  c.seeds = {1, 2};
  const RunOutput r = RunExperiment("matrix", c);
  // 2 policies x 5 probabilities x (2 seeds + aggregate).
  CHECK(r.rows.size() == 30);
  const CsvTable t = CsvTable::Parse(Slurp(c.out + "/matrix.csv"));
  CHECK(t.rows.size() == 30);
  CHECK(fs::exists(c.out + "/seed-1/matrix.csv"));
  CHECK(fs::exists(c.out + "/seed-2/matrix.csv"));
  const ExperimentConfig echoed = ConfigFromJson(ReadJsonFile(c.out + "/config.json"));
  CHECK(echoed.command == "matrix");
  CHECK(echoed.seeds == c.seeds);

  std::vector<double> re, ne;
  for (const MatrixRow& row : r.rows) {
    if (row.seed) continue;
    (row.policy == "robust" ? re : ne).push_back(row.stats.mean_step_reward);
  }
  REQUIRE(re.size() == 5);
  for (std::size_t k = 0; k < 5; ++k) {
    CHECK(std::abs(re[k] - 0.5) <= 0.03);
    if (k > 0) CHECK(ne[k] < ne[k - 1]);
  }

  ExperimentConfig again = c;
  again.out = dir + "/again";
  RunExperiment("matrix", again);
  CHECK(Slurp(c.out + "/matrix.csv") == Slurp(again.out + "/matrix.csv"));
}

TEST_CASE("harness rejects unknown and mismatched commands") {
  ExperimentConfig c;
  c.out = TempDir("commands");
  CHECK_THROWS_AS(RunExperiment("fly", c), Error);
  c.command = "plan";
  CHECK_THROWS_AS(RunExperiment("matrix", c), Error);
}

#ifdef MGSPA_CLI_PATH
int Shell(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

TEST_CASE("cli exit codes and records") {
  const std::string dir = TempDir("cli");
  const std::string cli = MGSPA_CLI_PATH;
  CHECK(Shell(cli + " plan --out " + dir + "/plan > " + dir + "/ok.json") == 0);
  const nlohmann::json ok = nlohmann::json::parse(Slurp(dir + "/ok.json"));
  CHECK(ok["status"] == "ok");
  const nlohmann::json v = ReadJsonFile(dir + "/plan/plan.json");
  CHECK(std::abs(v["v_star"][0][0].get<double>() - 50.0) <= 1e-4);

  CHECK(Shell(cli + " plan --gamma 0.9 --out " + dir + "/plan9 > /dev/null") ==
        0);
  const nlohmann::json v9 = ReadJsonFile(dir + "/plan9/plan.json");
  CHECK(std::abs(v9["v_star"][0][0].get<double>() - 5.0) <= 1e-4);

  const std::string bad = WriteFile(dir, "bad.json", R"({"rmaq": {"alfa": 1}})");
  CHECK(Shell(cli + " train-rmaq --config " + bad + " --out " + dir +
              "/x 2> " + dir + "/err.json") != 0);
  const nlohmann::json err = nlohmann::json::parse(Slurp(dir + "/err.json"));
  CHECK(err["status"] == "error");
  CHECK(err["kind"] == "parse");
  CHECK(err["message"].get<std::string>().find("alfa") != std::string::npos);

  CHECK(Shell(cli + " solve-stage --set stage.values=[50,50] --out " + dir +
              "/stage > /dev/null") == 0);
  const CsvTable st = CsvTable::Parse(Slurp(dir + "/stage/stage.csv"));
  CHECK(ParseDouble(st.rows[0][st.Column("game_value")]) ==
        doctest::Approx(50.0 * 0.99 + 0.5));
  CHECK(Shell(cli + " nonsense 2> /dev/null") != 0);
}
#endif

}  // namespace
}  // namespace mgspa
