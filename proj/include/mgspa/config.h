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

#ifndef MGSPA_CONFIG_H_
#define MGSPA_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mgspa/attacks.h"
#include "mgspa/model.h"
#include "mgspa/planning.h"
#include "mgspa/rmaac.h"
#include "mgspa/rmaq.h"
#include "mgspa/stage_solver.h"

namespace mgspa {

// Where a tabular model comes from: "toy" or a model JSON file.
struct ModelSection {
  std::string source = "toy";
  // Overrides the model's discount when set.
  std::optional<double> gamma;
};

struct PlanningSection {
  // Residual stop; the value error is at most tol * gamma / (1 - gamma).
  double tol = 1e-6;
  int max_iters = 100000;
  SolveMethod stage_method = SolveMethod::kSequenceFormLp;
  std::vector<double> state_weights;
};

struct StageSection {
  // Value function the stage game is built from; empty means zeros.
  std::vector<double> values;
  SolveMethod method = SolveMethod::kSequenceFormLp;
  double tol = 1e-9;
  std::vector<double> state_weights;
};

struct RmaqSection {
  double alpha = 0.1;
  LrKind lr = LrKind::kConstant;
  int episodes = 400;
  int steps_per_episode = 25;
  Exploration exploration = Exploration::kUniform;
  double explore_epsilon = 0.1;
  double stage_tol = 1e-8;
  SolveMethod stage_method = SolveMethod::kSequenceFormLp;
};

// A policy under evaluation. Tabular sources are "robust", "nominal",
// "uniform" or a policy JSON file; continuous sources are checkpoint files.
struct PolicyRef {
  std::string name;
  std::string source;
  // Continuous only: checkpoint supplying b for trained-source attacks
  // (default: the policy's own) and for non-optimal-source attacks.
  std::string adversary;
  std::string nonoptimal;
};

struct EvaluateSection {
  int episodes = 400;
  // Tabular episode length.
  int horizon = 25;
  std::vector<double> attack_probabilities{0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<PolicyRef> policies;
  std::vector<AttackSpec> attacks;
};

enum class Domain { kTabular, kContinuous };

struct ExperimentConfig {
  // Optional; when set it must match the subcommand.
  std::string command;
  Domain domain = Domain::kTabular;
  ModelSection model;
  std::string env = "particle-nav";
  std::vector<std::uint64_t> seeds{1};
  std::string out;
  PlanningSection planning;
  StageSection stage;
  RmaqSection rmaq;
  RmaacConfig rmaac;
  EvaluateSection evaluate;

  void Validate() const;
};

nlohmann::json ConfigToJson(const ExperimentConfig& c);
// Unknown keys and type mismatches raise parse errors naming the key.
ExperimentConfig ConfigFromJson(const nlohmann::json& j);

// Sets a dotted key path ("rmaac.gamma") to a value parsed as JSON, or as a
// string when it does not parse.
void ApplyOverride(const std::string& assignment, nlohmann::json* j);

// Reads the file (empty or blank means all defaults), applies the overrides
// in order and parses the result.
ExperimentConfig LoadConfig(const std::string& path,
                            const std::vector<std::string>& overrides = {});

// Builds the tabular model of the config.
MgSpaModel LoadModel(const ModelSection& section);

PlanningOptions ToPlanningOptions(const PlanningSection& s);
RmaqOptions ToRmaqOptions(const RmaqSection& s);

}  // namespace mgspa

#endif  // MGSPA_CONFIG_H_
