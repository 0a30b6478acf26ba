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

#ifndef MGSPA_HARNESS_H_
#define MGSPA_HARNESS_H_

#include <string>
#include <vector>

#include "json.hpp"
#include "mgspa/config.h"
#include "mgspa/evaluate.h"

namespace mgspa {

// Subcommands: plan, train-rmaq, train-rmaac, evaluate, solve-stage, matrix.
const std::vector<std::string>& CommandNames();

struct RunOutput {
  std::string out_dir;
  // Paths written, relative to out_dir, in creation order.
  std::vector<std::string> files;
  std::vector<std::string> warnings;
  // Rows of evaluate and matrix runs.
  std::vector<MatrixRow> rows;
};

// Runs one subcommand into config.out (default "runs/<command>"). The
// resolved config is written first as config.json.
RunOutput RunExperiment(const std::string& command, ExperimentConfig config);

// Machine-readable records printed by the CLI.
nlohmann::json SuccessRecord(const std::string& command, const RunOutput& r);
nlohmann::json ErrorRecord(const std::string& command, const std::string& kind,
                           const std::string& message);

// Loads a network checkpoint written by train-rmaac, or a bare bundle.
AgentBundle LoadBundle(const std::string& path);

}  // namespace mgspa

#endif  // MGSPA_HARNESS_H_
