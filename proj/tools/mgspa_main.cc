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

// Command-line front end. Prints one JSON record on stdout on success, or
// one on stderr with a nonzero exit code on failure.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mgspa/config.h"
#include "mgspa/harness.h"

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::vector<std::string> set;
  std::optional<double> gamma;
};

int Run(const std::string& command, const Flags& f) {
  try {
    std::vector<std::string> overrides = f.set;
    if (f.seed) overrides.push_back("seeds=[" + std::to_string(*f.seed) + "]");
    if (!f.out.empty()) overrides.push_back("out=\"" + f.out + "\"");
    if (f.gamma) {
      // The discount belongs to the learner of the continuous domain and to
      // the model otherwise.
      const mgspa::ExperimentConfig probe =
          mgspa::LoadConfig(f.config, overrides);
      const bool continuous =
          command == "train-rmaac" ||
          (command != "plan" && command != "train-rmaq" &&
           command != "solve-stage" &&
           probe.domain == mgspa::Domain::kContinuous);
      overrides.push_back(std::string(continuous ? "rmaac" : "model") +
                          ".gamma=" + mgspa::FormatDouble(*f.gamma));
    }
    const mgspa::RunOutput r =
        mgspa::RunExperiment(command, mgspa::LoadConfig(f.config, overrides));
    std::cout << mgspa::SuccessRecord(command, r).dump() << "\n";
    return 0;
  } catch (const mgspa::Error& e) {
    std::cerr << mgspa::ErrorRecord(command,
                                    std::string(mgspa::ErrorKindName(e.kind())),
                                    e.what())
                     .dump()
              << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << mgspa::ErrorRecord(command, "internal", e.what()).dump()
              << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Markov games with state perturbation adversaries"};
  app.require_subcommand(1);
  Flags flags;
  std::string chosen;
  for (const std::string& name : mgspa::CommandNames()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", flags.config, "JSON config file");
    sub->add_option("--seed", flags.seed, "Single seed replacing the list");
    sub->add_option("--out", flags.out, "Run directory");
    sub->add_option("--set", flags.set, "Override as dotted.key=value")
        ->take_all();
    sub->add_option("--gamma", flags.gamma, "Discount override");
    sub->callback([&chosen, name] { chosen = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << mgspa::ErrorRecord(chosen, "usage", e.what()).dump() << "\n";
    return 2;
  }
  return Run(chosen, flags);
}
