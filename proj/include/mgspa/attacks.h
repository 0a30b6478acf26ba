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

#ifndef MGSPA_ATTACKS_H_
#define MGSPA_ATTACKS_H_

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "mgspa/common.h"
#include "mgspa/perturb.h"
#include "mgspa/rmaac.h"

namespace mgspa {

// Observation attack families for the continuous environments. With b the
// adversary output for the agent's true observation s:
//   f1  s + b                       projected
//   f2  s + Gaussian(b, sigma)      projected
//   f3  s + Gaussian(b, 1), b from the non-optimal adversary snapshot
//                                   projected
//   f4  s + Uniform(-eps, eps)      inside the ball by construction
//   f5  s + Gaussian(0, sigma)      not projected
//   f6  s + Laplace(b, sigma)       projected
enum class AttackFamily { kF1, kF2, kF3, kF4, kF5, kF6 };

enum class AdversarySource { kTrained, kNonoptimal, kNone };

std::string_view AttackFamilyName(AttackFamily f);
AttackFamily ParseAttackFamily(std::string_view name);
std::string_view AdversarySourceName(AdversarySource s);
AdversarySource ParseAdversarySource(std::string_view name);

// Default source of b for a family.
AdversarySource DefaultSource(AttackFamily f);
bool FamilyReadsAdversary(AttackFamily f);
bool FamilyIsProjected(AttackFamily f);

struct AttackSpec {
  AttackFamily family = AttackFamily::kF1;
  double epsilon = 0.5;
  double sigma = 1.0;
  AdversarySource source = AdversarySource::kTrained;
  BallNorm norm = BallNorm::kLInf;

  // Builds a spec with the family's default source and sigma.
  static AttackSpec For(AttackFamily family, double epsilon = 0.5);
  void Validate() const;
  // Stable label used as the attack column of result tables.
  std::string Label() const;
  // Perturbation kind that draws the offset for this family.
  PerturbFn Perturbation() const;
};

nlohmann::json AttackSpecToJson(const AttackSpec& spec);
// Missing keys take the family defaults; unknown keys are rejected.
AttackSpec AttackSpecFromJson(const nlohmann::json& j);

// Perturbed observation of every agent. `adversary` supplies b for the
// policy-driven families and may be null otherwise.
std::vector<std::vector<double>> ApplyAttack(
    const AttackSpec& spec, const std::vector<std::vector<double>>& obs,
    const AgentBundle* adversary, Rng& rng);

}  // namespace mgspa

#endif  // MGSPA_ATTACKS_H_
