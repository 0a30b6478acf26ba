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

#include "mgspa/attacks.h"

#include <cmath>
#include <cstdio>

#include "mgspa/serialize.h"

namespace mgspa {

namespace {

constexpr AttackFamily kFamilies[] = {AttackFamily::kF1, AttackFamily::kF2,
                                      AttackFamily::kF3, AttackFamily::kF4,
                                      AttackFamily::kF5, AttackFamily::kF6};

}  // namespace

std::string_view AttackFamilyName(AttackFamily f) {
  switch (f) {
    case AttackFamily::kF1: return "f1";
    case AttackFamily::kF2: return "f2";
    case AttackFamily::kF3: return "f3";
    case AttackFamily::kF4: return "f4";
    case AttackFamily::kF5: return "f5";
    case AttackFamily::kF6: return "f6";
  }
  return "unknown";
}

AttackFamily ParseAttackFamily(std::string_view name) {
  for (AttackFamily f : kFamilies) {
    if (AttackFamilyName(f) == name) return f;
  }
  throw Error(ErrorKind::kConfiguration,
              "unknown attack family '" + std::string(name) + "'");
}

std::string_view AdversarySourceName(AdversarySource s) {
  switch (s) {
    case AdversarySource::kTrained: return "trained";
    case AdversarySource::kNonoptimal: return "nonoptimal-checkpoint";
    case AdversarySource::kNone: return "none";
  }
  return "unknown";
}

AdversarySource ParseAdversarySource(std::string_view name) {
  for (AdversarySource s : {AdversarySource::kTrained,
                            AdversarySource::kNonoptimal,
                            AdversarySource::kNone}) {
    if (AdversarySourceName(s) == name) return s;
  }
  throw Error(ErrorKind::kConfiguration,
              "unknown adversary source '" + std::string(name) + "'");
}

bool FamilyReadsAdversary(AttackFamily f) {
  return f != AttackFamily::kF4 && f != AttackFamily::kF5;
}

bool FamilyIsProjected(AttackFamily f) { return f != AttackFamily::kF5; }

AdversarySource DefaultSource(AttackFamily f) {
  if (f == AttackFamily::kF3) return AdversarySource::kNonoptimal;
  return FamilyReadsAdversary(f) ? AdversarySource::kTrained
                                 : AdversarySource::kNone;
}

AttackSpec AttackSpec::For(AttackFamily family, double epsilon) {
  AttackSpec s;
  s.family = family;
  s.epsilon = epsilon;
  s.source = DefaultSource(family);
  return s;
}

void AttackSpec::Validate() const {
  const std::string name(AttackFamilyName(family));
  Require(std::isfinite(epsilon) && epsilon >= 0.0, ErrorKind::kConfiguration,
          "attack " + name + ": epsilon must be non-negative");
  Require(std::isfinite(sigma) && sigma > 0.0, ErrorKind::kConfiguration,
          "attack " + name + ": sigma must be positive");
  if (FamilyReadsAdversary(family)) {
    Require(source != AdversarySource::kNone, ErrorKind::kConfiguration,
            "attack " + name + " needs an adversary source");
  } else {
    Require(source == AdversarySource::kNone, ErrorKind::kConfiguration,
            "attack " + name + " does not read an adversary");
  }
}

std::string AttackSpec::Label() const {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%s:eps=%g:sigma=%g:%s",
                std::string(AttackFamilyName(family)).c_str(), epsilon, sigma,
                std::string(AdversarySourceName(source)).c_str());
  return buf;
}

PerturbFn AttackSpec::Perturbation() const {
  PerturbFn fn;
  fn.sigma = sigma;
  switch (family) {
    case AttackFamily::kF1: fn.kind = PerturbKind::kLinearAdditive; break;
    case AttackFamily::kF2: fn.kind = PerturbKind::kGaussianAdditive; break;
    case AttackFamily::kF3: fn.kind = PerturbKind::kNonoptimalGaussian; break;
    case AttackFamily::kF4: fn.kind = PerturbKind::kUniform; break;
    case AttackFamily::kF5: fn.kind = PerturbKind::kFixedGaussian; break;
    case AttackFamily::kF6: fn.kind = PerturbKind::kLaplaceAdditive; break;
  }
  return fn;
}

nlohmann::json AttackSpecToJson(const AttackSpec& spec) {
  return {{"family", AttackFamilyName(spec.family)},
          {"epsilon", spec.epsilon},
          {"sigma", spec.sigma},
          {"source", AdversarySourceName(spec.source)},
          {"norm", BallNormName(spec.norm)}};
}

AttackSpec AttackSpecFromJson(const nlohmann::json& j) {
  const std::string where = "attack";
  Require(j.is_object(), ErrorKind::kParse, "attack must be an object");
  CheckKeys(j, {"family", "epsilon", "sigma", "source", "norm"}, where);
  AttackSpec s = AttackSpec::For(
      ParseAttackFamily(GetKey<std::string>(j, "family", where)));
  MaybeGetKey(j, "epsilon", where, &s.epsilon);
  MaybeGetKey(j, "sigma", where, &s.sigma);
  if (j.contains("source")) {
    s.source = ParseAdversarySource(GetKey<std::string>(j, "source", where));
  }
  if (j.contains("norm")) {
    s.norm = ParseBallNorm(GetKey<std::string>(j, "norm", where));
  }
  s.Validate();
  return s;
}

std::vector<std::vector<double>> ApplyAttack(
    const AttackSpec& spec, const std::vector<std::vector<double>>& obs,
    const AgentBundle* adversary, Rng& rng) {
  spec.Validate();
  const bool reads = FamilyReadsAdversary(spec.family);
  if (reads) {
    Require(adversary != nullptr, ErrorKind::kConfiguration,
            "attack " + std::string(AttackFamilyName(spec.family)) +
                " needs an adversary policy");
    Require(adversary->num_agents == static_cast<int>(obs.size()),
            ErrorKind::kShapeMismatch, "adversary agent count mismatch");
  }
  const PerturbFn fn = spec.Perturbation();
  std::vector<std::vector<double>> out;
  out.reserve(obs.size());
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const std::vector<double> b =
        reads ? AdversaryAction(*adversary, static_cast<int>(i), obs[i])
              : std::vector<double>();
    if (FamilyIsProjected(spec.family)) {
      out.push_back(
          PerturbContinuous(fn, obs[i], b, spec.epsilon, spec.norm, rng));
    } else {
      std::vector<double> s =
          DrawPerturbationOffset(fn, b, obs[i].size(), spec.epsilon, rng);
      for (std::size_t d = 0; d < s.size(); ++d) s[d] += obs[i][d];
      out.push_back(std::move(s));
    }
  }
  return out;
}

}  // namespace mgspa
