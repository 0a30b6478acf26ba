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

#ifndef MGSPA_PERTURB_H_
#define MGSPA_PERTURB_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mgspa/common.h"

namespace mgspa {

enum class PerturbKind {
  kTablePermutation,
  kLinearAdditive,
  kGaussianAdditive,
  kUniform,
  kLaplaceAdditive,
  kFixedGaussian,
  kNonoptimalGaussian,
};

enum class BallNorm { kLInf, kL2 };

std::string_view PerturbKindName(PerturbKind kind);
// Throws a configuration error for unknown names.
PerturbKind ParsePerturbKind(std::string_view name);
std::string_view BallNormName(BallNorm norm);
BallNorm ParseBallNorm(std::string_view name);

// Per-state lookup table f(s, b) -> perturbed state for one agent.
using PerturbTable = std::vector<std::vector<int>>;

struct PerturbFn {
  PerturbKind kind = PerturbKind::kTablePermutation;
  // Scale of the stochastic kinds (Gaussian standard deviation, Laplace
  // scale). Unused by table-permutation, linear-additive and uniform.
  double sigma = 1.0;
  // Table-permutation only. One shared table, or one table per agent.
  std::vector<PerturbTable> tables;
  // Optional per-agent radius; empty means every agent uses the model's.
  std::vector<double> agent_epsilon;

  const PerturbTable& TableFor(int agent) const {
    return tables.size() == 1 ? tables[0] : tables[agent];
  }
  bool IsStochastic() const;
  // True when f is differentiable in b with Jacobian identity away from the
  // ball boundary.
  bool IsAdditiveInB() const;
};

// Distance between two continuous states under the given norm.
double BallDistance(std::span<const double> a, std::span<const double> b,
                    BallNorm norm);

// Projects `candidate` onto the ball of radius `epsilon` centred at
// `centre`: per-dimension clamp for l-inf, radial rescale for l2.
void ProjectToBall(std::span<const double> centre, double epsilon,
                   BallNorm norm, std::span<double> candidate);

// Continuous perturbation s~ = f(s, b), always projected into the ball.
// `b` must have the dimension of `s` for the kinds that read it.
std::vector<double> PerturbContinuous(const PerturbFn& fn,
                                      std::span<const double> s,
                                      std::span<const double> b,
                                      double epsilon, BallNorm norm, Rng& rng);

// Unprojected additive noise draw for a kind (the raw s~ - s before any
// projection). Exposed for attack families that skip projection.
std::vector<double> DrawPerturbationOffset(const PerturbFn& fn,
                                           std::span<const double> b,
                                           std::size_t dim, double epsilon,
                                           Rng& rng);

double SampleLaplace(double location, double scale, Rng& rng);

}  // namespace mgspa

#endif  // MGSPA_PERTURB_H_
