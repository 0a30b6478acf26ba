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

#include "mgspa/perturb.h"

#include <algorithm>
#include <cmath>

namespace mgspa {

std::string_view PerturbKindName(PerturbKind kind) {
  switch (kind) {
    case PerturbKind::kTablePermutation: return "table-permutation";
    case PerturbKind::kLinearAdditive: return "linear-additive";
    case PerturbKind::kGaussianAdditive: return "gaussian-additive";
    case PerturbKind::kUniform: return "uniform";
    case PerturbKind::kLaplaceAdditive: return "laplace-additive";
    case PerturbKind::kFixedGaussian: return "fixed-gaussian";
    case PerturbKind::kNonoptimalGaussian: return "nonoptimal-gaussian";
  }
  return "unknown";
}

PerturbKind ParsePerturbKind(std::string_view name) {
  for (PerturbKind k :
       {PerturbKind::kTablePermutation, PerturbKind::kLinearAdditive,
        PerturbKind::kGaussianAdditive, PerturbKind::kUniform,
        PerturbKind::kLaplaceAdditive, PerturbKind::kFixedGaussian,
        PerturbKind::kNonoptimalGaussian}) {
    if (PerturbKindName(k) == name) return k;
  }
  throw Error(ErrorKind::kConfiguration,
              "unknown perturbation kind '" + std::string(name) + "'");
}

std::string_view BallNormName(BallNorm norm) {
  return norm == BallNorm::kLInf ? "linf" : "l2";
}

BallNorm ParseBallNorm(std::string_view name) {
  if (name == "linf") return BallNorm::kLInf;
  if (name == "l2") return BallNorm::kL2;
  throw Error(ErrorKind::kConfiguration,
              "unknown ball norm '" + std::string(name) + "'");
}

bool PerturbFn::IsStochastic() const {
  switch (kind) {
    case PerturbKind::kTablePermutation:
    case PerturbKind::kLinearAdditive:
      return false;
    default:
      return true;
  }
}

bool PerturbFn::IsAdditiveInB() const {
  switch (kind) {
    case PerturbKind::kLinearAdditive:
    case PerturbKind::kGaussianAdditive:
    case PerturbKind::kLaplaceAdditive:
    case PerturbKind::kNonoptimalGaussian:
      return true;
    default:
      return false;
  }
}

double BallDistance(std::span<const double> a, std::span<const double> b,
                    BallNorm norm) {
  Require(a.size() == b.size(), ErrorKind::kShapeMismatch,
          "ball distance dimension mismatch");
  double acc = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    const double diff = std::abs(a[d] - b[d]);
    if (norm == BallNorm::kLInf) {
      acc = std::max(acc, diff);
    } else {
      acc += diff * diff;
    }
  }
  return norm == BallNorm::kLInf ? acc : std::sqrt(acc);
}

void ProjectToBall(std::span<const double> centre, double epsilon,
                   BallNorm norm, std::span<double> candidate) {
  Require(centre.size() == candidate.size(), ErrorKind::kShapeMismatch,
          "projection dimension mismatch");
  if (norm == BallNorm::kLInf) {
    for (std::size_t d = 0; d < centre.size(); ++d) {
      candidate[d] = std::clamp(candidate[d], centre[d] - epsilon,
                                centre[d] + epsilon);
    }
    return;
  }
  const double dist = BallDistance(centre, candidate, BallNorm::kL2);
  if (dist <= epsilon) return;
  const double scale = epsilon / dist;
  for (std::size_t d = 0; d < centre.size(); ++d) {
    candidate[d] = centre[d] + (candidate[d] - centre[d]) * scale;
  }
}

double SampleLaplace(double location, double scale, Rng& rng) {
  // Inverse CDF on u in (-1/2, 1/2).
  std::uniform_real_distribution<double> unif(-0.5, 0.5);
  double u = unif(rng);
  while (std::abs(u) >= 0.5) u = unif(rng);
  const double sign = u < 0 ? -1.0 : 1.0;
  return location - scale * sign * std::log1p(-2.0 * std::abs(u));
}

std::vector<double> DrawPerturbationOffset(const PerturbFn& fn,
                                           std::span<const double> b,
                                           std::size_t dim, double epsilon,
                                           Rng& rng) {
  const bool reads_b = fn.kind == PerturbKind::kLinearAdditive ||
                       fn.kind == PerturbKind::kGaussianAdditive ||
                       fn.kind == PerturbKind::kLaplaceAdditive ||
                       fn.kind == PerturbKind::kNonoptimalGaussian;
  if (reads_b) {
    Require(b.size() == dim, ErrorKind::kShapeMismatch,
            "perturbation action dimension must match the state");
  }
  std::vector<double> offset(dim, 0.0);
  switch (fn.kind) {
    case PerturbKind::kTablePermutation:
      throw Error(ErrorKind::kConfiguration,
                  "table-permutation perturbation needs a discrete state");
    case PerturbKind::kLinearAdditive:
      for (std::size_t d = 0; d < dim; ++d) offset[d] = b[d];
      break;
    case PerturbKind::kGaussianAdditive:
    case PerturbKind::kNonoptimalGaussian: {
      std::normal_distribution<double> normal(0.0, fn.sigma);
      for (std::size_t d = 0; d < dim; ++d) offset[d] = b[d] + normal(rng);
      break;
    }
    case PerturbKind::kUniform: {
      std::uniform_real_distribution<double> unif(-epsilon, epsilon);
      for (std::size_t d = 0; d < dim; ++d) {
        offset[d] = epsilon > 0.0 ? unif(rng) : 0.0;
      }
      break;
    }
    case PerturbKind::kLaplaceAdditive:
      for (std::size_t d = 0; d < dim; ++d) {
        offset[d] = SampleLaplace(b[d], fn.sigma, rng);
      }
      break;
    case PerturbKind::kFixedGaussian: {
      std::normal_distribution<double> normal(0.0, fn.sigma);
      for (std::size_t d = 0; d < dim; ++d) offset[d] = normal(rng);
      break;
    }
  }
  return offset;
}

std::vector<double> PerturbContinuous(const PerturbFn& fn,
                                      std::span<const double> s,
                                      std::span<const double> b,
                                      double epsilon, BallNorm norm,
                                      Rng& rng) {
  Require(epsilon >= 0.0, ErrorKind::kInvalidArgument,
          "perturbation radius must be non-negative");
  std::vector<double> out = DrawPerturbationOffset(fn, b, s.size(), epsilon, rng);
  for (std::size_t d = 0; d < s.size(); ++d) out[d] += s[d];
  ProjectToBall(s, epsilon, norm, out);
  return out;
}

}  // namespace mgspa
