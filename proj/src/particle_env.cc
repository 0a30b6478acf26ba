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

#include "mgspa/particle_env.h"

#include <algorithm>
#include <cmath>

namespace mgspa {
namespace {

double Dist(const ParticleEnv::Vec2& a, const ParticleEnv::Vec2& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1]);
}

}  // namespace

ParticleEnv::ParticleEnv(ParticleParams params) : params_(params) {
  Require(params_.dt > 0.0 && params_.horizon > 0, ErrorKind::kConfiguration,
          "particle env needs positive dt and horizon");
  Require(params_.damping >= 0.0 && params_.damping <= 1.0,
          ErrorKind::kConfiguration, "particle damping must lie in [0, 1]");
}

std::string ParticleEnv::name() const {
  return params_.rewarded ? "particle-nav" : "particle-nav-zero";
}

std::vector<std::vector<double>> ParticleEnv::Reset(Rng& rng) {
  std::uniform_real_distribution<double> unif(-params_.spawn_range,
                                              params_.spawn_range);
  for (auto& p : pos_) p = {unif(rng), unif(rng)};
  for (auto& l : landmarks_) l = {unif(rng), unif(rng)};
  for (auto& v : vel_) v = {0.0, 0.0};
  t_ = 0;
  return Observations();
}

void ParticleEnv::SetState(std::array<Vec2, 2> positions,
                           std::array<Vec2, 2> velocities,
                           std::array<Vec2, 2> landmarks) {
  pos_ = positions;
  vel_ = velocities;
  landmarks_ = landmarks;
  t_ = 0;
}

std::vector<std::vector<double>> ParticleEnv::Observations() const {
  std::vector<std::vector<double>> obs(2);
  for (int i = 0; i < 2; ++i) {
    const Vec2& p = pos_[i];
    const Vec2& o = pos_[1 - i];
    obs[i] = {p[0],
              p[1],
              vel_[i][0],
              vel_[i][1],
              landmarks_[0][0] - p[0],
              landmarks_[0][1] - p[1],
              landmarks_[1][0] - p[0],
              landmarks_[1][1] - p[1],
              o[0] - p[0],
              o[1] - p[1]};
  }
  return obs;
}

double ParticleEnv::Reward() const {
  if (!params_.rewarded) return 0.0;
  double r = 0.0;
  for (const Vec2& l : landmarks_) {
    r -= std::min(Dist(pos_[0], l), Dist(pos_[1], l));
  }
  if (Dist(pos_[0], pos_[1]) < params_.collision_radius) {
    r -= params_.collision_penalty;
  }
  return r;
}

EnvStep ParticleEnv::Step(const std::vector<std::vector<double>>& actions) {
  Require(actions.size() == 2, ErrorKind::kShapeMismatch,
          "particle env expects one action per agent");
  for (int i = 0; i < 2; ++i) {
    Require(actions[i].size() == 2, ErrorKind::kShapeMismatch,
            "particle env actions are two-dimensional");
    for (int d = 0; d < 2; ++d) {
      double a = actions[i][d];
      if (a < -1.0 || a > 1.0) {
        ++clamped_;
        a = std::clamp(a, -1.0, 1.0);
      }
      vel_[i][d] = (1.0 - params_.damping) * vel_[i][d] +
                   params_.force_scale * a * params_.dt;
    }
  }
  for (int i = 0; i < 2; ++i) {
    for (int d = 0; d < 2; ++d) pos_[i][d] += vel_[i][d] * params_.dt;
  }
  ++t_;
  EnvStep out;
  out.observations = Observations();
  const double r = Reward();
  out.rewards = {r, r};
  out.done = t_ >= params_.horizon;
  return out;
}

std::unique_ptr<ContinuousEnv> ParticleEnv::Clone() const {
  return std::make_unique<ParticleEnv>(*this);
}

std::unique_ptr<ContinuousEnv> MakeEnv(std::string_view name) {
  if (name == "particle-nav") return std::make_unique<ParticleEnv>();
  if (name == "particle-nav-zero") {
    ParticleParams p;
    p.rewarded = false;
    return std::make_unique<ParticleEnv>(p);
  }
  throw Error(ErrorKind::kConfiguration,
              "unknown environment '" + std::string(name) + "'");
}

std::vector<std::string> EnvNames() {
  return {"particle-nav", "particle-nav-zero"};
}

}  // namespace mgspa
