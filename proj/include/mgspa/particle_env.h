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

#ifndef MGSPA_PARTICLE_ENV_H_
#define MGSPA_PARTICLE_ENV_H_

#include <array>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "mgspa/common.h"

namespace mgspa {

struct EnvStep {
  std::vector<std::vector<double>> observations;
  std::vector<double> rewards;
  bool done = false;
};

// Continuous-state cooperative environment with per-agent observation and
// action vectors.
class ContinuousEnv {
 public:
  virtual ~ContinuousEnv() = default;
  virtual std::string name() const = 0;
  virtual int num_agents() const = 0;
  virtual int obs_dim() const = 0;
  virtual int act_dim() const = 0;
  virtual int horizon() const = 0;
  virtual std::vector<std::vector<double>> Reset(Rng& rng) = 0;
  // Actions outside [-1, 1] are clamped and counted.
  virtual EnvStep Step(const std::vector<std::vector<double>>& actions) = 0;
  virtual std::unique_ptr<ContinuousEnv> Clone() const = 0;
};

struct ParticleParams {
  double dt = 0.1;
  double damping = 0.25;
  double force_scale = 3.0;
  int horizon = 25;
  double collision_radius = 0.15;
  double collision_penalty = 1.0;
  double spawn_range = 1.0;
  // When false every reward is zero.
  bool rewarded = true;
};

// Two agents and two landmarks on the plane. Observation of agent i:
//   [0, 2)  own position
//   [2, 4)  own velocity
//   [4, 6)  landmark 0 minus own position
//   [6, 8)  landmark 1 minus own position
//   [8, 10) other agent position minus own position
// Dynamics per step: v <- (1 - damping) v + force_scale * a * dt, then
// p <- p + v * dt. Shared reward: -sum over landmarks of the closest agent
// distance, minus the penalty when the agents are closer than the radius.
class ParticleEnv : public ContinuousEnv {
 public:
  using Vec2 = std::array<double, 2>;

  explicit ParticleEnv(ParticleParams params = {});

  std::string name() const override;
  int num_agents() const override { return 2; }
  int obs_dim() const override { return 10; }
  int act_dim() const override { return 2; }
  int horizon() const override { return params_.horizon; }
  std::vector<std::vector<double>> Reset(Rng& rng) override;
  EnvStep Step(const std::vector<std::vector<double>>& actions) override;
  std::unique_ptr<ContinuousEnv> Clone() const override;

  // Places the world in an explicit configuration.
  void SetState(std::array<Vec2, 2> positions, std::array<Vec2, 2> velocities,
                std::array<Vec2, 2> landmarks);
  std::vector<std::vector<double>> Observations() const;
  double Reward() const;

  const std::array<Vec2, 2>& positions() const { return pos_; }
  const std::array<Vec2, 2>& velocities() const { return vel_; }
  const std::array<Vec2, 2>& landmarks() const { return landmarks_; }
  int clamped_actions() const { return clamped_; }
  int t() const { return t_; }

 private:
  ParticleParams params_;
  std::array<Vec2, 2> pos_{};
  std::array<Vec2, 2> vel_{};
  std::array<Vec2, 2> landmarks_{};
  int t_ = 0;
  int clamped_ = 0;
};

// Registry: "particle-nav" and "particle-nav-zero" (all rewards zero).
std::unique_ptr<ContinuousEnv> MakeEnv(std::string_view name);
std::vector<std::string> EnvNames();

}  // namespace mgspa

#endif  // MGSPA_PARTICLE_ENV_H_
