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

#ifndef MGSPA_MLP_H_
#define MGSPA_MLP_H_

#include <Eigen/Dense>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "mgspa/common.h"

namespace mgspa {

enum class OutputHead { kLinear, kTanh };

// Feedforward network with rectifier hidden layers. Rows of the input matrix
// are batch elements. Parameters live in one flat vector; layer l stores its
// weight matrix (out_l x in_l, column-major) followed by its bias.
class Mlp {
 public:
  Mlp() = default;
  Mlp(int input, std::vector<int> hidden, int output, OutputHead head,
      double output_scale = 1.0);

  struct Grads {
    Eigen::VectorXd params;
    Eigen::MatrixXd input;
  };

  // Uniform fan-in initialization; the last layer is shrunk so heads start
  // near zero.
  void InitRandom(Rng& rng);

  Eigen::MatrixXd Forward(const Eigen::MatrixXd& x) const;
  // Gradients of sum(upstream .* Forward(x)) with respect to parameters and
  // input.
  Grads Backward(const Eigen::MatrixXd& x,
                 const Eigen::MatrixXd& upstream) const;
  // Smallest |pre-activation| over hidden units, used to keep finite
  // difference checks away from rectifier kinks.
  double MinAbsHiddenPreactivation(const Eigen::MatrixXd& x) const;

  int input_dim() const { return sizes_.front(); }
  int output_dim() const { return sizes_.back(); }
  int num_params() const { return static_cast<int>(params_.size()); }
  const std::vector<int>& sizes() const { return sizes_; }
  OutputHead head() const { return head_; }
  double output_scale() const { return scale_; }
  Eigen::VectorXd& params() { return params_; }
  const Eigen::VectorXd& params() const { return params_; }

  nlohmann::json ToJson() const;
  static Mlp FromJson(const nlohmann::json& j);

 private:
  int num_layers() const { return static_cast<int>(sizes_.size()) - 1; }
  Eigen::Map<const Eigen::MatrixXd> Weight(int l) const;
  Eigen::Map<const Eigen::VectorXd> Bias(int l) const;

  std::vector<int> sizes_;
  std::vector<int> offsets_;
  OutputHead head_ = OutputHead::kLinear;
  double scale_ = 1.0;
  Eigen::VectorXd params_;
};

enum class OptimizerKind { kAdam, kSgd };

std::string_view OptimizerName(OptimizerKind kind);
OptimizerKind ParseOptimizer(std::string_view name);

// First-order optimizer that always descends: callers flip the gradient sign
// for ascent.
class Optimizer {
 public:
  Optimizer() = default;
  Optimizer(OptimizerKind kind, int num_params, double lr);
  void Descend(Eigen::VectorXd& params, const Eigen::VectorXd& grad);
  double lr() const { return lr_; }

 private:
  OptimizerKind kind_ = OptimizerKind::kAdam;
  double lr_ = 0.0;
  double beta1_ = 0.9;
  double beta2_ = 0.999;
  double eps_ = 1e-8;
  long step_ = 0;
  Eigen::VectorXd m_;
  Eigen::VectorXd v_;
};

// target <- tau * live + (1 - tau) * target.
void SoftUpdate(const Mlp& live, double tau, Mlp* target);

}  // namespace mgspa

#endif  // MGSPA_MLP_H_
