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

#include "mgspa/mlp.h"

#include <cmath>
#include <limits>

namespace mgspa {

Mlp::Mlp(int input, std::vector<int> hidden, int output, OutputHead head,
         double output_scale)
    : head_(head), scale_(output_scale) {
  Require(input > 0 && output > 0, ErrorKind::kInvalidArgument,
          "network dimensions must be positive");
  sizes_.push_back(input);
  for (int h : hidden) {
    Require(h > 0, ErrorKind::kInvalidArgument, "hidden width must be positive");
    sizes_.push_back(h);
  }
  sizes_.push_back(output);
  int total = 0;
  for (int l = 0; l < num_layers(); ++l) {
    offsets_.push_back(total);
    total += sizes_[l + 1] * sizes_[l] + sizes_[l + 1];
  }
  params_ = Eigen::VectorXd::Zero(total);
}

Eigen::Map<const Eigen::MatrixXd> Mlp::Weight(int l) const {
  return {params_.data() + offsets_[l], sizes_[l + 1], sizes_[l]};
}

Eigen::Map<const Eigen::VectorXd> Mlp::Bias(int l) const {
  return {params_.data() + offsets_[l] + sizes_[l + 1] * sizes_[l],
          sizes_[l + 1]};
}

void Mlp::InitRandom(Rng& rng) {
  for (int l = 0; l < num_layers(); ++l) {
    double bound = 1.0 / std::sqrt(static_cast<double>(sizes_[l]));
    if (l == num_layers() - 1) bound *= 0.1;
    std::uniform_real_distribution<double> unif(-bound, bound);
    const int n = sizes_[l + 1] * sizes_[l] + sizes_[l + 1];
    for (int k = 0; k < n; ++k) params_[offsets_[l] + k] = unif(rng);
  }
}

Eigen::MatrixXd Mlp::Forward(const Eigen::MatrixXd& x) const {
  Require(x.cols() == input_dim(), ErrorKind::kShapeMismatch,
          "network input width mismatch");
  Eigen::MatrixXd h = x;
  for (int l = 0; l < num_layers(); ++l) {
    Eigen::MatrixXd z = h * Weight(l).transpose();
    z.rowwise() += Bias(l).transpose();
    if (l + 1 < num_layers()) {
      h = z.cwiseMax(0.0);
    } else {
      h = std::move(z);
    }
  }
  if (head_ == OutputHead::kTanh) h = scale_ * h.array().tanh();
  return h;
}

Mlp::Grads Mlp::Backward(const Eigen::MatrixXd& x,
                         const Eigen::MatrixXd& upstream) const {
  Require(x.cols() == input_dim(), ErrorKind::kShapeMismatch,
          "network input width mismatch");
  Require(upstream.rows() == x.rows() && upstream.cols() == output_dim(),
          ErrorKind::kShapeMismatch, "upstream gradient shape mismatch");
  // Forward pass keeping every layer input and pre-activation.
  std::vector<Eigen::MatrixXd> inputs{x};
  std::vector<Eigen::MatrixXd> pre;
  for (int l = 0; l < num_layers(); ++l) {
    Eigen::MatrixXd z = inputs.back() * Weight(l).transpose();
    z.rowwise() += Bias(l).transpose();
    pre.push_back(z);
    if (l + 1 < num_layers()) inputs.push_back(z.cwiseMax(0.0));
  }
  Eigen::MatrixXd delta = upstream;
  if (head_ == OutputHead::kTanh) {
    const Eigen::ArrayXXd t = pre.back().array().tanh();
    delta = (delta.array() * scale_ * (1.0 - t * t)).matrix();
  }
  Grads g;
  g.params = Eigen::VectorXd::Zero(num_params());
  for (int l = num_layers() - 1; l >= 0; --l) {
    Eigen::Map<Eigen::MatrixXd> dw(g.params.data() + offsets_[l], sizes_[l + 1],
                                   sizes_[l]);
    Eigen::Map<Eigen::VectorXd> db(
        g.params.data() + offsets_[l] + sizes_[l + 1] * sizes_[l],
        sizes_[l + 1]);
    dw = delta.transpose() * inputs[l];
    db = delta.colwise().sum().transpose();
    Eigen::MatrixXd back = delta * Weight(l);
    if (l > 0) {
      back = (back.array() * (pre[l - 1].array() > 0.0).cast<double>()).matrix();
    }
    delta = std::move(back);
  }
  g.input = std::move(delta);
  return g;
}

double Mlp::MinAbsHiddenPreactivation(const Eigen::MatrixXd& x) const {
  double out = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd h = x;
  for (int l = 0; l + 1 < num_layers(); ++l) {
    Eigen::MatrixXd z = h * Weight(l).transpose();
    z.rowwise() += Bias(l).transpose();
    out = std::min(out, z.cwiseAbs().minCoeff());
    h = z.cwiseMax(0.0);
  }
  return out;
}

nlohmann::json Mlp::ToJson() const {
  nlohmann::json j;
  j["sizes"] = sizes_;
  j["head"] = head_ == OutputHead::kTanh ? "tanh" : "linear";
  j["output_scale"] = scale_;
  j["params"] = std::vector<double>(params_.data(),
                                    params_.data() + params_.size());
  return j;
}

Mlp Mlp::FromJson(const nlohmann::json& j) {
  try {
    const auto sizes = j.at("sizes").get<std::vector<int>>();
    Require(sizes.size() >= 2, ErrorKind::kParse, "network needs two sizes");
    const std::string head = j.at("head").get<std::string>();
    Require(head == "tanh" || head == "linear", ErrorKind::kParse,
            "unknown network head '" + head + "'");
    Mlp net(sizes.front(),
            std::vector<int>(sizes.begin() + 1, sizes.end() - 1), sizes.back(),
            head == "tanh" ? OutputHead::kTanh : OutputHead::kLinear,
            j.at("output_scale").get<double>());
    const auto params = j.at("params").get<std::vector<double>>();
    Require(static_cast<int>(params.size()) == net.num_params(),
            ErrorKind::kParse, "network parameter count mismatch");
    net.params_ = Eigen::Map<const Eigen::VectorXd>(params.data(),
                                                    params.size());
    return net;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("network: ") + e.what());
  }
}

std::string_view OptimizerName(OptimizerKind kind) {
  return kind == OptimizerKind::kAdam ? "adam" : "sgd";
}

OptimizerKind ParseOptimizer(std::string_view name) {
  if (name == "adam") return OptimizerKind::kAdam;
  if (name == "sgd") return OptimizerKind::kSgd;
  throw Error(ErrorKind::kConfiguration,
              "unknown optimizer '" + std::string(name) + "'");
}

Optimizer::Optimizer(OptimizerKind kind, int num_params, double lr)
    : kind_(kind), lr_(lr), m_(Eigen::VectorXd::Zero(num_params)),
      v_(Eigen::VectorXd::Zero(num_params)) {}

void Optimizer::Descend(Eigen::VectorXd& params, const Eigen::VectorXd& grad) {
  Require(grad.size() == params.size() && grad.size() == m_.size(),
          ErrorKind::kShapeMismatch, "optimizer gradient size mismatch");
  if (kind_ == OptimizerKind::kSgd) {
    params -= lr_ * grad;
    return;
  }
  ++step_;
  m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
  v_ = beta2_ * v_ + (1.0 - beta2_) * grad.cwiseProduct(grad);
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(step_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(step_));
  params.array() -=
      lr_ * (m_.array() / c1) / ((v_.array() / c2).sqrt() + eps_);
}

void SoftUpdate(const Mlp& live, double tau, Mlp* target) {
  Require(tau >= 0.0 && tau <= 1.0, ErrorKind::kInvalidArgument,
          "soft update tau must lie in [0, 1]");
  Require(live.num_params() == target->num_params(), ErrorKind::kShapeMismatch,
          "soft update shape mismatch");
  if (tau == 1.0) {
    target->params() = live.params();
    return;
  }
  if (tau == 0.0) return;
  target->params() = tau * live.params() + (1.0 - tau) * target->params();
}

}  // namespace mgspa
