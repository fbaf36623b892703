// include/stitchguard/nn/optim.hpp

// Copyright 2026  StitchGuard Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef STITCHGUARD_NN_OPTIM_HPP_
#define STITCHGUARD_NN_OPTIM_HPP_

#include <cmath>
#include <string>
#include <vector>

#include "stitchguard/nn/tensor.hpp"

namespace stitchguard {
namespace nn {

enum class OptimizerKind { kSgdMomentum, kAdam };

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::kAdam;
  double learning_rate = 1e-3;
  double momentum = 0.9;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 1e-4;  // classic L2, folded into the gradient
};

template <typename Scalar>
class Optimizer {
 public:
  Optimizer(const OptimizerConfig& cfg, std::vector<Param<Scalar>*> params)
      : cfg_(cfg), params_(std::move(params)) {
    require(cfg_.learning_rate > 0, ErrorKind::kInvalidConfig,
            "learning rate must be positive");
    require(cfg_.weight_decay >= 0, ErrorKind::kInvalidConfig,
            "weight decay must be nonnegative");
    m_.resize(params_.size());
    v_.resize(params_.size());
    for (std::size_t i = 0; i < params_.size(); ++i) {
      m_[i].assign(static_cast<std::size_t>(params_[i]->value.size()), Scalar(0));
      v_[i].assign(static_cast<std::size_t>(params_[i]->value.size()), Scalar(0));
    }
  }

  void zero_grad() {
    for (auto* p : params_) p->value.zero_grad();
  }

  void step() {
    ++t_;
    const Scalar lr = static_cast<Scalar>(cfg_.learning_rate);
    const Scalar wd = static_cast<Scalar>(cfg_.weight_decay);
    if (cfg_.kind == OptimizerKind::kSgdMomentum) {
      const Scalar mu = static_cast<Scalar>(cfg_.momentum);
      for (std::size_t i = 0; i < params_.size(); ++i) {
        auto& value = params_[i]->value;
        const auto& grad = value.grad();
        for (std::int64_t j = 0; j < value.size(); ++j) {
          const Scalar g = grad[static_cast<std::size_t>(j)] + wd * value[j];
          m_[i][static_cast<std::size_t>(j)] = mu * m_[i][static_cast<std::size_t>(j)] + g;
          value[j] -= lr * m_[i][static_cast<std::size_t>(j)];
        }
      }
    } else {
      const Scalar b1 = static_cast<Scalar>(cfg_.beta1);
      const Scalar b2 = static_cast<Scalar>(cfg_.beta2);
      const Scalar eps = static_cast<Scalar>(cfg_.eps);
      const Scalar bc1 = Scalar(1) - std::pow(b1, static_cast<Scalar>(t_));
      const Scalar bc2 = Scalar(1) - std::pow(b2, static_cast<Scalar>(t_));
      for (std::size_t i = 0; i < params_.size(); ++i) {
        auto& value = params_[i]->value;
        const auto& grad = value.grad();
        for (std::int64_t j = 0; j < value.size(); ++j) {
          const auto sj = static_cast<std::size_t>(j);
          const Scalar g = grad[sj] + wd * value[j];
          m_[i][sj] = b1 * m_[i][sj] + (Scalar(1) - b1) * g;
          v_[i][sj] = b2 * v_[i][sj] + (Scalar(1) - b2) * g * g;
          const Scalar mhat = m_[i][sj] / bc1;
          const Scalar vhat = v_[i][sj] / bc2;
          value[j] -= lr * mhat / (std::sqrt(vhat) + eps);
        }
      }
    }
  }

  void set_learning_rate(double lr) {
    require(lr > 0, ErrorKind::kInvalidConfig, "learning rate must be positive");
    cfg_.learning_rate = lr;
  }
  double learning_rate() const { return cfg_.learning_rate; }

 private:
  OptimizerConfig cfg_;
  std::vector<Param<Scalar>*> params_;
  std::vector<std::vector<Scalar>> m_, v_;
  long t_ = 0;
};

}  // namespace nn
}  // namespace stitchguard

#endif  // STITCHGUARD_NN_OPTIM_HPP_
