// include/stitchguard/nn/loss.hpp

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

#ifndef STITCHGUARD_NN_LOSS_HPP_
#define STITCHGUARD_NN_LOSS_HPP_

#include <cmath>
#include <utility>
#include <vector>

#include "stitchguard/nn/tensor.hpp"

namespace stitchguard {
namespace nn {

struct FocalLossConfig {
  double alpha = 0.5;  // class-balance weight in (0, 1]
  double gamma = 2.0;  // focusing exponent >= 0
};

// Mean over the batch of -alpha * (1 - p_t)^gamma * log(p_t), where p_t is
// the probability of the true class. The returned gradient is taken with
// respect to the pre-softmax logits (computed jointly with softmax for
// stability). With gamma = 0 and alpha = 1 this reduces to cross-entropy.
template <typename Scalar>
std::pair<Scalar, Tensor<Scalar>> focal_loss(const Tensor<Scalar>& probs,
                                             const std::vector<int>& labels,
                                             const FocalLossConfig& cfg) {
  check_shape(probs.rank() == 2, "focal_loss expects (N, K) probabilities");
  const int n = probs.dim(0), k = probs.dim(1);
  check_shape(static_cast<int>(labels.size()) == n, "labels must match batch");
  require(cfg.alpha > 0 && cfg.alpha <= 1 && cfg.gamma >= 0,
          ErrorKind::kInvalidConfig, "focal loss needs alpha in (0,1], gamma >= 0");

  for (int i = 0; i < n; ++i) {
    Scalar sum = 0;
    for (int j = 0; j < k; ++j) {
      const Scalar p = probs.at(i, j);
      require(std::isfinite(static_cast<double>(p)) && p >= 0,
              ErrorKind::kInvalidProbability, "probabilities must be in [0, 1]");
      sum += p;
    }
    require(std::abs(static_cast<double>(sum) - 1.0) < 1e-6,
            ErrorKind::kInvalidProbability, "each probability row must sum to 1");
    require(labels[static_cast<std::size_t>(i)] >= 0 &&
                labels[static_cast<std::size_t>(i)] < k,
            ErrorKind::kInvalidProbability, "label out of range");
  }

  const Scalar alpha = static_cast<Scalar>(cfg.alpha);
  const Scalar gamma = static_cast<Scalar>(cfg.gamma);
  constexpr Scalar kTiny = static_cast<Scalar>(1e-12);

  Scalar loss = 0;
  Tensor<Scalar> glogits({n, k});
  for (int i = 0; i < n; ++i) {
    const int t = labels[static_cast<std::size_t>(i)];
    const Scalar pt = std::max(probs.at(i, t), kTiny);
    const Scalar u = Scalar(1) - pt;
    const Scalar log_pt = std::log(pt);
    const Scalar b = std::pow(std::max(u, Scalar(0)), gamma);
    loss += -alpha * b * log_pt;
    // d loss_i / d z_j = alpha * (delta_tj - p_j) * (A - B), with
    // A = gamma * p_t * (1-p_t)^(gamma-1) * log(p_t) and B = (1-p_t)^gamma.
    Scalar a = 0;
    if (gamma > 0 && u > kTiny) {
      a = gamma * pt * std::pow(u, gamma - Scalar(1)) * log_pt;
    }
    const Scalar factor = alpha * (a - b) / static_cast<Scalar>(n);
    for (int j = 0; j < k; ++j) {
      const Scalar delta = (j == t) ? Scalar(1) : Scalar(0);
      glogits.at(i, j) = factor * (delta - probs.at(i, j));
    }
  }
  loss /= static_cast<Scalar>(n);
  return {loss, std::move(glogits)};
}

}  // namespace nn
}  // namespace stitchguard

#endif  // STITCHGUARD_NN_LOSS_HPP_
