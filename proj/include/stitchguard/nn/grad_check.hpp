// include/stitchguard/nn/grad_check.hpp

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

// Central finite-difference gradient verification, 64-bit only: numeric
// differences are unusable at 32-bit precision.

#ifndef STITCHGUARD_NN_GRAD_CHECK_HPP_
#define STITCHGUARD_NN_GRAD_CHECK_HPP_

#include <cmath>
#include <cstdint>
#include <vector>

#include "stitchguard/nn/tensor.hpp"

namespace stitchguard {
namespace nn {

// One buffer to perturb: values and the analytic gradient computed for
// them, element for element.
struct GradCheckItem {
  double* values = nullptr;
  const double* grads = nullptr;
  std::int64_t count = 0;
};

// Worst relative error of (f(x+e) - f(x-e)) / 2e against the analytic
// gradient over every element of every item. The denominator is floored
// so dead units with ~zero gradient do not divide by noise.
template <typename LossFn>
double grad_check_max_rel_error(LossFn&& loss, std::vector<GradCheckItem> items,
                                double epsilon, double denom_floor = 1e-2) {
  double worst = 0.0;
  for (auto& item : items) {
    for (std::int64_t i = 0; i < item.count; ++i) {
      const double saved = item.values[i];
      item.values[i] = saved + epsilon;
      const double up = loss();
      item.values[i] = saved - epsilon;
      const double down = loss();
      item.values[i] = saved;
      const double numeric = (up - down) / (2.0 * epsilon);
      const double analytic = item.grads[i];
      const double denom =
          std::max(denom_floor, std::max(std::abs(numeric), std::abs(analytic)));
      worst = std::max(worst, std::abs(numeric - analytic) / denom);
    }
  }
  return worst;
}

inline std::vector<GradCheckItem> grad_items_from_params(
    const std::vector<Param<double>*>& params) {
  std::vector<GradCheckItem> items;
  items.reserve(params.size());
  for (auto* p : params) {
    items.push_back({p->value.data(), p->value.grad().data(), p->value.size()});
  }
  return items;
}

}  // namespace nn
}  // namespace stitchguard

#endif  // STITCHGUARD_NN_GRAD_CHECK_HPP_
