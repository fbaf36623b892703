// include/stitchguard/nn/tensor.hpp

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

#ifndef STITCHGUARD_NN_TENSOR_HPP_
#define STITCHGUARD_NN_TENSOR_HPP_

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "stitchguard/common.hpp"

namespace stitchguard {
namespace nn {

enum class Phase { kTrain, kInfer };

// Row-major n-dimensional buffer with an optional gradient buffer of the
// same shape. Scalar is float for training and double for gradient checks.
template <typename Scalar>
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int> shape) : shape_(std::move(shape)) {
    data_.assign(static_cast<std::size_t>(count(shape_)), Scalar(0));
  }

  static std::int64_t count(const std::vector<int>& shape) {
    std::int64_t n = 1;
    for (int d : shape) {
      require(d > 0, ErrorKind::kShapeMismatch, "tensor dims must be positive");
      n *= d;
    }
    return n;
  }

  const std::vector<int>& shape() const { return shape_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  int dim(int i) const { return shape_[static_cast<std::size_t>(i)]; }
  std::int64_t size() const { return static_cast<std::int64_t>(data_.size()); }

  Scalar* data() { return data_.data(); }
  const Scalar* data() const { return data_.data(); }
  Scalar& operator[](std::int64_t i) { return data_[static_cast<std::size_t>(i)]; }
  Scalar operator[](std::int64_t i) const { return data_[static_cast<std::size_t>(i)]; }

  std::vector<Scalar>& buffer() { return data_; }
  const std::vector<Scalar>& buffer() const { return data_; }

  void fill(Scalar v) { std::fill(data_.begin(), data_.end(), v); }

  bool has_grad() const { return grad_.has_value(); }
  void ensure_grad() {
    if (!grad_) grad_.emplace(data_.size(), Scalar(0));
  }
  void zero_grad() {
    if (grad_) std::fill(grad_->begin(), grad_->end(), Scalar(0));
  }
  std::vector<Scalar>& grad() {
    require(grad_.has_value(), ErrorKind::kBackwardBeforeForward,
            "gradient buffer not allocated");
    return *grad_;
  }
  const std::vector<Scalar>& grad() const {
    require(grad_.has_value(), ErrorKind::kBackwardBeforeForward,
            "gradient buffer not allocated");
    return *grad_;
  }

  // 4-d (n, c, h, w) and 2-d (r, c) accessors; shapes are trusted here,
  // layer entry points validate them.
  Scalar& at(int n, int c, int h, int w) {
    return data_[static_cast<std::size_t>(
        ((static_cast<std::int64_t>(n) * shape_[1] + c) * shape_[2] + h) * shape_[3] + w)];
  }
  Scalar at(int n, int c, int h, int w) const {
    return data_[static_cast<std::size_t>(
        ((static_cast<std::int64_t>(n) * shape_[1] + c) * shape_[2] + h) * shape_[3] + w)];
  }
  Scalar& at(int r, int c) {
    return data_[static_cast<std::size_t>(static_cast<std::int64_t>(r) * shape_[1] + c)];
  }
  Scalar at(int r, int c) const {
    return data_[static_cast<std::size_t>(static_cast<std::int64_t>(r) * shape_[1] + c)];
  }

 private:
  std::vector<int> shape_;
  std::vector<Scalar> data_;
  std::optional<std::vector<Scalar>> grad_;
};

template <typename Scalar>
using MatMap = Eigen::Map<MatrixX<Scalar>>;
template <typename Scalar>
using ConstMatMap = Eigen::Map<const MatrixX<Scalar>>;

// Named trainable parameter; the gradient buffer is always allocated.
template <typename Scalar>
struct Param {
  std::string name;
  Tensor<Scalar> value;

  Param() = default;
  Param(std::string n, std::vector<int> shape) : name(std::move(n)), value(std::move(shape)) {
    value.ensure_grad();
  }
};

inline void check_shape(bool ok, const std::string& what) {
  require(ok, ErrorKind::kShapeMismatch, what);
}

}  // namespace nn
}  // namespace stitchguard

#endif  // STITCHGUARD_NN_TENSOR_HPP_
