// include/stitchguard/common.hpp

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

#ifndef STITCHGUARD_COMMON_HPP_
#define STITCHGUARD_COMMON_HPP_

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace stitchguard {

// Row-major everywhere: feature rows are frames, tensor buffers are row-major.
template <typename Scalar>
using MatrixX =
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = MatrixX<double>;
using Vector = VectorX<double>;

enum class ErrorKind {
  // audio
  kUnsupportedFormat,
  kCorruptHeader,
  kIoFailure,
  kZeroPowerNoise,
  kZeroPowerSpeech,
  kEmptyRir,
  // features
  kClipTooShort,
  // augment
  kBudgetExceedsCandidates,
  kEmptyManifest,
  kEncoderNotFound,
  kEncoderFailed,
  // nn
  kShapeMismatch,
  kBackwardBeforeForward,
  kInvalidProbability,
  // pooling
  kEmptyInput,
  // model
  kInvalidConfig,
  kStitchedTrainForbidden,
  kVersionMismatch,
  // pipeline
  kEmptyFeatures,
  kCountTooLarge,
  kSingleClassManifest,
  // metrics
  kSingleClassInput,
  kMissingLabel,
  kOutOfRange,
  // config / cli
  kConfigError,
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " +
                           message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline void require(bool ok, ErrorKind kind, const std::string& message) {
  if (!ok) fail(kind, message);
}

}  // namespace stitchguard

#endif  // STITCHGUARD_COMMON_HPP_
