// src/common.cpp

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

#include "stitchguard/common.hpp"

namespace stitchguard {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorKind::kCorruptHeader: return "CorruptHeader";
    case ErrorKind::kIoFailure: return "IoFailure";
    case ErrorKind::kZeroPowerNoise: return "ZeroPowerNoise";
    case ErrorKind::kZeroPowerSpeech: return "ZeroPowerSpeech";
    case ErrorKind::kEmptyRir: return "EmptyRir";
    case ErrorKind::kClipTooShort: return "ClipTooShort";
    case ErrorKind::kBudgetExceedsCandidates: return "BudgetExceedsCandidates";
    case ErrorKind::kEmptyManifest: return "EmptyManifest";
    case ErrorKind::kEncoderNotFound: return "EncoderNotFound";
    case ErrorKind::kEncoderFailed: return "EncoderFailed";
    case ErrorKind::kShapeMismatch: return "ShapeMismatch";
    case ErrorKind::kBackwardBeforeForward: return "BackwardBeforeForward";
    case ErrorKind::kInvalidProbability: return "InvalidProbability";
    case ErrorKind::kEmptyInput: return "EmptyInput";
    case ErrorKind::kInvalidConfig: return "InvalidConfig";
    case ErrorKind::kStitchedTrainForbidden: return "StitchedTrainForbidden";
    case ErrorKind::kVersionMismatch: return "VersionMismatch";
    case ErrorKind::kEmptyFeatures: return "EmptyFeatures";
    case ErrorKind::kCountTooLarge: return "CountTooLarge";
    case ErrorKind::kSingleClassManifest: return "SingleClassManifest";
    case ErrorKind::kSingleClassInput: return "SingleClassInput";
    case ErrorKind::kMissingLabel: return "MissingLabel";
    case ErrorKind::kOutOfRange: return "OutOfRange";
    case ErrorKind::kConfigError: return "ConfigError";
  }
  return "UnknownError";
}

}  // namespace stitchguard
