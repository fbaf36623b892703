// src/pooling/pooling.cpp

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

#include "stitchguard/pooling/pooling.hpp"

namespace stitchguard {
namespace pooling {

const char* pooling_kind_name(PoolingKind kind) {
  switch (kind) {
    case PoolingKind::kSt: return "st";
    case PoolingKind::kAt: return "at";
    case PoolingKind::kLde: return "lde";
    case PoolingKind::kMh: return "mh";
    case PoolingKind::kMrh: return "mrh";
  }
  return "?";
}

PoolingKind pooling_kind_from_name(const std::string& name) {
  if (name == "st") return PoolingKind::kSt;
  if (name == "at") return PoolingKind::kAt;
  if (name == "lde") return PoolingKind::kLde;
  if (name == "mh") return PoolingKind::kMh;
  if (name == "mrh") return PoolingKind::kMrh;
  fail(ErrorKind::kConfigError, "unknown pooling kind '" + name + "'");
}

}  // namespace pooling
}  // namespace stitchguard
