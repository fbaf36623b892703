// include/stitchguard/features/feat_io.hpp

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

#ifndef STITCHGUARD_FEATURES_FEAT_IO_HPP_
#define STITCHGUARD_FEATURES_FEAT_IO_HPP_

#include <filesystem>

#include "stitchguard/common.hpp"

namespace stitchguard {
namespace features {

// Feature container: 16-byte header (magic "STGF", u32 version, u32
// frames, u32 dim) followed by row-major 32-bit little-endian floats.
// One file per utterance, "<utt_id>.feat".
void write_feat(const Matrix& values, const std::filesystem::path& path);
Matrix read_feat(const std::filesystem::path& path);

}  // namespace features
}  // namespace stitchguard

#endif  // STITCHGUARD_FEATURES_FEAT_IO_HPP_
