// include/stitchguard/audio/manifest.hpp

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

#ifndef STITCHGUARD_AUDIO_MANIFEST_HPP_
#define STITCHGUARD_AUDIO_MANIFEST_HPP_

#include <filesystem>
#include <vector>

namespace stitchguard {
namespace audio {

// Plain-text path manifest: one path per line, '#' comments and blank
// lines allowed. Relative paths resolve against the manifest's directory.
std::vector<std::filesystem::path> read_path_manifest(
    const std::filesystem::path& manifest);

}  // namespace audio
}  // namespace stitchguard

#endif  // STITCHGUARD_AUDIO_MANIFEST_HPP_
