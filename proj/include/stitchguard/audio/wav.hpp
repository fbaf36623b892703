// include/stitchguard/audio/wav.hpp

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

#ifndef STITCHGUARD_AUDIO_WAV_HPP_
#define STITCHGUARD_AUDIO_WAV_HPP_

#include <filesystem>

#include "stitchguard/audio/clip.hpp"

namespace stitchguard {
namespace audio {

// RIFF/WAVE, 16-bit signed little-endian PCM, mono. Samples map to
// int / 32768. Anything else (stereo, other bit depths, compressed
// formats) is rejected as UnsupportedFormat.
AudioClip read_wav(const std::filesystem::path& path);

// Quantizes with round-to-nearest and saturates at full scale, so a
// read-back differs by at most 1/32768 per sample.
void write_wav(const AudioClip& clip, const std::filesystem::path& path);

}  // namespace audio
}  // namespace stitchguard

#endif  // STITCHGUARD_AUDIO_WAV_HPP_
