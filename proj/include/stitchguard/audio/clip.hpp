// include/stitchguard/audio/clip.hpp

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

#ifndef STITCHGUARD_AUDIO_CLIP_HPP_
#define STITCHGUARD_AUDIO_CLIP_HPP_

#include <Eigen/Dense>

namespace stitchguard {
namespace audio {

// Mono PCM samples, linear amplitude in [-1, 1].
struct AudioClip {
  Eigen::ArrayXd samples;
  int sample_rate = 0;

  Eigen::Index num_samples() const { return samples.size(); }
  double duration_s() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate
                           : 0.0;
  }
};

struct RoomImpulseResponse {
  Eigen::ArrayXd taps;
  int sample_rate = 0;
};

}  // namespace audio
}  // namespace stitchguard

#endif  // STITCHGUARD_AUDIO_CLIP_HPP_
