// include/stitchguard/audio/ops.hpp

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

// Sample-domain primitives. All operations are pure; the ones that need
// randomness take an explicit Rng handle.

#ifndef STITCHGUARD_AUDIO_OPS_HPP_
#define STITCHGUARD_AUDIO_OPS_HPP_

#include "stitchguard/audio/clip.hpp"
#include "stitchguard/rng.hpp"

namespace stitchguard {
namespace audio {

// Polyphase windowed-sinc resampler, 64-tap kernel with a Kaiser window
// (beta = 8). Output length is round(n * target / source); resampling at
// the source rate is the exact identity. Each phase is normalized to unit
// DC gain.
AudioClip resample(const AudioClip& clip, int target_rate);

// Multiplies every sample by 10^(gain_db/20) and hard-clips to [-1, 1].
AudioClip apply_gain(const AudioClip& clip, double gain_db);

// Scales noise so that 10*log10(P_speech / P_noise_scaled) equals snr_db,
// with P the mean squared amplitude over the full clip, then mixes and
// hard-clips. Noise shorter than speech is tiled; longer noise is cropped
// at a random offset drawn from rng.
AudioClip mix_at_snr(const AudioClip& speech, const AudioClip& noise,
                     double snr_db, Rng& rng);

// Full linear convolution truncated to the input length, then peak-
// normalized so max |sample| matches the input's.
AudioClip convolve_rir(const AudioClip& clip, const RoomImpulseResponse& rir);

// Kaiser-windowed sinc low-pass FIR, zero-padded "same" convolution.
// half_width taps on each side of center. Shared with the surrogate codec.
Eigen::ArrayXd fir_lowpass(const Eigen::ArrayXd& x, double cutoff_hz,
                           int sample_rate, int half_width = 32,
                           double kaiser_beta = 8.0);

}  // namespace audio
}  // namespace stitchguard

#endif  // STITCHGUARD_AUDIO_OPS_HPP_
