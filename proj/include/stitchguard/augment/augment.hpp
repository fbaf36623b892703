// include/stitchguard/augment/augment.hpp

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

// Two-part augmentation engine: sample-domain disturbances (noise, music,
// babble noise at random SNR, reverberation, volume gain) and compression
// simulation (external codec round-trips, 8 kHz telephony resampling, and
// a deterministic surrogate codec), plus feature-domain SpecAugment.
//
// Each augmented utterance receives exactly one disturbance. Plans are
// deterministic given (seed, utt_id): every per-utterance draw is keyed on
// a hash of the two, so reordering the clean manifest cannot change what
// any utterance receives.

#ifndef STITCHGUARD_AUGMENT_AUGMENT_HPP_
#define STITCHGUARD_AUGMENT_AUGMENT_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "stitchguard/audio/clip.hpp"
#include "stitchguard/features/feature.hpp"
#include "stitchguard/rng.hpp"

namespace stitchguard {
namespace augment {

enum class DistortionKind { kNoise, kMusic, kBabble, kReverb, kVolume };
enum class CodecKind { kMp3, kOgg, kAac, kOpus, kTelephony, kSurrogate };

const char* distortion_kind_name(DistortionKind kind);
const char* codec_kind_name(CodecKind kind);

struct DistortionSpec {
  DistortionKind kind = DistortionKind::kVolume;
  double snr_db_lo = 0.0, snr_db_hi = 20.0;     // noise/music/babble
  double gain_db_lo = -10.0, gain_db_hi = 20.0;  // volume
  std::filesystem::path noise_manifest;          // noise/music/babble
  std::filesystem::path rir_manifest;            // reverb

  void validate() const;
};

struct CompressionSpec {
  CodecKind codec = CodecKind::kSurrogate;
  // Command template producing a decoded WAV from an input WAV; resolved
  // with shell-free substitution of {in}, {out}, {bitrate} and {codec}.
  // Required for mp3/ogg/aac/opus, unused for telephony and surrogate.
  std::string encoder_command;
  std::vector<int> bitrate_choices = {32, 64, 128};

  void validate() const;
};

// One concrete, fully sampled disturbance.
struct Disturbance {
  std::string type;  // noise|music|babble|reverb|volume|mp3|ogg|aac|opus|telephony|surrogate
  double snr_db = 0.0;
  double gain_db = 0.0;
  std::string path;  // noise or RIR file
  int bitrate = 0;
  std::uint64_t seed = 0;  // apply-time randomness (noise crop offset)

  std::string to_json() const;
  static Disturbance from_json(const std::string& text);
};

struct PlanEntry {
  std::string out_id;
  std::string src_id;
  Disturbance disturbance;
};

struct AugmentPlan {
  std::vector<PlanEntry> entries;
  std::uint64_t seed = 0;
};

// Generates expansion_factor candidates per clean utterance for each part,
// then keeps distortion_budget / compression_budget of them by hashed
// priority (uniform without replacement, order-independent).
AugmentPlan build_plan(const std::vector<std::string>& clean_utt_ids,
                       const std::vector<DistortionSpec>& distortion_specs,
                       const std::vector<CompressionSpec>& compression_specs,
                       int expansion_factor, std::int64_t distortion_budget,
                       std::int64_t compression_budget, std::uint64_t seed);

// Plan file: `out_id<TAB>src_id<TAB>disturbance_json`, one entry per line.
void write_plan(const AugmentPlan& plan, const std::filesystem::path& path);
AugmentPlan read_plan(const std::filesystem::path& path);

// Sample-domain dispatch to mix_at_snr / convolve_rir / apply_gain. The
// disturbance parameters are already concrete; rng only drives the noise
// crop offset.
audio::AudioClip apply_distortion(const audio::AudioClip& clip,
                                  const Disturbance& disturbance, Rng& rng);

// Compression paths. Real codecs shell out through spec.encoder_command;
// telephony resamples 16k->8k->16k; the surrogate applies a 3.4 kHz
// low-pass followed by requantization to 2^10 amplitude levels. Output is
// trimmed/padded to the input length (raw decodes may drift by at most 1%).
audio::AudioClip apply_compression(const audio::AudioClip& clip,
                                   const CompressionSpec& spec, int bitrate,
                                   const std::filesystem::path& workdir);

struct SpecAugmentConfig {
  double f_pct = 10.0;  // max percentage of frequency bins per mask
  double t_pct = 10.0;  // max percentage of time frames per mask
  int rows = 1;         // max number of frequency masks
  int cols = 1;         // max number of time masks
  double fill_value = 0.0;

  void validate() const;
};

// Draws k_f in {0..rows} frequency masks of width uniform in
// {0..floor(f_pct/100 * dim)} at uniform starts, and analogously k_t time
// masks over frames; masked cells take fill_value, all others are
// bit-identical to the input.
features::FeatureMatrix spec_augment(const features::FeatureMatrix& features,
                                     const SpecAugmentConfig& cfg, Rng& rng);

}  // namespace augment
}  // namespace stitchguard

#endif  // STITCHGUARD_AUGMENT_AUGMENT_HPP_
