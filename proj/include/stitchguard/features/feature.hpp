// include/stitchguard/features/feature.hpp

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

// STFT-based acoustic frontends. Three feature kinds share one pipeline:
//
//   LFCC         = DCT(log(max(FB * |S|^2, floor)))  keeping dim rows
//   LLFB         = log(max(FB * |S|^2, floor))
//   DCT-DFT spec = DCT(log(max(|S|, floor)))         keeping dim rows
//
// with FB a triangular filterbank spaced linearly from 0 to Nyquist.
// Static coefficients only; no delta features.

#ifndef STITCHGUARD_FEATURES_FEATURE_HPP_
#define STITCHGUARD_FEATURES_FEATURE_HPP_

#include <string>

#include "stitchguard/audio/clip.hpp"
#include "stitchguard/common.hpp"

namespace stitchguard {
namespace features {

enum class FeatureKind { kLfcc, kLlfb, kDctDftSpec };

const char* feature_kind_name(FeatureKind kind);
FeatureKind feature_kind_from_name(const std::string& name);

struct FeatureConfig {
  FeatureKind kind = FeatureKind::kLfcc;
  int dim = 80;  // 0 for DCT-DFT spec means "full spectrum", nfft/2 + 1
  int nfft = 1024;
  double win_ms = 25.0;
  double hop_ms = 10.0;
  int sample_rate = 16000;
  int n_filters = 0;  // 0 defaults to dim
  double log_floor = 1e-10;
  bool mean_norm = true;  // applied by the pipeline before chunking

  int win_samples() const;
  int hop_samples() const;
  int bins() const { return nfft / 2 + 1; }
  int effective_dim() const;
  int effective_filters() const;

  // Throws InvalidConfig when the fields are inconsistent.
  void validate() const;
};

struct Spectrogram {
  Matrix values;  // frames x (nfft/2 + 1), nonnegative magnitudes
  double frame_hop_ms = 0.0;
};

struct FeatureMatrix {
  Matrix values;  // frames x dim
  FeatureConfig config;

  Eigen::Index frames() const { return values.rows(); }
  Eigen::Index dim() const { return values.cols(); }
};

// Hamming-windowed magnitude STFT. Frame count is
// 1 + floor((N - W) / H); a clip shorter than one window is rejected.
Spectrogram stft_magnitude(const audio::AudioClip& clip,
                           const FeatureConfig& cfg);

// Triangular filters with peaks equally spaced on the linear frequency
// axis from 0 to Nyquist, peak value 1, adjacent triangles overlapping at
// half-width. Shape: n_filters x (nfft/2 + 1).
Matrix linear_filterbank(const FeatureConfig& cfg);

// Orthonormal DCT-II rows, n_out x n_in.
Matrix dct_matrix(int n_in, int n_out);

// Full frontend; resamples the clip first when its rate differs from
// cfg.sample_rate.
FeatureMatrix extract(const audio::AudioClip& clip, const FeatureConfig& cfg);

// Subtracts the per-column mean (per-utterance cepstral mean subtraction).
FeatureMatrix mean_normalize(const FeatureMatrix& features);

}  // namespace features
}  // namespace stitchguard

#endif  // STITCHGUARD_FEATURES_FEATURE_HPP_
