// src/features/feature.cpp

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

#include "stitchguard/features/feature.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <vector>

#include "stitchguard/audio/ops.hpp"

namespace stitchguard {
namespace features {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

const char* feature_kind_name(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::kLfcc: return "lfcc";
    case FeatureKind::kLlfb: return "llfb";
    case FeatureKind::kDctDftSpec: return "dctdft";
  }
  return "?";
}

FeatureKind feature_kind_from_name(const std::string& name) {
  if (name == "lfcc") return FeatureKind::kLfcc;
  if (name == "llfb") return FeatureKind::kLlfb;
  if (name == "dctdft") return FeatureKind::kDctDftSpec;
  fail(ErrorKind::kConfigError, "unknown feature kind '" + name + "'");
}

int FeatureConfig::win_samples() const {
  return static_cast<int>(std::lround(win_ms * sample_rate / 1000.0));
}

int FeatureConfig::hop_samples() const {
  return static_cast<int>(std::lround(hop_ms * sample_rate / 1000.0));
}

int FeatureConfig::effective_dim() const {
  if (kind == FeatureKind::kDctDftSpec && dim == 0) return bins();
  return dim;
}

int FeatureConfig::effective_filters() const {
  return n_filters > 0 ? n_filters : effective_dim();
}

void FeatureConfig::validate() const {
  require(sample_rate > 0, ErrorKind::kInvalidConfig, "sample_rate must be positive");
  require(nfft > 0, ErrorKind::kInvalidConfig, "nfft must be positive");
  require(win_ms >= hop_ms && hop_ms > 0, ErrorKind::kInvalidConfig,
          "window must be at least one hop long");
  require(nfft >= win_samples(), ErrorKind::kInvalidConfig,
          "nfft smaller than the window");
  require(log_floor > 0, ErrorKind::kInvalidConfig, "log_floor must be positive");
  const int d = effective_dim();
  const int nf = effective_filters();
  require(d >= 1 && nf >= 1, ErrorKind::kInvalidConfig, "dim/n_filters must be positive");
  switch (kind) {
    case FeatureKind::kLfcc:
      require(d <= nf, ErrorKind::kInvalidConfig, "LFCC needs dim <= n_filters");
      break;
    case FeatureKind::kLlfb:
      require(d == nf, ErrorKind::kInvalidConfig, "LLFB needs dim == n_filters");
      break;
    case FeatureKind::kDctDftSpec:
      require(d <= bins(), ErrorKind::kInvalidConfig,
              "DCT-DFT spec needs dim <= nfft/2 + 1");
      break;
  }
}

Spectrogram stft_magnitude(const audio::AudioClip& clip, const FeatureConfig& cfg) {
  cfg.validate();
  const int w = cfg.win_samples();
  const int h = cfg.hop_samples();
  const auto n = static_cast<int>(clip.samples.size());
  require(n >= w, ErrorKind::kClipTooShort,
          "clip shorter than one analysis window");

  const int frames = 1 + (n - w) / h;
  const int nbins = cfg.bins();

  Eigen::ArrayXd window(w);
  for (int i = 0; i < w; ++i)
    window[i] = 0.54 - 0.46 * std::cos(2.0 * kPi * i / (w - 1));

  Eigen::FFT<double> fft;
  std::vector<double> buf(static_cast<std::size_t>(cfg.nfft));
  std::vector<std::complex<double>> spec;

  Spectrogram out;
  out.frame_hop_ms = cfg.hop_ms;
  out.values.resize(frames, nbins);
  for (int t = 0; t < frames; ++t) {
    const int start = t * h;
    for (int i = 0; i < w; ++i) buf[static_cast<std::size_t>(i)] = clip.samples[start + i] * window[i];
    std::fill(buf.begin() + w, buf.end(), 0.0);
    fft.fwd(spec, buf);
    for (int k = 0; k < nbins; ++k)
      out.values(t, k) = std::abs(spec[static_cast<std::size_t>(k)]);
  }
  return out;
}

Matrix linear_filterbank(const FeatureConfig& cfg) {
  const int nf = cfg.effective_filters();
  require(nf >= 1, ErrorKind::kInvalidConfig, "n_filters must be >= 1");
  const int nbins = cfg.bins();
  const double nyquist = cfg.sample_rate / 2.0;

  // Edge frequencies 0 = f_0 < f_1 < ... < f_{nf+1} = Nyquist; filter m
  // peaks at f_{m+1} and spans its two neighbours.
  Matrix fb = Matrix::Zero(nf, nbins);
  const auto edge = [&](int m) { return nyquist * m / (nf + 1); };
  for (int m = 0; m < nf; ++m) {
    const double lo = edge(m), mid = edge(m + 1), hi = edge(m + 2);
    for (int k = 0; k < nbins; ++k) {
      const double f = static_cast<double>(k) * cfg.sample_rate / cfg.nfft;
      double wgt = 0.0;
      if (f >= lo && f <= mid) {
        wgt = (f - lo) / (mid - lo);
      } else if (f > mid && f <= hi) {
        wgt = (hi - f) / (hi - mid);
      }
      fb(m, k) = wgt;
    }
  }
  return fb;
}

Matrix dct_matrix(int n_in, int n_out) {
  require(n_in >= 1 && n_out >= 1 && n_out <= n_in, ErrorKind::kInvalidConfig,
          "dct_matrix needs 1 <= n_out <= n_in");
  Matrix d(n_out, n_in);
  const double s0 = std::sqrt(1.0 / n_in);
  const double sk = std::sqrt(2.0 / n_in);
  for (int k = 0; k < n_out; ++k) {
    for (int j = 0; j < n_in; ++j) {
      d(k, j) = (k == 0 ? s0 : sk) * std::cos(kPi * (2 * j + 1) * k / (2.0 * n_in));
    }
  }
  return d;
}

FeatureMatrix extract(const audio::AudioClip& clip, const FeatureConfig& cfg) {
  cfg.validate();
  const audio::AudioClip* source = &clip;
  audio::AudioClip resampled;
  if (clip.sample_rate != cfg.sample_rate) {
    resampled = audio::resample(clip, cfg.sample_rate);
    source = &resampled;
  }

  const Spectrogram spec = stft_magnitude(*source, cfg);
  const int d = cfg.effective_dim();

  FeatureMatrix out;
  out.config = cfg;
  switch (cfg.kind) {
    case FeatureKind::kLfcc: {
      const Matrix fb = linear_filterbank(cfg);
      Matrix energy = spec.values.array().square().matrix() * fb.transpose();
      energy = energy.cwiseMax(cfg.log_floor).array().log().matrix();
      out.values = energy * dct_matrix(cfg.effective_filters(), d).transpose();
      break;
    }
    case FeatureKind::kLlfb: {
      const Matrix fb = linear_filterbank(cfg);
      Matrix energy = spec.values.array().square().matrix() * fb.transpose();
      out.values = energy.cwiseMax(cfg.log_floor).array().log().matrix();
      break;
    }
    case FeatureKind::kDctDftSpec: {
      Matrix logmag = spec.values.cwiseMax(cfg.log_floor).array().log().matrix();
      out.values = logmag * dct_matrix(cfg.bins(), d).transpose();
      break;
    }
  }
  return out;
}

FeatureMatrix mean_normalize(const FeatureMatrix& features) {
  require(features.frames() >= 1, ErrorKind::kEmptyFeatures, "no frames");
  FeatureMatrix out = features;
  const Eigen::RowVectorXd mean = features.values.colwise().mean();
  out.values.rowwise() -= mean;
  return out;
}

}  // namespace features
}  // namespace stitchguard
