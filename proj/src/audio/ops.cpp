// src/audio/ops.cpp

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

#include "stitchguard/audio/ops.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "stitchguard/common.hpp"

namespace stitchguard {
namespace audio {

namespace {

constexpr double kPi = 3.14159265358979323846;

double sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  return std::sin(kPi * x) / (kPi * x);
}

// Modified Bessel function of the first kind, order zero (power series).
double bessel_i0(double x) {
  const double half = x / 2.0;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 64; ++k) {
    term *= (half / k) * (half / k);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

double kaiser(double r, double beta) {
  const double a = 1.0 - r * r;
  if (a <= 0.0) return 0.0;
  return bessel_i0(beta * std::sqrt(a)) / bessel_i0(beta);
}

constexpr int kResampleHalf = 32;  // 64 taps total
constexpr double kResampleBeta = 8.0;

// Kernel value at offset u input samples from the interpolation point,
// with cutoff c in units of the input Nyquist.
double resample_kernel(double u, double c) {
  return c * sinc(c * u) * kaiser(u / kResampleHalf, kResampleBeta);
}

}  // namespace

AudioClip resample(const AudioClip& clip, int target_rate) {
  require(target_rate > 0, ErrorKind::kInvalidConfig, "target rate must be positive");
  require(clip.sample_rate > 0, ErrorKind::kInvalidConfig, "source rate must be positive");
  if (target_rate == clip.sample_rate) return clip;

  const std::int64_t n = clip.samples.size();
  const std::int64_t src = clip.sample_rate;
  const std::int64_t dst = target_rate;
  const std::int64_t g = std::gcd(src, dst);
  const std::int64_t up = dst / g;
  const std::int64_t down = src / g;
  // round(n * dst / src), half away from zero on the nonnegative axis
  const std::int64_t out_len = (2 * n * up + down) / (2 * down);

  AudioClip out;
  out.sample_rate = target_rate;
  out.samples = Eigen::ArrayXd::Zero(out_len);
  if (n == 0) return out;

  const double cutoff = std::min(1.0, static_cast<double>(up) / static_cast<double>(down));

  // Per-phase tap tables when the phase count is small; otherwise taps are
  // evaluated on the fly from the same kernel.
  const bool tabulate = up <= 4096;
  std::vector<std::array<double, 2 * kResampleHalf>> table;
  if (tabulate) {
    table.resize(static_cast<std::size_t>(up));
    for (std::int64_t ph = 0; ph < up; ++ph) {
      const double frac = static_cast<double>(ph) / static_cast<double>(up);
      double sum = 0.0;
      for (int j = -kResampleHalf + 1; j <= kResampleHalf; ++j) {
        const double w = resample_kernel(j - frac, cutoff);
        table[static_cast<std::size_t>(ph)][static_cast<std::size_t>(j + kResampleHalf - 1)] = w;
        sum += w;
      }
      for (auto& w : table[static_cast<std::size_t>(ph)]) w /= sum;  // unit DC gain
    }
  }

  for (std::int64_t m = 0; m < out_len; ++m) {
    const std::int64_t pos_num = m * down;
    const std::int64_t base = pos_num / up;
    const std::int64_t phase = pos_num % up;
    double acc = 0.0;
    if (tabulate) {
      const auto& taps = table[static_cast<std::size_t>(phase)];
      for (int j = -kResampleHalf + 1; j <= kResampleHalf; ++j) {
        const std::int64_t idx = base + j;
        if (idx < 0 || idx >= n) continue;
        acc += clip.samples[idx] * taps[static_cast<std::size_t>(j + kResampleHalf - 1)];
      }
    } else {
      const double frac = static_cast<double>(phase) / static_cast<double>(up);
      double sum = 0.0;
      double raw = 0.0;
      for (int j = -kResampleHalf + 1; j <= kResampleHalf; ++j) {
        const double w = resample_kernel(j - frac, cutoff);
        sum += w;
        const std::int64_t idx = base + j;
        if (idx >= 0 && idx < n) raw += clip.samples[idx] * w;
      }
      acc = raw / sum;
    }
    out.samples[m] = acc;
  }
  return out;
}

AudioClip apply_gain(const AudioClip& clip, double gain_db) {
  const double g = std::pow(10.0, gain_db / 20.0);
  AudioClip out;
  out.sample_rate = clip.sample_rate;
  out.samples = (clip.samples * g).cwiseMin(1.0).cwiseMax(-1.0);
  return out;
}

AudioClip mix_at_snr(const AudioClip& speech, const AudioClip& noise,
                     double snr_db, Rng& rng) {
  require(speech.sample_rate == noise.sample_rate, ErrorKind::kShapeMismatch,
          "speech and noise sample rates differ");
  const Eigen::Index n = speech.samples.size();
  require(n > 0, ErrorKind::kZeroPowerSpeech, "empty speech");
  require(noise.samples.size() > 0, ErrorKind::kZeroPowerNoise, "empty noise");

  // Length-match the noise: tile when shorter, crop at a random offset
  // when longer.
  Eigen::ArrayXd matched(n);
  if (noise.samples.size() == n) {
    matched = noise.samples;
  } else if (noise.samples.size() > n) {
    const auto offset = static_cast<Eigen::Index>(
        rng.uniform_int(0, noise.samples.size() - n));
    matched = noise.samples.segment(offset, n);
  } else {
    const Eigen::Index m = noise.samples.size();
    for (Eigen::Index i = 0; i < n; ++i) matched[i] = noise.samples[i % m];
  }

  const double p_speech = speech.samples.square().mean();
  const double p_noise = matched.square().mean();
  require(p_speech > 0.0, ErrorKind::kZeroPowerSpeech, "speech has zero power");
  require(p_noise > 0.0, ErrorKind::kZeroPowerNoise, "noise has zero power");

  const double alpha = std::sqrt(p_speech / (p_noise * std::pow(10.0, snr_db / 10.0)));

  AudioClip out;
  out.sample_rate = speech.sample_rate;
  out.samples = (speech.samples + alpha * matched).cwiseMin(1.0).cwiseMax(-1.0);
  return out;
}

AudioClip convolve_rir(const AudioClip& clip, const RoomImpulseResponse& rir) {
  require(clip.sample_rate == rir.sample_rate, ErrorKind::kShapeMismatch,
          "clip and RIR sample rates differ");
  const Eigen::Index k = rir.taps.size();
  require(k > 0 && rir.taps.abs().maxCoeff() > 0.0, ErrorKind::kEmptyRir,
          "RIR needs at least one nonzero tap");

  const Eigen::Index n = clip.samples.size();
  AudioClip out;
  out.sample_rate = clip.sample_rate;
  out.samples = Eigen::ArrayXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double acc = 0.0;
    const Eigen::Index jmax = std::min(k - 1, i);
    for (Eigen::Index j = 0; j <= jmax; ++j) acc += rir.taps[j] * clip.samples[i - j];
    out.samples[i] = acc;
  }

  const double peak_in = n > 0 ? clip.samples.abs().maxCoeff() : 0.0;
  const double peak_out = n > 0 ? out.samples.abs().maxCoeff() : 0.0;
  if (peak_in > 0.0 && peak_out > 0.0) out.samples *= peak_in / peak_out;
  return out;
}

Eigen::ArrayXd fir_lowpass(const Eigen::ArrayXd& x, double cutoff_hz,
                           int sample_rate, int half_width, double kaiser_beta) {
  require(sample_rate > 0 && cutoff_hz > 0.0, ErrorKind::kInvalidConfig,
          "bad low-pass parameters");
  const double c = std::min(1.0, 2.0 * cutoff_hz / sample_rate);
  const int taps = 2 * half_width + 1;
  Eigen::ArrayXd h(taps);
  for (int j = -half_width; j <= half_width; ++j) {
    h[j + half_width] = c * sinc(c * j) *
                        kaiser(static_cast<double>(j) / half_width, kaiser_beta);
  }
  h /= h.sum();

  const Eigen::Index n = x.size();
  Eigen::ArrayXd y = Eigen::ArrayXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = -half_width; j <= half_width; ++j) {
      const Eigen::Index idx = i + j;
      if (idx < 0 || idx >= n) continue;
      acc += x[idx] * h[half_width - j];
    }
    y[i] = acc;
  }
  return y;
}

}  // namespace audio
}  // namespace stitchguard
