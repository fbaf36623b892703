// tests/test_features.cpp

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "stitchguard/features/feat_io.hpp"
#include "stitchguard/features/feature.hpp"
#include "stitchguard/rng.hpp"
#include "support/toyset.hpp"

using namespace stitchguard;
using namespace stitchguard::features;

namespace {

FeatureConfig lfcc_config(int dim = 80, int nfft = 1024) {
  FeatureConfig cfg;
  cfg.kind = FeatureKind::kLfcc;
  cfg.dim = dim;
  cfg.nfft = nfft;
  return cfg;
}

audio::AudioClip zeros_clip(int n, int sr = 16000) {
  audio::AudioClip clip;
  clip.sample_rate = sr;
  clip.samples = Eigen::ArrayXd::Zero(n);
  return clip;
}

}  // namespace

TEST_CASE("stft: all-zero clip gives an all-zero spectrogram") {
  const auto spec = stft_magnitude(zeros_clip(16000), lfcc_config());
  CHECK(spec.values.maxCoeff() == 0.0);
  CHECK(spec.values.minCoeff() == 0.0);
}

TEST_CASE("stft: 1 kHz tone at nfft 1024 peaks at bin 64 in every frame") {
  auto clip = testsupport::make_tone(1000.0, 1.0, 16000, 0.5);
  const auto spec = stft_magnitude(clip, lfcc_config());
  for (Eigen::Index t = 0; t < spec.values.rows(); ++t) {
    Eigen::Index argmax = 0;
    spec.values.row(t).maxCoeff(&argmax);
    CHECK(argmax == 64);  // 1000/16000 * 1024
  }
}

TEST_CASE("stft: 1 s at 25 ms / 10 ms gives 98 frames") {
  const auto spec = stft_magnitude(zeros_clip(16000), lfcc_config());
  CHECK(spec.values.rows() == 98);  // 1 + floor((16000-400)/160)
}

TEST_CASE("stft: frame count formula over randomized lengths") {
  Rng rng(17);
  const auto cfg = lfcc_config();
  const int w = cfg.win_samples();
  const int h = cfg.hop_samples();
  for (int i = 0; i < 100; ++i) {
    const int n = w + static_cast<int>(rng.uniform_int(0, 32000));
    const auto spec = stft_magnitude(zeros_clip(n), cfg);
    CHECK(spec.values.rows() == 1 + (n - w) / h);
  }
}

TEST_CASE("stft: clip shorter than a window is rejected") {
  try {
    stft_magnitude(zeros_clip(399), lfcc_config());
    FAIL("expected ClipTooShort");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kClipTooShort);
  }
}

TEST_CASE("filterbank: weights lie in [0,1] and peaks hit 1") {
  auto cfg = lfcc_config(20);
  cfg.n_filters = 20;
  const Matrix fb = linear_filterbank(cfg);
  CHECK(fb.minCoeff() >= 0.0);
  CHECK(fb.maxCoeff() <= 1.0 + 1e-12);
}

TEST_CASE("filterbank: bins between first and last peak are covered") {
  auto cfg = lfcc_config(20);
  cfg.n_filters = 20;
  const Matrix fb = linear_filterbank(cfg);
  const double nyquist = cfg.sample_rate / 2.0;
  const double first_peak = nyquist * 1 / (cfg.n_filters + 1);
  const double last_peak = nyquist * cfg.n_filters / (cfg.n_filters + 1);
  for (int k = 0; k < cfg.bins(); ++k) {
    const double f = static_cast<double>(k) * cfg.sample_rate / cfg.nfft;
    if (f > first_peak && f < last_peak) {
      CHECK(fb.col(k).maxCoeff() > 0.0);
    }
  }
}

TEST_CASE("filterbank: single filter peaks at half Nyquist") {
  auto cfg = lfcc_config(1, 1024);
  cfg.n_filters = 1;
  const Matrix fb = linear_filterbank(cfg);
  Eigen::Index argmax = 0;
  fb.row(0).maxCoeff(&argmax);
  const double f = static_cast<double>(argmax) * cfg.sample_rate / cfg.nfft;
  CHECK(std::abs(f - cfg.sample_rate / 4.0) <= cfg.sample_rate / double(cfg.nfft));
}

TEST_CASE("dct: square matrix is orthonormal to 1e-12") {
  const Matrix d = dct_matrix(32, 32);
  const Matrix eye = d * d.transpose();
  CHECK((eye - Matrix::Identity(32, 32)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("dct: truncated rows stay orthonormal") {
  const Matrix d = dct_matrix(64, 20);
  const Matrix eye = d * d.transpose();
  CHECK((eye - Matrix::Identity(20, 20)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("dct: DC row applied to ones gives sqrt(n)") {
  const int n = 48;
  const Matrix d = dct_matrix(n, n);
  const Vector ones = Vector::Ones(n);
  CHECK((d * ones)(0) == doctest::Approx(std::sqrt(double(n))).epsilon(1e-12));
}

TEST_CASE("extract: LFCC dim 80 nfft 1024 yields frames x 80") {
  auto clip = testsupport::make_tone(800.0, 0.5, 16000, 0.4);
  const auto fm = extract(clip, lfcc_config(80, 1024));
  CHECK(fm.dim() == 80);
  CHECK(fm.frames() == 1 + (8000 - 400) / 160);
  CHECK(fm.values.allFinite());
}

TEST_CASE("extract: stationary periodic clip gives identical rows") {
  // 200 Hz period = 80 samples divides the 160-sample hop.
  auto clip = testsupport::make_tone(200.0, 0.5, 16000, 0.5);
  const auto fm = extract(clip, lfcc_config(40, 1024));
  for (Eigen::Index t = 1; t < fm.frames(); ++t) {
    CHECK((fm.values.row(t) - fm.values.row(0)).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("extract: all-zero clip pins LLFB at log(log_floor)") {
  FeatureConfig cfg;
  cfg.kind = FeatureKind::kLlfb;
  cfg.dim = 30;
  cfg.nfft = 512;
  const auto fm = extract(zeros_clip(8000), cfg);
  CHECK((fm.values.array() - std::log(cfg.log_floor)).abs().maxCoeff() < 1e-12);
}

TEST_CASE("extract: deterministic, bit-identical across runs") {
  auto clip = testsupport::make_tone(1234.5, 0.3, 16000, 0.3);
  const auto a = extract(clip, lfcc_config(60, 1024));
  const auto b = extract(clip, lfcc_config(60, 1024));
  CHECK((a.values.array() == b.values.array()).all());
}

TEST_CASE("extract: LFCC with dim == n_filters round-trips to LLFB") {
  Rng rng(23);
  audio::AudioClip clip;
  clip.sample_rate = 16000;
  clip.samples.resize(8000);
  for (Eigen::Index i = 0; i < 8000; ++i) clip.samples[i] = rng.uniform_real(-0.5, 0.5);

  FeatureConfig lf = lfcc_config(24, 512);
  lf.n_filters = 24;
  FeatureConfig lb = lf;
  lb.kind = FeatureKind::kLlfb;

  const auto lfcc = extract(clip, lf);
  const auto llfb = extract(clip, lb);
  const Matrix rec = lfcc.values * dct_matrix(24, 24);  // inverse of orthonormal DCT
  CHECK((rec - llfb.values).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("extract: scaling a clip shifts LLFB by exactly 2 ln(alpha)") {
  auto clip = testsupport::make_tone(900.0, 0.3, 16000, 0.2);
  FeatureConfig cfg;
  cfg.kind = FeatureKind::kLlfb;
  cfg.dim = 20;
  cfg.nfft = 512;
  const double alpha = 2.5;
  audio::AudioClip scaled = clip;
  scaled.samples *= alpha;
  const auto base = extract(clip, cfg);
  const auto moved = extract(scaled, cfg);
  // the floor is inactive for a loud tone in most bands; check where it is
  const Matrix diff = moved.values - base.values;
  int checked = 0;
  for (Eigen::Index r = 0; r < base.frames(); ++r) {
    for (Eigen::Index c = 0; c < base.dim(); ++c) {
      if (base.values(r, c) > std::log(cfg.log_floor) + 1.0 &&
          moved.values(r, c) > std::log(cfg.log_floor) + 1.0) {
        CHECK(diff(r, c) == doctest::Approx(2.0 * std::log(alpha)).epsilon(1e-9));
        ++checked;
      }
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("extract: DCT-DFT spec with dim 0 keeps the full spectrum") {
  auto clip = testsupport::make_tone(800.0, 0.2, 16000, 0.4);
  FeatureConfig cfg;
  cfg.kind = FeatureKind::kDctDftSpec;
  cfg.dim = 0;
  cfg.nfft = 512;
  const auto fm = extract(clip, cfg);
  CHECK(fm.dim() == 257);
}

TEST_CASE("extract: clip at a different rate is resampled first") {
  auto clip = testsupport::make_tone(1000.0, 0.5, 8000, 0.5);
  const auto fm = extract(clip, lfcc_config(20, 1024));
  CHECK(fm.dim() == 20);
  CHECK(fm.values.allFinite());
}

TEST_CASE("mean_normalize: column means vanish") {
  Rng rng(31);
  FeatureMatrix fm;
  fm.values.resize(50, 12);
  for (Eigen::Index r = 0; r < 50; ++r)
    for (Eigen::Index c = 0; c < 12; ++c) fm.values(r, c) = rng.uniform_real(-3.0, 3.0);
  const auto out = mean_normalize(fm);
  CHECK(out.values.colwise().mean().cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("mean_normalize: zero-mean input is unchanged") {
  FeatureMatrix fm;
  fm.values.resize(2, 3);
  fm.values << 1.0, -2.0, 0.5, -1.0, 2.0, -0.5;
  const auto out = mean_normalize(fm);
  CHECK((out.values - fm.values).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("mean_normalize: constant matrix becomes zero") {
  FeatureMatrix fm;
  fm.values = Matrix::Constant(7, 4, 3.25);
  const auto out = mean_normalize(fm);
  CHECK(out.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("feature config: invariant violations are rejected") {
  FeatureConfig bad = lfcc_config(80, 1024);
  bad.n_filters = 40;  // dim > n_filters
  CHECK_THROWS_AS(bad.validate(), Error);

  FeatureConfig llfb;
  llfb.kind = FeatureKind::kLlfb;
  llfb.dim = 30;
  llfb.n_filters = 20;
  CHECK_THROWS_AS(llfb.validate(), Error);

  FeatureConfig small = lfcc_config(80, 256);  // nfft < window samples
  CHECK_THROWS_AS(small.validate(), Error);
}

TEST_CASE("feat file: header plus f32 payload round-trips") {
  Rng rng(41);
  Matrix values(13, 7);
  for (Eigen::Index r = 0; r < 13; ++r)
    for (Eigen::Index c = 0; c < 7; ++c) values(r, c) = rng.uniform_real(-10.0, 10.0);
  const auto path =
      std::filesystem::temp_directory_path() / "stitchguard_feat_test.feat";
  write_feat(values, path);
  CHECK(std::filesystem::file_size(path) == 16 + 13 * 7 * 4);
  const Matrix back = read_feat(path);
  REQUIRE(back.rows() == 13);
  REQUIRE(back.cols() == 7);
  // stored as f32
  CHECK((back - values).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("feat file: truncated payload is an IO failure, bad magic corrupt") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto path = dir / "stitchguard_feat_bad.feat";
  {
    std::ofstream os(path, std::ios::binary);
    os << "STGF";
    const std::uint32_t v[3] = {1, 100, 10};
    os.write(reinterpret_cast<const char*>(v), 12);
    os << "short";
  }
  try {
    read_feat(path);
    FAIL("expected IoFailure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kIoFailure);
  }
  {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    os << "NOPE";
    const std::uint32_t v[3] = {1, 0, 0};
    os.write(reinterpret_cast<const char*>(v), 12);
  }
  try {
    read_feat(path);
    FAIL("expected CorruptHeader");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kCorruptHeader);
  }
}
