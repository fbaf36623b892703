// tests/test_pooling.cpp

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
#include <vector>

#include "stitchguard/nn/grad_check.hpp"
#include "stitchguard/pooling/pooling.hpp"

using namespace stitchguard;
using namespace stitchguard::pooling;
using nn::GradCheckItem;
using nn::Param;

namespace {

Matrix random_frames(int t, int d, Rng& rng, double scale = 1.0) {
  Matrix m(t, d);
  for (int i = 0; i < t; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = rng.uniform_real(-scale, scale);
  return m;
}

// ----- straight-line oracle ------------------------------------------------
// Naive re-implementations of the pooled-vector formulas, no Eigen algebra
// beyond element access. They stay independent of PoolingLayer internals.

std::vector<double> oracle_weighted_stats(const Matrix& frames,
                                          const std::vector<double>& w) {
  const int t = static_cast<int>(frames.rows());
  const int d = static_cast<int>(frames.cols());
  std::vector<double> out(static_cast<std::size_t>(2 * d), 0.0);
  for (int j = 0; j < d; ++j) {
    double mu = 0, m2 = 0;
    for (int i = 0; i < t; ++i) {
      mu += w[static_cast<std::size_t>(i)] * frames(i, j);
      m2 += w[static_cast<std::size_t>(i)] * frames(i, j) * frames(i, j);
    }
    double var = m2 - mu * mu;
    if (var < 0) var = 0;
    out[static_cast<std::size_t>(j)] = mu;
    out[static_cast<std::size_t>(d + j)] = std::sqrt(var + 1e-10);
  }
  return out;
}

std::vector<double> oracle_softmax(const std::vector<double>& s) {
  double mx = s[0];
  for (double v : s) mx = std::max(mx, v);
  std::vector<double> w(s.size());
  double sum = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    w[i] = std::exp(s[i] - mx);
    sum += w[i];
  }
  for (auto& v : w) v /= sum;
  return w;
}

// AT-style attention on one block with given parameters and temperature.
std::vector<double> oracle_attention_block(const Matrix& block, const Matrix& w_mat,
                                           const std::vector<double>& b,
                                           const std::vector<double>& v,
                                           double tau) {
  const int t = static_cast<int>(block.rows());
  const int dh = static_cast<int>(block.cols());
  const int a = static_cast<int>(w_mat.rows());
  std::vector<double> scores(static_cast<std::size_t>(t), 0.0);
  for (int i = 0; i < t; ++i) {
    double s = 0;
    for (int q = 0; q < a; ++q) {
      double u = b[static_cast<std::size_t>(q)];
      for (int j = 0; j < dh; ++j) u += w_mat(q, j) * block(i, j);
      s += v[static_cast<std::size_t>(q)] * std::tanh(u);
    }
    scores[static_cast<std::size_t>(i)] = s / tau;
  }
  return oracle_weighted_stats(block, oracle_softmax(scores));
}

std::vector<double> read_param(Param<double>& p) {
  return {p.value.data(), p.value.data() + p.value.size()};
}

Matrix read_param_matrix(Param<double>& p, int rows, int cols) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = p.value[i * cols + j];
  return m;
}

std::vector<double> oracle_pool(PoolingLayer<double>& layer, const Matrix& frames) {
  const auto& cfg = layer.config();
  const int d = cfg.input_dim;
  switch (cfg.kind) {
    case PoolingKind::kSt: {
      std::vector<double> w(static_cast<std::size_t>(frames.rows()),
                            1.0 / static_cast<double>(frames.rows()));
      return oracle_weighted_stats(frames, w);
    }
    case PoolingKind::kAt: {
      return oracle_attention_block(
          frames, read_param_matrix(layer.head_w(0), cfg.attention_hidden, d),
          read_param(layer.head_b(0)), read_param(layer.head_v(0)), 1.0);
    }
    case PoolingKind::kMh:
    case PoolingKind::kMrh: {
      const int h = cfg.heads;
      const int dh = d / h;
      const std::vector<double> temps = cfg.kind == PoolingKind::kMrh
                                            ? cfg.resolutions
                                            : std::vector<double>{1.0};
      std::vector<double> out;
      for (double tau : temps) {
        for (int k = 0; k < h; ++k) {
          Matrix block = frames.block(0, k * dh, frames.rows(), dh);
          auto part = oracle_attention_block(
              block, read_param_matrix(layer.head_w(k), cfg.attention_hidden, dh),
              read_param(layer.head_b(k)), read_param(layer.head_v(k)), tau);
          out.insert(out.end(), part.begin(), part.end());
        }
      }
      return out;
    }
    case PoolingKind::kLde: {
      const int c = cfg.dict_size;
      const Matrix centers = read_param_matrix(layer.centers(), c, d);
      const std::vector<double> scales = read_param(layer.scales());
      const int t = static_cast<int>(frames.rows());
      std::vector<std::vector<double>> w(static_cast<std::size_t>(t));
      for (int i = 0; i < t; ++i) {
        std::vector<double> logits(static_cast<std::size_t>(c));
        for (int j = 0; j < c; ++j) {
          double n2 = 0;
          for (int q = 0; q < d; ++q) {
            const double r = frames(i, q) - centers(j, q);
            n2 += r * r;
          }
          logits[static_cast<std::size_t>(j)] = -scales[static_cast<std::size_t>(j)] * n2;
        }
        w[static_cast<std::size_t>(i)] = oracle_softmax(logits);
      }
      std::vector<double> out;
      for (int j = 0; j < c; ++j) {
        double z = 0;
        for (int i = 0; i < t; ++i) z += w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        for (int q = 0; q < d; ++q) {
          double num = 0;
          for (int i = 0; i < t; ++i)
            num += w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                   (frames(i, q) - centers(j, q));
          out.push_back(num / (z + 1e-9));
        }
      }
      return out;
    }
  }
  return {};
}

PoolingConfig make_config(PoolingKind kind, int d) {
  PoolingConfig cfg;
  cfg.kind = kind;
  cfg.input_dim = d;
  cfg.heads = 2;
  cfg.dict_size = 3;
  cfg.attention_hidden = 3;
  cfg.resolutions = {0.5, 1.0, 2.0};
  return cfg;
}

const PoolingKind kAllKinds[] = {PoolingKind::kSt, PoolingKind::kAt,
                                 PoolingKind::kLde, PoolingKind::kMh,
                                 PoolingKind::kMrh};

}  // namespace

TEST_CASE("pool: every kind matches the straight-line oracle on a 5x8 input") {
  Rng data_rng(101);
  const Matrix frames = random_frames(5, 8, data_rng);
  for (PoolingKind kind : kAllKinds) {
    Rng rng(42);
    PoolingLayer<double> layer(make_config(kind, 8), rng);
    PoolingCache<double> cache;
    const VectorX<double> out = layer.forward(frames, cache);
    const auto expect = oracle_pool(layer, frames);
    REQUIRE(out.size() == static_cast<Eigen::Index>(expect.size()));
    for (Eigen::Index i = 0; i < out.size(); ++i) {
      CHECK(std::abs(out[i] - expect[static_cast<std::size_t>(i)]) < 1e-12);
    }
  }
}

TEST_CASE("pool ST: identical frames give mean = frame and ~zero std") {
  Rng rng(1);
  PoolingLayer<double> layer(make_config(PoolingKind::kSt, 6), rng);
  Matrix frames(4, 6);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 6; ++j) frames(i, j) = 0.3 * j - 0.5;
  PoolingCache<double> cache;
  const auto out = layer.forward(frames, cache);
  for (int j = 0; j < 6; ++j) {
    CHECK(out[j] == doctest::Approx(frames(0, j)).epsilon(1e-12));
    CHECK(out[6 + j] >= 0.0);
    CHECK(out[6 + j] < 1e-4);  // sqrt(variance eps)
  }
}

TEST_CASE("pool AT: zero attention parameters reduce to ST exactly") {
  Rng rng(2);
  PoolingLayer<double> at(make_config(PoolingKind::kAt, 8), rng);
  at.head_w(0).value.fill(0.0);
  at.head_b(0).value.fill(0.0);
  Rng rng2(3);
  PoolingLayer<double> st(make_config(PoolingKind::kSt, 8), rng2);
  Rng data_rng(4);
  const Matrix frames = random_frames(7, 8, data_rng);
  PoolingCache<double> ca, cs;
  const auto out_at = at.forward(frames, ca);
  const auto out_st = st.forward(frames, cs);
  CHECK((out_at - out_st).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("pool LDE: frame sitting on a center has a zero residual block") {
  Rng rng(5);
  auto cfg = make_config(PoolingKind::kLde, 4);
  PoolingLayer<double> layer(cfg, rng);
  Matrix frames(1, 4);
  for (int j = 0; j < 4; ++j) frames(0, j) = layer.centers().value[1 * 4 + j];
  PoolingCache<double> cache;
  const auto out = layer.forward(frames, cache);
  // block for center 1 is exactly zero
  for (int q = 0; q < 4; ++q) CHECK(out[4 + q] == 0.0);
}

TEST_CASE("pool MH: one head is identical to AT with the same parameters") {
  auto cfg_at = make_config(PoolingKind::kAt, 8);
  auto cfg_mh = make_config(PoolingKind::kMh, 8);
  cfg_mh.heads = 1;
  Rng r1(7);
  PoolingLayer<double> at(cfg_at, r1);
  Rng r2(7);
  PoolingLayer<double> mh(cfg_mh, r2);  // same seed, same init draw order
  Rng data_rng(8);
  const Matrix frames = random_frames(6, 8, data_rng);
  PoolingCache<double> ca, cm;
  const auto out_at = at.forward(frames, ca);
  const auto out_mh = mh.forward(frames, cm);
  CHECK((out_at - out_mh).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("pool: permutation invariance for every kind") {
  Rng data_rng(9);
  const Matrix frames = random_frames(9, 8, data_rng);
  std::vector<int> perm = {4, 7, 0, 2, 8, 1, 6, 3, 5};
  Matrix shuffled(9, 8);
  for (int i = 0; i < 9; ++i) shuffled.row(i) = frames.row(perm[static_cast<std::size_t>(i)]);
  for (PoolingKind kind : kAllKinds) {
    Rng rng(10);
    PoolingLayer<double> layer(make_config(kind, 8), rng);
    PoolingCache<double> c1, c2;
    const auto a = layer.forward(frames, c1);
    const auto b = layer.forward(shuffled, c2);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("pool: attention weights are positive and sum to 1 per head") {
  Rng data_rng(11);
  const Matrix frames = random_frames(6, 8, data_rng);
  for (PoolingKind kind : {PoolingKind::kAt, PoolingKind::kMh, PoolingKind::kMrh}) {
    Rng rng(12);
    PoolingLayer<double> layer(make_config(kind, 8), rng);
    PoolingCache<double> cache;
    layer.forward(frames, cache);
    for (const auto& w : cache.weights) {
      CHECK(w.minCoeff() > 0.0);
      CHECK(std::abs(w.sum() - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("pool LDE: assignments sum to 1 over the dictionary per frame") {
  Rng rng(13), data_rng(14);
  PoolingLayer<double> layer(make_config(PoolingKind::kLde, 8), rng);
  const Matrix frames = random_frames(6, 8, data_rng);
  PoolingCache<double> cache;
  layer.forward(frames, cache);
  for (Eigen::Index i = 0; i < cache.lde_w.rows(); ++i) {
    CHECK(std::abs(cache.lde_w.row(i).sum() - 1.0) < 1e-9);
  }
}

TEST_CASE("pool: output length matches the formula for random configs") {
  Rng rng(15);
  for (int trial = 0; trial < 20; ++trial) {
    const int h = 1 + static_cast<int>(rng.uniform_int(0, 3));
    const int d = h * (1 + static_cast<int>(rng.uniform_int(0, 5)));
    for (PoolingKind kind : kAllKinds) {
      auto cfg = make_config(kind, d);
      cfg.heads = h;
      Rng lr(16);
      PoolingLayer<double> layer(cfg, lr);
      Rng data_rng(17);
      const Matrix frames = random_frames(3, d, data_rng);
      PoolingCache<double> cache;
      const auto out = layer.forward(frames, cache);
      int expect = 0;
      switch (kind) {
        case PoolingKind::kSt:
        case PoolingKind::kAt:
        case PoolingKind::kMh: expect = 2 * d; break;
        case PoolingKind::kLde: expect = cfg.dict_size * d; break;
        case PoolingKind::kMrh:
          expect = 2 * d * static_cast<int>(cfg.resolutions.size());
          break;
      }
      CHECK(out.size() == expect);
      CHECK(out.allFinite());
      // std components are nonnegative wherever they exist
      if (kind != PoolingKind::kLde) {
        const int reps = kind == PoolingKind::kMrh
                             ? static_cast<int>(cfg.resolutions.size())
                             : 1;
        const int dh = d / (kind == PoolingKind::kSt || kind == PoolingKind::kAt
                                ? 1
                                : cfg.heads);
        const int heads = kind == PoolingKind::kSt || kind == PoolingKind::kAt
                              ? 1
                              : cfg.heads;
        for (int r = 0; r < reps; ++r)
          for (int k = 0; k < heads; ++k)
            for (int q = 0; q < dh; ++q)
              CHECK(out[r * 2 * d + k * 2 * dh + dh + q] >= 0.0);
      }
    }
  }
}

TEST_CASE("pool: every kind passes the finite-difference gradient check") {
  for (PoolingKind kind : kAllKinds) {
    Rng rng(20);
    PoolingLayer<double> layer(make_config(kind, 8), rng);
    Rng data_rng(21);
    Matrix frames = random_frames(5, 8, data_rng);
    Rng probe_rng(22);
    VectorX<double> probe(layer.config().output_dim());
    for (Eigen::Index i = 0; i < probe.size(); ++i)
      probe[i] = probe_rng.uniform_real(-1.0, 1.0);

    std::vector<Param<double>*> params;
    layer.collect_params(params);
    for (auto* p : params) p->value.zero_grad();

    PoolingCache<double> cache;
    layer.forward(frames, cache);
    const Matrix gframes = layer.backward(cache, probe);

    auto items = nn::grad_items_from_params(params);
    items.push_back({frames.data(), gframes.data(),
                     static_cast<std::int64_t>(frames.size())});
    const auto loss = [&] {
      PoolingCache<double> c;
      return layer.forward(frames, c).dot(probe);
    };
    const double err = nn::grad_check_max_rel_error(loss, items, 1e-5);
    INFO("kind ", pooling_kind_name(kind));
    CHECK(err < 1e-4);
  }
}

TEST_CASE("pool ST: mean-part gradient is upstream / T broadcast") {
  Rng rng(23), data_rng(24);
  PoolingLayer<double> layer(make_config(PoolingKind::kSt, 4), rng);
  Matrix frames = random_frames(5, 4, data_rng);
  PoolingCache<double> cache;
  layer.forward(frames, cache);
  VectorX<double> gout = VectorX<double>::Zero(8);
  gout[1] = 2.0;  // mean component, no std gradient
  const Matrix gframes = layer.backward(cache, gout);
  for (int i = 0; i < 5; ++i) {
    CHECK(gframes(i, 1) == doctest::Approx(2.0 / 5.0).epsilon(1e-12));
    CHECK(gframes(i, 0) == 0.0);
  }
}

TEST_CASE("pool: zero upstream gradient produces zero parameter gradients") {
  for (PoolingKind kind : {PoolingKind::kAt, PoolingKind::kMh, PoolingKind::kMrh,
                           PoolingKind::kLde}) {
    Rng rng(25), data_rng(26);
    PoolingLayer<double> layer(make_config(kind, 8), rng);
    Matrix frames = random_frames(4, 8, data_rng);
    std::vector<Param<double>*> params;
    layer.collect_params(params);
    for (auto* p : params) p->value.zero_grad();
    PoolingCache<double> cache;
    layer.forward(frames, cache);
    layer.backward(cache, VectorX<double>::Zero(layer.config().output_dim()));
    for (auto* p : params) {
      for (auto g : p->value.grad()) CHECK(g == 0.0);
    }
  }
}

TEST_CASE("pool: empty input and wrong dims are rejected") {
  Rng rng(27);
  PoolingLayer<double> layer(make_config(PoolingKind::kSt, 4), rng);
  PoolingCache<double> cache;
  Matrix empty(0, 4);
  CHECK_THROWS_AS(layer.forward(empty, cache), Error);
  Matrix wrong(3, 5);
  CHECK_THROWS_AS(layer.forward(wrong, cache), Error);
}

TEST_CASE("pool config: indivisible heads are rejected") {
  auto cfg = make_config(PoolingKind::kMh, 9);
  cfg.heads = 2;
  CHECK_THROWS_AS(cfg.validate(), Error);
}
