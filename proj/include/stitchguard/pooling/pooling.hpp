// include/stitchguard/pooling/pooling.hpp

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

// Temporal pooling layers mapping T x d frame activations to one fixed
// vector. Normative definitions:
//
//   ST   concat(mean_t, std_t), std = sqrt(clamp(var, 0) + 1e-10)
//   AT   score_t = v' tanh(W h_t + b); w = softmax(score);
//        weighted mean and weighted std, concatenated
//   MH   frames split into `heads` sub-vectors of d/heads dims; AT-style
//        attention per head; per-head [mean; std] concatenated
//   LDE  r_tc = h_t - mu_c; w_tc = softmax_c(-s_c |r_tc|^2);
//        e_c = sum_t w_tc r_tc / (sum_t w_tc + 1e-9); concat of all e_c
//   MRH  MH once per temperature tau (softmax over score/tau), results
//        concatenated; attention parameters shared across temperatures
//
// Output lengths: 2d (ST/AT/MH), c*d (LDE), 2d*|resolutions| (MRH).
// Every kind is permutation-invariant over frames.

#ifndef STITCHGUARD_POOLING_POOLING_HPP_
#define STITCHGUARD_POOLING_POOLING_HPP_

#include <cmath>
#include <string>
#include <vector>

#include "stitchguard/nn/layers.hpp"
#include "stitchguard/nn/tensor.hpp"
#include "stitchguard/rng.hpp"

namespace stitchguard {
namespace pooling {

enum class PoolingKind { kSt, kAt, kLde, kMh, kMrh };

const char* pooling_kind_name(PoolingKind kind);
PoolingKind pooling_kind_from_name(const std::string& name);

struct PoolingConfig {
  PoolingKind kind = PoolingKind::kSt;
  int input_dim = 0;          // d
  int heads = 4;              // MH/MRH
  int dict_size = 8;          // LDE
  int attention_hidden = 32;  // AT/MH/MRH
  std::vector<double> resolutions = {0.5, 1.0, 2.0};  // MRH temperatures

  int output_dim() const {
    switch (kind) {
      case PoolingKind::kSt:
      case PoolingKind::kAt:
      case PoolingKind::kMh:
        return 2 * input_dim;
      case PoolingKind::kLde:
        return dict_size * input_dim;
      case PoolingKind::kMrh:
        return 2 * input_dim * static_cast<int>(resolutions.size());
    }
    return 0;
  }

  void validate() const {
    require(input_dim >= 1, ErrorKind::kInvalidConfig, "pooling input_dim");
    if (kind == PoolingKind::kMh || kind == PoolingKind::kMrh) {
      require(heads >= 1 && input_dim % heads == 0, ErrorKind::kInvalidConfig,
              "input_dim must be divisible by heads");
      require(attention_hidden >= 1, ErrorKind::kInvalidConfig, "attention_hidden");
    }
    if (kind == PoolingKind::kAt) {
      require(attention_hidden >= 1, ErrorKind::kInvalidConfig, "attention_hidden");
    }
    if (kind == PoolingKind::kLde) {
      require(dict_size >= 1, ErrorKind::kInvalidConfig, "dict_size");
    }
    if (kind == PoolingKind::kMrh) {
      require(!resolutions.empty(), ErrorKind::kInvalidConfig, "resolutions empty");
      for (double t : resolutions)
        require(t > 0, ErrorKind::kInvalidConfig, "temperatures must be positive");
    }
  }
};

template <typename Scalar>
struct PoolingCache {
  MatrixX<Scalar> frames;
  std::vector<MatrixX<Scalar>> acts;     // per head: T x a, tanh activations
  std::vector<VectorX<Scalar>> weights;  // per (res * heads + head): T
  std::vector<VectorX<Scalar>> mu, sigma, var_raw;  // same indexing
  MatrixX<Scalar> lde_w;    // T x c soft assignments
  MatrixX<Scalar> lde_num;  // c x d numerators
  VectorX<Scalar> lde_z;    // c
};

template <typename Scalar>
class PoolingLayer {
 public:
  static constexpr Scalar kVarEps = static_cast<Scalar>(1e-10);
  static constexpr Scalar kLdeEps = static_cast<Scalar>(1e-9);

  PoolingLayer(const PoolingConfig& cfg, Rng& rng) : cfg_(cfg) {
    cfg_.validate();
    const int n_heads = attention_heads();
    if (n_heads > 0) {
      const int dh = cfg_.input_dim / n_heads;
      const int a = cfg_.attention_hidden;
      att_w_.reserve(static_cast<std::size_t>(n_heads));
      att_b_.reserve(static_cast<std::size_t>(n_heads));
      att_v_.reserve(static_cast<std::size_t>(n_heads));
      for (int k = 0; k < n_heads; ++k) {
        const std::string base = "pool.head" + std::to_string(k);
        att_w_.emplace_back(base + ".W", std::vector<int>{a, dh});
        att_b_.emplace_back(base + ".b", std::vector<int>{a});
        att_v_.emplace_back(base + ".v", std::vector<int>{a});
        nn::kaiming_uniform_fill(att_w_.back().value, dh, rng);
        nn::kaiming_uniform_fill(att_v_.back().value, a, rng);
      }
    }
    if (cfg_.kind == PoolingKind::kLde) {
      centers_ = nn::Param<Scalar>("pool.centers",
                                   {cfg_.dict_size, cfg_.input_dim});
      scales_ = nn::Param<Scalar>("pool.scales", {cfg_.dict_size});
      nn::kaiming_uniform_fill(centers_.value, cfg_.input_dim, rng);
      scales_.value.fill(Scalar(1));
    }
  }

  const PoolingConfig& config() const { return cfg_; }

  VectorX<Scalar> forward(const MatrixX<Scalar>& frames,
                          PoolingCache<Scalar>& cache) const {
    require(frames.rows() >= 1, ErrorKind::kEmptyInput, "pooling needs frames");
    nn::check_shape(frames.cols() == cfg_.input_dim, "pooling frame dim");
    cache = PoolingCache<Scalar>();
    cache.frames = frames;
    switch (cfg_.kind) {
      case PoolingKind::kSt: return forward_st(cache);
      case PoolingKind::kAt:
      case PoolingKind::kMh:
      case PoolingKind::kMrh: return forward_attention(cache);
      case PoolingKind::kLde: return forward_lde(cache);
    }
    fail(ErrorKind::kInvalidConfig, "unreachable pooling kind");
  }

  MatrixX<Scalar> backward(const PoolingCache<Scalar>& cache,
                           const VectorX<Scalar>& gout) {
    nn::check_shape(gout.size() == cfg_.output_dim(), "pooling upstream length");
    switch (cfg_.kind) {
      case PoolingKind::kSt: return backward_st(cache, gout);
      case PoolingKind::kAt:
      case PoolingKind::kMh:
      case PoolingKind::kMrh: return backward_attention(cache, gout);
      case PoolingKind::kLde: return backward_lde(cache, gout);
    }
    fail(ErrorKind::kInvalidConfig, "unreachable pooling kind");
  }

  void collect_params(std::vector<nn::Param<Scalar>*>& out) {
    for (auto& p : att_w_) out.push_back(&p);
    for (auto& p : att_b_) out.push_back(&p);
    for (auto& p : att_v_) out.push_back(&p);
    if (cfg_.kind == PoolingKind::kLde) {
      out.push_back(&centers_);
      out.push_back(&scales_);
    }
  }

  // Test hook: attention weights of the most recent forward are in the
  // cache; expose head parameter access for cross-kind comparisons.
  nn::Param<Scalar>& head_w(int k) { return att_w_[static_cast<std::size_t>(k)]; }
  nn::Param<Scalar>& head_b(int k) { return att_b_[static_cast<std::size_t>(k)]; }
  nn::Param<Scalar>& head_v(int k) { return att_v_[static_cast<std::size_t>(k)]; }
  nn::Param<Scalar>& centers() { return centers_; }
  nn::Param<Scalar>& scales() { return scales_; }

 private:
  int attention_heads() const {
    switch (cfg_.kind) {
      case PoolingKind::kAt: return 1;
      case PoolingKind::kMh:
      case PoolingKind::kMrh: return cfg_.heads;
      default: return 0;
    }
  }

  std::vector<double> temperatures() const {
    if (cfg_.kind == PoolingKind::kMrh) return cfg_.resolutions;
    return {1.0};
  }

  // --- weighted first/second moments ------------------------------------

  void weighted_stats(const MatrixX<Scalar>& block, const VectorX<Scalar>& w,
                      VectorX<Scalar>& mu, VectorX<Scalar>& sigma,
                      VectorX<Scalar>& var_raw) const {
    mu.noalias() = block.transpose() * w;
    VectorX<Scalar> m2 =
        (block.array().square().matrix().transpose() * w).eval();
    var_raw = m2 - mu.cwiseProduct(mu);
    sigma = (var_raw.cwiseMax(Scalar(0)).array() + kVarEps).sqrt().matrix();
  }

  // Returns gw; adds the frame-gradient contribution into gblock.
  VectorX<Scalar> weighted_stats_backward(
      const MatrixX<Scalar>& block, const VectorX<Scalar>& w,
      const VectorX<Scalar>& mu, const VectorX<Scalar>& sigma,
      const VectorX<Scalar>& var_raw, const VectorX<Scalar>& gmu,
      const VectorX<Scalar>& gsigma, MatrixX<Scalar>& gblock) const {
    const Eigen::Index dh = block.cols();
    VectorX<Scalar> gvar(dh);
    for (Eigen::Index j = 0; j < dh; ++j) {
      gvar[j] = var_raw[j] > Scalar(0)
                    ? gsigma[j] / (Scalar(2) * sigma[j])
                    : Scalar(0);
    }
    const VectorX<Scalar> gmu_eff = gmu - Scalar(2) * mu.cwiseProduct(gvar);
    // gblock_tj += w_t * (gmu_eff_j + 2 h_tj gvar_j)
    gblock.noalias() += w * gmu_eff.transpose();
    gblock.array() +=
        (w * (Scalar(2) * gvar).transpose()).array() * block.array();
    // gw_t = gmu_eff . h_t + gvar . h_t^2
    VectorX<Scalar> gw = block * gmu_eff;
    gw.noalias() += block.array().square().matrix() * gvar;
    return gw;
  }

  // --- ST ----------------------------------------------------------------

  VectorX<Scalar> forward_st(PoolingCache<Scalar>& cache) const {
    const Eigen::Index t = cache.frames.rows();
    const VectorX<Scalar> w =
        VectorX<Scalar>::Constant(t, Scalar(1) / static_cast<Scalar>(t));
    cache.weights.push_back(w);
    VectorX<Scalar> mu, sigma, var_raw;
    weighted_stats(cache.frames, w, mu, sigma, var_raw);
    cache.mu.push_back(mu);
    cache.sigma.push_back(sigma);
    cache.var_raw.push_back(var_raw);
    VectorX<Scalar> out(2 * cfg_.input_dim);
    out << mu, sigma;
    return out;
  }

  MatrixX<Scalar> backward_st(const PoolingCache<Scalar>& cache,
                              const VectorX<Scalar>& gout) {
    const int d = cfg_.input_dim;
    MatrixX<Scalar> gframes =
        MatrixX<Scalar>::Zero(cache.frames.rows(), cache.frames.cols());
    weighted_stats_backward(cache.frames, cache.weights[0], cache.mu[0],
                            cache.sigma[0], cache.var_raw[0],
                            VectorX<Scalar>(gout.head(d)),
                            VectorX<Scalar>(gout.tail(d)), gframes);
    return gframes;  // uniform weights carry no trainable parameters
  }

  // --- AT / MH / MRH -------------------------------------------------------

  VectorX<Scalar> forward_attention(PoolingCache<Scalar>& cache) const {
    const int n_heads = attention_heads();
    const int dh = cfg_.input_dim / n_heads;
    const auto temps = temperatures();

    // Scores are computed once per head and reused for every temperature.
    std::vector<VectorX<Scalar>> scores(static_cast<std::size_t>(n_heads));
    std::vector<MatrixX<Scalar>> blocks(static_cast<std::size_t>(n_heads));
    cache.acts.resize(static_cast<std::size_t>(n_heads));
    for (int k = 0; k < n_heads; ++k) {
      blocks[static_cast<std::size_t>(k)] = cache.frames.middleCols(k * dh, dh);
      const MatrixX<Scalar>& block = blocks[static_cast<std::size_t>(k)];
      ConstMatMapT wmat(att_w_[static_cast<std::size_t>(k)].value.data(),
                        cfg_.attention_hidden, dh);
      Eigen::Map<const VectorX<Scalar>> b(
          att_b_[static_cast<std::size_t>(k)].value.data(), cfg_.attention_hidden);
      Eigen::Map<const VectorX<Scalar>> v(
          att_v_[static_cast<std::size_t>(k)].value.data(), cfg_.attention_hidden);
      MatrixX<Scalar> act =
          ((block * wmat.transpose()).rowwise() + b.transpose()).eval();
      act = act.array().tanh().matrix();
      cache.acts[static_cast<std::size_t>(k)] = act;
      scores[static_cast<std::size_t>(k)] = act * v;
    }

    VectorX<Scalar> out(cfg_.output_dim());
    for (std::size_t r = 0; r < temps.size(); ++r) {
      const Scalar tau = static_cast<Scalar>(temps[r]);
      for (int k = 0; k < n_heads; ++k) {
        const VectorX<Scalar>& s = scores[static_cast<std::size_t>(k)];
        VectorX<Scalar> scaled = s / tau;
        const Scalar mx = scaled.maxCoeff();
        VectorX<Scalar> w = (scaled.array() - mx).exp().matrix();
        w /= w.sum();
        VectorX<Scalar> mu, sigma, var_raw;
        weighted_stats(blocks[static_cast<std::size_t>(k)], w, mu, sigma, var_raw);
        cache.weights.push_back(w);
        cache.mu.push_back(mu);
        cache.sigma.push_back(sigma);
        cache.var_raw.push_back(var_raw);
        const Eigen::Index off =
            static_cast<Eigen::Index>(r) * 2 * cfg_.input_dim +
            static_cast<Eigen::Index>(k) * 2 * dh;
        out.segment(off, dh) = mu;
        out.segment(off + dh, dh) = sigma;
      }
    }
    return out;
  }

  MatrixX<Scalar> backward_attention(const PoolingCache<Scalar>& cache,
                                     const VectorX<Scalar>& gout) {
    const int n_heads = attention_heads();
    const int dh = cfg_.input_dim / n_heads;
    const auto temps = temperatures();
    const Eigen::Index t = cache.frames.rows();

    MatrixX<Scalar> gframes = MatrixX<Scalar>::Zero(t, cfg_.input_dim);
    std::vector<VectorX<Scalar>> gscores(
        static_cast<std::size_t>(n_heads),
        VectorX<Scalar>::Zero(t));

    for (std::size_t r = 0; r < temps.size(); ++r) {
      const Scalar tau = static_cast<Scalar>(temps[r]);
      for (int k = 0; k < n_heads; ++k) {
        const std::size_t idx = r * static_cast<std::size_t>(n_heads) +
                                static_cast<std::size_t>(k);
        const VectorX<Scalar>& w = cache.weights[idx];
        const MatrixX<Scalar> block = cache.frames.middleCols(k * dh, dh);
        const Eigen::Index off =
            static_cast<Eigen::Index>(r) * 2 * cfg_.input_dim +
            static_cast<Eigen::Index>(k) * 2 * dh;
        MatrixX<Scalar> gblock = MatrixX<Scalar>::Zero(t, dh);
        const VectorX<Scalar> gw = weighted_stats_backward(
            block, w, cache.mu[idx], cache.sigma[idx], cache.var_raw[idx],
            VectorX<Scalar>(gout.segment(off, dh)),
            VectorX<Scalar>(gout.segment(off + dh, dh)), gblock);
        gframes.middleCols(k * dh, dh) += gblock;
        // softmax over frames with temperature tau
        const Scalar dot = gw.dot(w);
        gscores[static_cast<std::size_t>(k)] +=
            (w.array() * (gw.array() - dot)).matrix() / tau;
      }
    }

    // Then once per head through the score network.
    for (int k = 0; k < n_heads; ++k) {
      const MatrixX<Scalar> block = cache.frames.middleCols(k * dh, dh);
      const MatrixX<Scalar>& act = cache.acts[static_cast<std::size_t>(k)];
      Eigen::Map<const VectorX<Scalar>> v(
          att_v_[static_cast<std::size_t>(k)].value.data(), cfg_.attention_hidden);
      ConstMatMapT wmat(att_w_[static_cast<std::size_t>(k)].value.data(),
                        cfg_.attention_hidden, dh);
      const VectorX<Scalar>& gs = gscores[static_cast<std::size_t>(k)];

      // gv += act' gs ; gu = (gs v') . (1 - act^2)
      Eigen::Map<VectorX<Scalar>> gv(
          att_v_[static_cast<std::size_t>(k)].value.grad().data(),
          cfg_.attention_hidden);
      gv.noalias() += act.transpose() * gs;
      MatrixX<Scalar> gu =
          (gs * v.transpose()).array() * (Scalar(1) - act.array().square());
      MatMapT gwm(att_w_[static_cast<std::size_t>(k)].value.grad().data(),
                  cfg_.attention_hidden, dh);
      gwm.noalias() += gu.transpose() * block;
      Eigen::Map<VectorX<Scalar>> gb(
          att_b_[static_cast<std::size_t>(k)].value.grad().data(),
          cfg_.attention_hidden);
      gb.noalias() += gu.colwise().sum().transpose();
      gframes.middleCols(k * dh, dh).noalias() += gu * wmat;
    }
    return gframes;
  }

  // --- LDE -----------------------------------------------------------------

  VectorX<Scalar> forward_lde(PoolingCache<Scalar>& cache) const {
    const Eigen::Index t = cache.frames.rows();
    const int c = cfg_.dict_size;
    const int d = cfg_.input_dim;
    ConstMatMapT centers(centers_.value.data(), c, d);
    Eigen::Map<const VectorX<Scalar>> scales(scales_.value.data(), c);

    cache.lde_w.resize(t, c);
    for (Eigen::Index i = 0; i < t; ++i) {
      VectorX<Scalar> logits(c);
      for (int j = 0; j < c; ++j) {
        const Scalar n2 =
            (cache.frames.row(i).transpose() - centers.row(j).transpose())
                .squaredNorm();
        logits[j] = -scales[j] * n2;
      }
      const Scalar mx = logits.maxCoeff();
      VectorX<Scalar> w = (logits.array() - mx).exp().matrix();
      w /= w.sum();
      cache.lde_w.row(i) = w.transpose();
    }

    cache.lde_num = MatrixX<Scalar>::Zero(c, d);
    cache.lde_z = cache.lde_w.colwise().sum().transpose();
    for (Eigen::Index i = 0; i < t; ++i) {
      for (int j = 0; j < c; ++j) {
        cache.lde_num.row(j) +=
            cache.lde_w(i, j) * (cache.frames.row(i) - centers.row(j));
      }
    }

    VectorX<Scalar> out(c * d);
    for (int j = 0; j < c; ++j) {
      out.segment(static_cast<Eigen::Index>(j) * d, d) =
          cache.lde_num.row(j).transpose() / (cache.lde_z[j] + kLdeEps);
    }
    return out;
  }

  MatrixX<Scalar> backward_lde(const PoolingCache<Scalar>& cache,
                               const VectorX<Scalar>& gout) {
    const Eigen::Index t = cache.frames.rows();
    const int c = cfg_.dict_size;
    const int d = cfg_.input_dim;
    ConstMatMapT centers(centers_.value.data(), c, d);
    Eigen::Map<const VectorX<Scalar>> scales(scales_.value.data(), c);
    MatMapT gcenters(centers_.value.grad().data(), c, d);
    Eigen::Map<VectorX<Scalar>> gscales(scales_.value.grad().data(), c);

    MatrixX<Scalar> gframes = MatrixX<Scalar>::Zero(t, d);

    // e_j = num_j / (z_j + eps)
    MatrixX<Scalar> gnum(c, d);
    VectorX<Scalar> gz(c);
    for (int j = 0; j < c; ++j) {
      const Scalar denom = cache.lde_z[j] + kLdeEps;
      const auto ge = gout.segment(static_cast<Eigen::Index>(j) * d, d);
      gnum.row(j) = ge.transpose() / denom;
      gz[j] = -ge.dot(cache.lde_num.row(j).transpose()) / (denom * denom);
    }

    for (Eigen::Index i = 0; i < t; ++i) {
      VectorX<Scalar> gw(c);
      MatrixX<Scalar> resid(c, d);
      for (int j = 0; j < c; ++j) {
        resid.row(j) = cache.frames.row(i) - centers.row(j);
        gw[j] = gnum.row(j).dot(resid.row(j)) + gz[j];
      }
      // gr from the numerator term
      MatrixX<Scalar> gr(c, d);
      for (int j = 0; j < c; ++j) gr.row(j) = cache.lde_w(i, j) * gnum.row(j);

      // softmax over dictionary entries
      const VectorX<Scalar> w = cache.lde_w.row(i).transpose();
      const Scalar dot = gw.dot(w);
      const VectorX<Scalar> gl = (w.array() * (gw.array() - dot)).matrix();

      for (int j = 0; j < c; ++j) {
        const Scalar n2 = resid.row(j).squaredNorm();
        gscales[j] += -n2 * gl[j];
        const Scalar gn = -scales[j] * gl[j];
        gr.row(j) += Scalar(2) * gn * resid.row(j);
      }

      gframes.row(i) += gr.colwise().sum();
      gcenters -= gr;
    }
    return gframes;
  }

  using ConstMatMapT = Eigen::Map<const MatrixX<Scalar>>;
  using MatMapT = Eigen::Map<MatrixX<Scalar>>;

  PoolingConfig cfg_;
  std::vector<nn::Param<Scalar>> att_w_, att_b_, att_v_;
  nn::Param<Scalar> centers_, scales_;
};

}  // namespace pooling
}  // namespace stitchguard

#endif  // STITCHGUARD_POOLING_POOLING_HPP_
