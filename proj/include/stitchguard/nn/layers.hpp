// include/stitchguard/nn/layers.hpp

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

// Layers with explicit forward/backward passes. Forward in train phase
// caches what backward needs; backward accumulates parameter gradients
// and returns the input gradient. Conv2d runs as im2col + GEMM.

#ifndef STITCHGUARD_NN_LAYERS_HPP_
#define STITCHGUARD_NN_LAYERS_HPP_

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "stitchguard/nn/tensor.hpp"
#include "stitchguard/rng.hpp"

namespace stitchguard {
namespace nn {

template <typename Scalar>
Scalar softplus(Scalar x) {
  // log1p(exp(-|x|)) + max(x, 0); no overflow for large |x|
  return std::log1p(std::exp(-std::abs(x))) + std::max(x, Scalar(0));
}

template <typename Scalar>
Scalar mish(Scalar x) {
  return x * std::tanh(softplus(x));
}

template <typename Scalar>
Scalar mish_derivative(Scalar x) {
  const Scalar sp = softplus(x);
  const Scalar t = std::tanh(sp);
  const Scalar sig = Scalar(1) / (Scalar(1) + std::exp(-x));
  return t + x * (Scalar(1) - t * t) * sig;
}

template <typename Scalar>
void kaiming_uniform_fill(Tensor<Scalar>& t, int fan_in, Rng& rng) {
  const double bound = std::sqrt(6.0 / fan_in);
  for (std::int64_t i = 0; i < t.size(); ++i)
    t[i] = static_cast<Scalar>(rng.uniform_real(-bound, bound));
}

template <typename Scalar>
class Conv2d {
 public:
  Conv2d(std::string name, int in_ch, int out_ch, int kh, int kw, int stride_h,
         int stride_w, int pad_h, int pad_w, Rng& rng)
      : in_ch_(in_ch), out_ch_(out_ch), kh_(kh), kw_(kw), sh_(stride_h),
        sw_(stride_w), ph_(pad_h), pw_(pad_w),
        weight_(name + ".weight", {out_ch, in_ch, kh, kw}) {
    kaiming_uniform_fill(weight_.value, in_ch * kh * kw, rng);
  }

  Tensor<Scalar> forward(const Tensor<Scalar>& x, Phase phase) {
    check_shape(x.rank() == 4 && x.dim(1) == in_ch_, "conv2d input (N,C,H,W)");
    const int n = x.dim(0), h = x.dim(2), w = x.dim(3);
    const int ho = out_h(h), wo = out_w(w);
    check_shape(ho >= 1 && wo >= 1, "conv2d output would be empty");

    Tensor<Scalar> y({n, out_ch_, ho, wo});
    const int ckk = in_ch_ * kh_ * kw_;
    ConstMatMap<Scalar> wmat(weight_.value.data(), out_ch_, ckk);
    MatrixX<Scalar> col(ckk, ho * wo);
    for (int i = 0; i < n; ++i) {
      im2col(x, i, col);
      MatMap<Scalar> yi(y.data() + static_cast<std::int64_t>(i) * out_ch_ * ho * wo,
                        out_ch_, ho * wo);
      yi.noalias() = wmat * col;
    }
    if (phase == Phase::kTrain) {
      cached_input_ = x;
      has_cache_ = true;
    } else {
      has_cache_ = false;
    }
    return y;
  }

  Tensor<Scalar> backward(const Tensor<Scalar>& gy) {
    require(has_cache_, ErrorKind::kBackwardBeforeForward, "conv2d backward");
    const Tensor<Scalar>& x = cached_input_;
    const int n = x.dim(0), h = x.dim(2), w = x.dim(3);
    const int ho = out_h(h), wo = out_w(w);
    check_shape(gy.rank() == 4 && gy.dim(0) == n && gy.dim(1) == out_ch_ &&
                    gy.dim(2) == ho && gy.dim(3) == wo,
                "conv2d upstream gradient shape");

    const int ckk = in_ch_ * kh_ * kw_;
    ConstMatMap<Scalar> wmat(weight_.value.data(), out_ch_, ckk);
    MatMap<Scalar> gw(weight_.value.grad().data(), out_ch_, ckk);

    Tensor<Scalar> gx(x.shape());
    MatrixX<Scalar> col(ckk, ho * wo);
    MatrixX<Scalar> gcol(ckk, ho * wo);
    for (int i = 0; i < n; ++i) {
      im2col(x, i, col);
      ConstMatMap<Scalar> gyi(gy.data() + static_cast<std::int64_t>(i) * out_ch_ * ho * wo,
                              out_ch_, ho * wo);
      gw.noalias() += gyi * col.transpose();
      gcol.noalias() = wmat.transpose() * gyi;
      col2im(gcol, i, gx);
    }
    return gx;
  }

  void collect_params(std::vector<Param<Scalar>*>& out) { out.push_back(&weight_); }

  int out_h(int h) const { return (h + 2 * ph_ - kh_) / sh_ + 1; }
  int out_w(int w) const { return (w + 2 * pw_ - kw_) / sw_ + 1; }

  Param<Scalar>& weight() { return weight_; }

 private:
  void im2col(const Tensor<Scalar>& x, int sample, MatrixX<Scalar>& col) const {
    const int h = x.dim(2), w = x.dim(3);
    const int ho = out_h(h), wo = out_w(w);
    col.setZero();
    for (int c = 0; c < in_ch_; ++c) {
      for (int i = 0; i < kh_; ++i) {
        for (int j = 0; j < kw_; ++j) {
          const int row = (c * kh_ + i) * kw_ + j;
          for (int oh = 0; oh < ho; ++oh) {
            const int ih = oh * sh_ - ph_ + i;
            if (ih < 0 || ih >= h) continue;
            for (int ow = 0; ow < wo; ++ow) {
              const int iw = ow * sw_ - pw_ + j;
              if (iw < 0 || iw >= w) continue;
              col(row, oh * wo + ow) = x.at(sample, c, ih, iw);
            }
          }
        }
      }
    }
  }

  void col2im(const MatrixX<Scalar>& gcol, int sample, Tensor<Scalar>& gx) const {
    const int h = gx.dim(2), w = gx.dim(3);
    const int ho = out_h(h), wo = out_w(w);
    for (int c = 0; c < in_ch_; ++c) {
      for (int i = 0; i < kh_; ++i) {
        for (int j = 0; j < kw_; ++j) {
          const int row = (c * kh_ + i) * kw_ + j;
          for (int oh = 0; oh < ho; ++oh) {
            const int ih = oh * sh_ - ph_ + i;
            if (ih < 0 || ih >= h) continue;
            for (int ow = 0; ow < wo; ++ow) {
              const int iw = ow * sw_ - pw_ + j;
              if (iw < 0 || iw >= w) continue;
              gx.at(sample, c, ih, iw) += gcol(row, oh * wo + ow);
            }
          }
        }
      }
    }
  }

  int in_ch_, out_ch_, kh_, kw_, sh_, sw_, ph_, pw_;
  Param<Scalar> weight_;
  Tensor<Scalar> cached_input_;
  bool has_cache_ = false;
};

template <typename Scalar>
class BatchNorm2d {
 public:
  BatchNorm2d(std::string name, int channels, double momentum = 0.1,
              double eps = 1e-6)
      : channels_(channels), momentum_(momentum), eps_(eps),
        gamma_(name + ".gamma", {channels}), beta_(name + ".beta", {channels}),
        running_mean_({channels}), running_var_({channels}),
        running_mean_name_(name + ".running_mean"),
        running_var_name_(name + ".running_var") {
    gamma_.value.fill(Scalar(1));
    running_var_.fill(Scalar(1));
  }

  Tensor<Scalar> forward(const Tensor<Scalar>& x, Phase phase) {
    check_shape(x.rank() == 4 && x.dim(1) == channels_, "batchnorm input (N,C,H,W)");
    const int n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
    const std::int64_t per_ch = static_cast<std::int64_t>(n) * h * w;

    Tensor<Scalar> y(x.shape());
    if (phase == Phase::kTrain) {
      mean_.assign(static_cast<std::size_t>(c), Scalar(0));
      inv_std_.assign(static_cast<std::size_t>(c), Scalar(0));
      xhat_ = Tensor<Scalar>(x.shape());
      for (int ch = 0; ch < c; ++ch) {
        Scalar sum = 0, sq = 0;
        for (int i = 0; i < n; ++i)
          for (int ih = 0; ih < h; ++ih)
            for (int iw = 0; iw < w; ++iw) {
              const Scalar v = x.at(i, ch, ih, iw);
              sum += v;
              sq += v * v;
            }
        const Scalar mean = sum / per_ch;
        Scalar var = sq / per_ch - mean * mean;
        if (var < 0) var = 0;  // numeric guard
        const Scalar istd = Scalar(1) / std::sqrt(var + static_cast<Scalar>(eps_));
        mean_[static_cast<std::size_t>(ch)] = mean;
        inv_std_[static_cast<std::size_t>(ch)] = istd;
        running_mean_[ch] = static_cast<Scalar>((1 - momentum_) * running_mean_[ch] +
                                                momentum_ * mean);
        running_var_[ch] = static_cast<Scalar>((1 - momentum_) * running_var_[ch] +
                                               momentum_ * var);
        const Scalar g = gamma_.value[ch], b = beta_.value[ch];
        for (int i = 0; i < n; ++i)
          for (int ih = 0; ih < h; ++ih)
            for (int iw = 0; iw < w; ++iw) {
              const Scalar xh = (x.at(i, ch, ih, iw) - mean) * istd;
              xhat_.at(i, ch, ih, iw) = xh;
              y.at(i, ch, ih, iw) = g * xh + b;
            }
      }
      has_cache_ = true;
    } else {
      for (int ch = 0; ch < c; ++ch) {
        const Scalar istd =
            Scalar(1) / std::sqrt(running_var_[ch] + static_cast<Scalar>(eps_));
        const Scalar g = gamma_.value[ch], b = beta_.value[ch];
        const Scalar mean = running_mean_[ch];
        for (int i = 0; i < n; ++i)
          for (int ih = 0; ih < h; ++ih)
            for (int iw = 0; iw < w; ++iw)
              y.at(i, ch, ih, iw) = g * (x.at(i, ch, ih, iw) - mean) * istd + b;
      }
      has_cache_ = false;
    }
    return y;
  }

  Tensor<Scalar> backward(const Tensor<Scalar>& gy) {
    require(has_cache_, ErrorKind::kBackwardBeforeForward, "batchnorm backward");
    const int n = gy.dim(0), c = gy.dim(1), h = gy.dim(2), w = gy.dim(3);
    check_shape(c == channels_, "batchnorm upstream gradient shape");
    const std::int64_t per_ch = static_cast<std::int64_t>(n) * h * w;

    Tensor<Scalar> gx(gy.shape());
    auto& ggamma = gamma_.value.grad();
    auto& gbeta = beta_.value.grad();
    for (int ch = 0; ch < c; ++ch) {
      Scalar sum_gy = 0, sum_gy_xhat = 0;
      for (int i = 0; i < n; ++i)
        for (int ih = 0; ih < h; ++ih)
          for (int iw = 0; iw < w; ++iw) {
            const Scalar g = gy.at(i, ch, ih, iw);
            sum_gy += g;
            sum_gy_xhat += g * xhat_.at(i, ch, ih, iw);
          }
      ggamma[static_cast<std::size_t>(ch)] += sum_gy_xhat;
      gbeta[static_cast<std::size_t>(ch)] += sum_gy;
      const Scalar g = gamma_.value[ch];
      const Scalar istd = inv_std_[static_cast<std::size_t>(ch)];
      const Scalar mean_gy = sum_gy / per_ch;
      const Scalar mean_gy_xhat = sum_gy_xhat / per_ch;
      for (int i = 0; i < n; ++i)
        for (int ih = 0; ih < h; ++ih)
          for (int iw = 0; iw < w; ++iw) {
            gx.at(i, ch, ih, iw) =
                g * istd *
                (gy.at(i, ch, ih, iw) - mean_gy -
                 xhat_.at(i, ch, ih, iw) * mean_gy_xhat);
          }
    }
    return gx;
  }

  void collect_params(std::vector<Param<Scalar>*>& out) {
    out.push_back(&gamma_);
    out.push_back(&beta_);
  }

  // Running statistics are serialized alongside parameters.
  void collect_buffers(std::vector<std::pair<std::string, Tensor<Scalar>*>>& out) {
    out.emplace_back(running_mean_name_, &running_mean_);
    out.emplace_back(running_var_name_, &running_var_);
  }

  const std::vector<Scalar>& batch_xhat_buffer() const { return xhat_.buffer(); }

 private:
  int channels_;
  double momentum_, eps_;
  Param<Scalar> gamma_, beta_;
  Tensor<Scalar> running_mean_, running_var_;
  std::string running_mean_name_, running_var_name_;
  std::vector<Scalar> mean_, inv_std_;
  Tensor<Scalar> xhat_;
  bool has_cache_ = false;
};

template <typename Scalar>
class ReLU {
 public:
  Tensor<Scalar> forward(const Tensor<Scalar>& x, Phase phase) {
    Tensor<Scalar> y(x.shape());
    for (std::int64_t i = 0; i < x.size(); ++i) y[i] = x[i] > 0 ? x[i] : Scalar(0);
    if (phase == Phase::kTrain) {
      mask_.assign(static_cast<std::size_t>(x.size()), false);
      for (std::int64_t i = 0; i < x.size(); ++i)
        mask_[static_cast<std::size_t>(i)] = x[i] > 0;
      has_cache_ = true;
    } else {
      has_cache_ = false;
    }
    return y;
  }

  Tensor<Scalar> backward(const Tensor<Scalar>& gy) {
    require(has_cache_ && gy.size() == static_cast<std::int64_t>(mask_.size()),
            ErrorKind::kBackwardBeforeForward, "relu backward");
    Tensor<Scalar> gx(gy.shape());
    for (std::int64_t i = 0; i < gy.size(); ++i)
      gx[i] = mask_[static_cast<std::size_t>(i)] ? gy[i] : Scalar(0);
    return gx;
  }

 private:
  std::vector<bool> mask_;
  bool has_cache_ = false;
};

template <typename Scalar>
class Mish {
 public:
  Tensor<Scalar> forward(const Tensor<Scalar>& x, Phase phase) {
    Tensor<Scalar> y(x.shape());
    for (std::int64_t i = 0; i < x.size(); ++i) y[i] = mish(x[i]);
    if (phase == Phase::kTrain) {
      cached_input_ = x;
      has_cache_ = true;
    } else {
      has_cache_ = false;
    }
    return y;
  }

  Tensor<Scalar> backward(const Tensor<Scalar>& gy) {
    require(has_cache_ && gy.size() == cached_input_.size(),
            ErrorKind::kBackwardBeforeForward, "mish backward");
    Tensor<Scalar> gx(gy.shape());
    for (std::int64_t i = 0; i < gy.size(); ++i)
      gx[i] = gy[i] * mish_derivative(cached_input_[i]);
    return gx;
  }

 private:
  Tensor<Scalar> cached_input_;
  bool has_cache_ = false;
};

template <typename Scalar>
class Dense {
 public:
  Dense(std::string name, int in_features, int out_features, Rng& rng)
      : in_(in_features), out_(out_features),
        weight_(name + ".weight", {out_features, in_features}),
        bias_(name + ".bias", {out_features}) {
    kaiming_uniform_fill(weight_.value, in_features, rng);
  }

  Tensor<Scalar> forward(const Tensor<Scalar>& x, Phase phase) {
    check_shape(x.rank() == 2 && x.dim(1) == in_, "dense input (N, in)");
    ++forward_count_;
    const int n = x.dim(0);
    Tensor<Scalar> y({n, out_});
    ConstMatMap<Scalar> xm(x.data(), n, in_);
    ConstMatMap<Scalar> wm(weight_.value.data(), out_, in_);
    MatMap<Scalar> ym(y.data(), n, out_);
    ym.noalias() = xm * wm.transpose();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < out_; ++j) y.at(i, j) += bias_.value[j];
    if (phase == Phase::kTrain) {
      cached_input_ = x;
      has_cache_ = true;
    } else {
      has_cache_ = false;
    }
    return y;
  }

  Tensor<Scalar> backward(const Tensor<Scalar>& gy) {
    require(has_cache_, ErrorKind::kBackwardBeforeForward, "dense backward");
    const int n = cached_input_.dim(0);
    check_shape(gy.rank() == 2 && gy.dim(0) == n && gy.dim(1) == out_,
                "dense upstream gradient shape");
    ConstMatMap<Scalar> xm(cached_input_.data(), n, in_);
    ConstMatMap<Scalar> gym(gy.data(), n, out_);
    MatMap<Scalar> gwm(weight_.value.grad().data(), out_, in_);
    gwm.noalias() += gym.transpose() * xm;
    auto& gb = bias_.value.grad();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < out_; ++j) gb[static_cast<std::size_t>(j)] += gy.at(i, j);

    Tensor<Scalar> gx({n, in_});
    ConstMatMap<Scalar> wm(weight_.value.data(), out_, in_);
    MatMap<Scalar> gxm(gx.data(), n, in_);
    gxm.noalias() = gym * wm;
    return gx;
  }

  void collect_params(std::vector<Param<Scalar>*>& out) {
    out.push_back(&weight_);
    out.push_back(&bias_);
  }

  // Forward-pass counter; lets tests assert that a bypassed layer is
  // never touched.
  std::uint64_t forward_count() const { return forward_count_; }

  Param<Scalar>& weight() { return weight_; }
  Param<Scalar>& bias() { return bias_; }
  int in_features() const { return in_; }
  int out_features() const { return out_; }

 private:
  int in_, out_;
  Param<Scalar> weight_, bias_;
  Tensor<Scalar> cached_input_;
  bool has_cache_ = false;
  std::uint64_t forward_count_ = 0;
};

template <typename Scalar>
class Softmax {
 public:
  Tensor<Scalar> forward(const Tensor<Scalar>& x, Phase phase) {
    check_shape(x.rank() == 2, "softmax input (N, K)");
    const int n = x.dim(0), k = x.dim(1);
    Tensor<Scalar> y(x.shape());
    for (int i = 0; i < n; ++i) {
      Scalar mx = x.at(i, 0);
      for (int j = 1; j < k; ++j) mx = std::max(mx, x.at(i, j));
      Scalar sum = 0;
      for (int j = 0; j < k; ++j) {
        const Scalar e = std::exp(x.at(i, j) - mx);
        y.at(i, j) = e;
        sum += e;
      }
      for (int j = 0; j < k; ++j) y.at(i, j) /= sum;
    }
    if (phase == Phase::kTrain) {
      cached_probs_ = y;
      has_cache_ = true;
    } else {
      has_cache_ = false;
    }
    return y;
  }

  Tensor<Scalar> backward(const Tensor<Scalar>& gy) {
    require(has_cache_, ErrorKind::kBackwardBeforeForward, "softmax backward");
    const int n = cached_probs_.dim(0), k = cached_probs_.dim(1);
    check_shape(gy.rank() == 2 && gy.dim(0) == n && gy.dim(1) == k,
                "softmax upstream gradient shape");
    Tensor<Scalar> gx(gy.shape());
    for (int i = 0; i < n; ++i) {
      Scalar dot = 0;
      for (int j = 0; j < k; ++j) dot += gy.at(i, j) * cached_probs_.at(i, j);
      for (int j = 0; j < k; ++j)
        gx.at(i, j) = cached_probs_.at(i, j) * (gy.at(i, j) - dot);
    }
    return gx;
  }

 private:
  Tensor<Scalar> cached_probs_;
  bool has_cache_ = false;
};

}  // namespace nn
}  // namespace stitchguard

#endif  // STITCHGUARD_NN_LAYERS_HPP_
