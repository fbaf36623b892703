// include/stitchguard/model/model.hpp

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

// Embedding network (ResNet-34 over feature chunks, 3x3 stride-1 stem,
// relu activations, frequency axis averaged into T' x d frame outputs),
// one of five pooling layers, and a classifier FC1 -> mish -> FC2 -> mish
// -> 2-way output with softmax, mish activations in the classifier.
//
// Stitched inference bypasses FC2 and its mish: the first dense layer's
// activation feeds the output layer directly. Stitching is inference-only.

#ifndef STITCHGUARD_MODEL_MODEL_HPP_
#define STITCHGUARD_MODEL_MODEL_HPP_

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "stitchguard/nn/layers.hpp"
#include "stitchguard/pooling/pooling.hpp"

namespace stitchguard {
namespace model {

enum class StitchMode { kNormal, kStitched };

struct ModelConfig {
  std::array<int, 4> block_counts{3, 4, 6, 3};
  std::array<int, 4> widths{64, 128, 256, 512};
  pooling::PoolingConfig pooling;  // input_dim is derived from widths[3]
  int fc1_dim = 256;
  int fc2_dim = 256;
  int num_classes = 2;
  // Test-only variant: 1x3 kernels with time stride 1 everywhere, so the
  // network is equivariant to frame permutations.
  bool frame_equivariant = false;
  // Test-only variant: the activation after FC2 becomes the identity, so
  // FC2 = I makes stitched and normal outputs coincide bit-exactly.
  bool fc2_identity_activation = false;

  void validate() const {
    for (int b : block_counts)
      require(b >= 1, ErrorKind::kInvalidConfig, "block counts must be positive");
    for (int w : widths)
      require(w >= 1, ErrorKind::kInvalidConfig, "widths must be positive");
    require(fc1_dim >= 1 && fc2_dim >= 1, ErrorKind::kInvalidConfig,
            "fc dims must be positive");
    require(fc1_dim == fc2_dim, ErrorKind::kInvalidConfig,
            "fc1_dim must equal fc2_dim (stitching compatibility)");
    require(num_classes == 2, ErrorKind::kInvalidConfig, "two-class model");
  }
};

template <typename Scalar>
class BasicBlock {
 public:
  BasicBlock(const std::string& name, int in_ch, int out_ch, int stride,
             bool flat_time, Rng& rng)
      : conv1_(name + ".conv1", in_ch, out_ch, flat_time ? 1 : 3, 3,
               flat_time ? 1 : stride, stride, flat_time ? 0 : 1, 1, rng),
        bn1_(name + ".bn1", out_ch),
        conv2_(name + ".conv2", out_ch, out_ch, flat_time ? 1 : 3, 3, 1, 1,
               flat_time ? 0 : 1, 1, rng),
        bn2_(name + ".bn2", out_ch) {
    if (in_ch != out_ch || stride != 1) {
      ds_conv_ = std::make_unique<nn::Conv2d<Scalar>>(
          name + ".ds.conv", in_ch, out_ch, 1, 1, flat_time ? 1 : stride,
          stride, 0, 0, rng);
      ds_bn_ = std::make_unique<nn::BatchNorm2d<Scalar>>(name + ".ds.bn", out_ch);
    }
  }

  nn::Tensor<Scalar> forward(const nn::Tensor<Scalar>& x, nn::Phase phase) {
    auto main = bn1_.forward(conv1_.forward(x, phase), phase);
    main = relu1_.forward(main, phase);
    main = bn2_.forward(conv2_.forward(main, phase), phase);
    nn::Tensor<Scalar> skip =
        ds_conv_ ? ds_bn_->forward(ds_conv_->forward(x, phase), phase) : x;
    nn::check_shape(main.shape() == skip.shape(), "residual add shapes");
    for (std::int64_t i = 0; i < main.size(); ++i) main[i] += skip[i];
    return relu2_.forward(main, phase);
  }

  nn::Tensor<Scalar> backward(const nn::Tensor<Scalar>& gy) {
    const auto gsum = relu2_.backward(gy);
    // main branch
    auto g = bn2_.backward(gsum);
    g = conv2_.backward(g);
    g = relu1_.backward(g);
    g = bn1_.backward(g);
    auto gx = conv1_.backward(g);
    // skip branch
    if (ds_conv_) {
      auto gskip = ds_bn_->backward(gsum);
      gskip = ds_conv_->backward(gskip);
      for (std::int64_t i = 0; i < gx.size(); ++i) gx[i] += gskip[i];
    } else {
      for (std::int64_t i = 0; i < gx.size(); ++i) gx[i] += gsum[i];
    }
    return gx;
  }

  void collect_params(std::vector<nn::Param<Scalar>*>& out) {
    conv1_.collect_params(out);
    bn1_.collect_params(out);
    conv2_.collect_params(out);
    bn2_.collect_params(out);
    if (ds_conv_) {
      ds_conv_->collect_params(out);
      ds_bn_->collect_params(out);
    }
  }

  void collect_buffers(
      std::vector<std::pair<std::string, nn::Tensor<Scalar>*>>& out) {
    bn1_.collect_buffers(out);
    bn2_.collect_buffers(out);
    if (ds_bn_) ds_bn_->collect_buffers(out);
  }

 private:
  nn::Conv2d<Scalar> conv1_;
  nn::BatchNorm2d<Scalar> bn1_;
  nn::Conv2d<Scalar> conv2_;
  nn::BatchNorm2d<Scalar> bn2_;
  nn::ReLU<Scalar> relu1_, relu2_;
  std::unique_ptr<nn::Conv2d<Scalar>> ds_conv_;
  std::unique_ptr<nn::BatchNorm2d<Scalar>> ds_bn_;
};

template <typename Scalar>
class ResNet34 {
 public:
  ResNet34(const ModelConfig& cfg, Rng& rng)
      : stem_conv_("embed.stem.conv", 1, cfg.widths[0],
                   cfg.frame_equivariant ? 1 : 3, 3, 1, 1,
                   cfg.frame_equivariant ? 0 : 1, 1, rng),
        stem_bn_("embed.stem.bn", cfg.widths[0]) {
    int in_ch = cfg.widths[0];
    for (int stage = 0; stage < 4; ++stage) {
      const int out_ch = cfg.widths[static_cast<std::size_t>(stage)];
      const int blocks = cfg.block_counts[static_cast<std::size_t>(stage)];
      for (int b = 0; b < blocks; ++b) {
        const int stride = (stage > 0 && b == 0) ? 2 : 1;
        const std::string name =
            "embed.s" + std::to_string(stage) + ".b" + std::to_string(b);
        blocks_.emplace_back(std::make_unique<BasicBlock<Scalar>>(
            name, in_ch, out_ch, stride, cfg.frame_equivariant, rng));
        in_ch = out_ch;
      }
    }
  }

  // (N, 1, T, F) -> frame-level activations (N, T', d)
  nn::Tensor<Scalar> forward(const nn::Tensor<Scalar>& x, nn::Phase phase) {
    nn::check_shape(x.rank() == 4 && x.dim(1) == 1, "embedding input (N,1,T,F)");
    auto y = stem_relu_.forward(
        stem_bn_.forward(stem_conv_.forward(x, phase), phase), phase);
    for (auto& block : blocks_) y = block->forward(y, phase);

    const int n = y.dim(0), c = y.dim(1), tp = y.dim(2), fp = y.dim(3);
    cached_freq_bins_ = fp;
    nn::Tensor<Scalar> frames({n, tp, c});
    for (int i = 0; i < n; ++i)
      for (int t = 0; t < tp; ++t)
        for (int ch = 0; ch < c; ++ch) {
          Scalar acc = 0;
          for (int f = 0; f < fp; ++f) acc += y.at(i, ch, t, f);
          frames[(static_cast<std::int64_t>(i) * tp + t) * c + ch] =
              acc / static_cast<Scalar>(fp);
        }
    return frames;
  }

  nn::Tensor<Scalar> backward(const nn::Tensor<Scalar>& gframes) {
    const int n = gframes.dim(0), tp = gframes.dim(1), c = gframes.dim(2);
    const int fp = cached_freq_bins_;
    require(fp > 0, ErrorKind::kBackwardBeforeForward, "resnet backward");
    nn::Tensor<Scalar> g({n, c, tp, fp});
    for (int i = 0; i < n; ++i)
      for (int t = 0; t < tp; ++t)
        for (int ch = 0; ch < c; ++ch) {
          const Scalar v =
              gframes[(static_cast<std::int64_t>(i) * tp + t) * c + ch] /
              static_cast<Scalar>(fp);
          for (int f = 0; f < fp; ++f) g.at(i, ch, t, f) = v;
        }
    for (auto it = blocks_.rbegin(); it != blocks_.rend(); ++it)
      g = (*it)->backward(g);
    g = stem_relu_.backward(g);
    g = stem_bn_.backward(g);
    return stem_conv_.backward(g);
  }

  void collect_params(std::vector<nn::Param<Scalar>*>& out) {
    stem_conv_.collect_params(out);
    stem_bn_.collect_params(out);
    for (auto& b : blocks_) b->collect_params(out);
  }

  void collect_buffers(
      std::vector<std::pair<std::string, nn::Tensor<Scalar>*>>& out) {
    stem_bn_.collect_buffers(out);
    for (auto& b : blocks_) b->collect_buffers(out);
  }

 private:
  nn::Conv2d<Scalar> stem_conv_;
  nn::BatchNorm2d<Scalar> stem_bn_;
  nn::ReLU<Scalar> stem_relu_;
  std::vector<std::unique_ptr<BasicBlock<Scalar>>> blocks_;
  int cached_freq_bins_ = 0;
};

template <typename Scalar>
class SpoofModel {
 public:
  SpoofModel(ModelConfig cfg, std::uint64_t seed)
      : cfg_(normalize(std::move(cfg))), rng_(seed), embed_(cfg_, rng_),
        pool_(cfg_.pooling, rng_),
        fc1_("cls.fc1", cfg_.pooling.output_dim(), cfg_.fc1_dim, rng_),
        fc2_("cls.fc2", cfg_.fc1_dim, cfg_.fc2_dim, rng_),
        out_("cls.out", cfg_.fc2_dim, cfg_.num_classes, rng_) {}

  const ModelConfig& config() const { return cfg_; }

  // (N, 1, T, F) -> (N, 2) class probabilities.
  nn::Tensor<Scalar> forward(const nn::Tensor<Scalar>& chunks, StitchMode mode,
                             nn::Phase phase) {
    return softmax_.forward(logits(chunks, mode, phase), phase);
  }

  // Pre-softmax logits; training reads these and pairs them with the
  // focal-loss gradient.
  nn::Tensor<Scalar> logits(const nn::Tensor<Scalar>& chunks, StitchMode mode,
                            nn::Phase phase) {
    require(!(mode == StitchMode::kStitched && phase == nn::Phase::kTrain),
            ErrorKind::kStitchedTrainForbidden,
            "stitched mode is inference-only");
    const auto pooled = pool_batch(embed_.forward(chunks, phase), phase);
    auto h = mish1_.forward(fc1_.forward(pooled, phase), phase);
    if (mode == StitchMode::kNormal) {
      h = fc2_.forward(h, phase);
      if (!cfg_.fc2_identity_activation) h = mish2_.forward(h, phase);
    }
    return out_.forward(h, phase);
  }

  // Backward for the normal training path, starting from the gradient
  // with respect to the logits. Returns the gradient with respect to the
  // input chunks.
  nn::Tensor<Scalar> backward_from_logits(const nn::Tensor<Scalar>& glogits) {
    auto g = out_.backward(glogits);
    if (!cfg_.fc2_identity_activation) g = mish2_.backward(g);
    g = fc2_.backward(g);
    g = fc1_.backward(mish1_.backward(g));
    return embed_.backward(pool_batch_backward(g));
  }

  // Utterance-level embedding: pool(resnet(x)) ahead of the classifier.
  VectorX<Scalar> embed(const MatrixX<Scalar>& chunk) {
    nn::Tensor<Scalar> x({1, 1, static_cast<int>(chunk.rows()),
                          static_cast<int>(chunk.cols())});
    for (Eigen::Index r = 0; r < chunk.rows(); ++r)
      for (Eigen::Index c = 0; c < chunk.cols(); ++c)
        x[r * chunk.cols() + c] = static_cast<Scalar>(chunk(r, c));
    const auto frames = embed_.forward(x, nn::Phase::kInfer);
    const int tp = frames.dim(1), d = frames.dim(2);
    MatrixX<Scalar> fm(tp, d);
    for (int t = 0; t < tp; ++t)
      for (int j = 0; j < d; ++j) fm(t, j) = frames[static_cast<std::int64_t>(t) * d + j];
    pooling::PoolingCache<Scalar> cache;
    return pool_.forward(fm, cache);
  }

  std::vector<nn::Param<Scalar>*> params() {
    std::vector<nn::Param<Scalar>*> out;
    embed_.collect_params(out);
    pool_.collect_params(out);
    fc1_.collect_params(out);
    fc2_.collect_params(out);
    out_.collect_params(out);
    return out;
  }

  std::vector<std::pair<std::string, nn::Tensor<Scalar>*>> buffers() {
    std::vector<std::pair<std::string, nn::Tensor<Scalar>*>> out;
    embed_.collect_buffers(out);
    return out;
  }

  std::int64_t parameter_count() {
    std::int64_t n = 0;
    for (auto* p : params()) n += p->value.size();
    return n;
  }

  nn::Dense<Scalar>& fc1() { return fc1_; }
  nn::Dense<Scalar>& fc2() { return fc2_; }
  nn::Dense<Scalar>& output_layer() { return out_; }

 private:
  static ModelConfig normalize(ModelConfig cfg) {
    cfg.pooling.input_dim = cfg.widths[3];
    cfg.validate();
    cfg.pooling.validate();
    return cfg;
  }

  nn::Tensor<Scalar> pool_batch(const nn::Tensor<Scalar>& frames, nn::Phase phase) {
    const int n = frames.dim(0), tp = frames.dim(1), d = frames.dim(2);
    const int p = cfg_.pooling.output_dim();
    nn::Tensor<Scalar> pooled({n, p});
    if (phase == nn::Phase::kTrain) {
      pool_caches_.assign(static_cast<std::size_t>(n), {});
      cached_frames_shape_ = frames.shape();
    }
    pooling::PoolingCache<Scalar> scratch;
    for (int i = 0; i < n; ++i) {
      MatrixX<Scalar> fm(tp, d);
      for (int t = 0; t < tp; ++t)
        for (int j = 0; j < d; ++j)
          fm(t, j) = frames[(static_cast<std::int64_t>(i) * tp + t) * d + j];
      auto& cache = phase == nn::Phase::kTrain
                        ? pool_caches_[static_cast<std::size_t>(i)]
                        : scratch;
      const VectorX<Scalar> v = pool_.forward(fm, cache);
      for (int j = 0; j < p; ++j) pooled.at(i, j) = v[j];
    }
    return pooled;
  }

  nn::Tensor<Scalar> pool_batch_backward(const nn::Tensor<Scalar>& gpooled) {
    require(!pool_caches_.empty(), ErrorKind::kBackwardBeforeForward,
            "pooling backward");
    const int n = gpooled.dim(0);
    const int p = cfg_.pooling.output_dim();
    nn::Tensor<Scalar> gframes(cached_frames_shape_);
    const int tp = gframes.dim(1), d = gframes.dim(2);
    for (int i = 0; i < n; ++i) {
      VectorX<Scalar> g(p);
      for (int j = 0; j < p; ++j) g[j] = gpooled.at(i, j);
      const MatrixX<Scalar> gf =
          pool_.backward(pool_caches_[static_cast<std::size_t>(i)], g);
      for (int t = 0; t < tp; ++t)
        for (int j = 0; j < d; ++j)
          gframes[(static_cast<std::int64_t>(i) * tp + t) * d + j] = gf(t, j);
    }
    return gframes;
  }

  ModelConfig cfg_;
  Rng rng_;
  ResNet34<Scalar> embed_;
  pooling::PoolingLayer<Scalar> pool_;
  nn::Dense<Scalar> fc1_, fc2_, out_;
  nn::Mish<Scalar> mish1_, mish2_;
  nn::Softmax<Scalar> softmax_;
  std::vector<pooling::PoolingCache<Scalar>> pool_caches_;
  std::vector<int> cached_frames_shape_;
};

}  // namespace model
}  // namespace stitchguard

#endif  // STITCHGUARD_MODEL_MODEL_HPP_
