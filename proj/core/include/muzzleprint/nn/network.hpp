/* Copyright 2026 The Muzzleprint Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef MUZZLEPRINT_NN_NETWORK_HPP_
#define MUZZLEPRINT_NN_NETWORK_HPP_

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "muzzleprint/nn/ops.hpp"
#include "muzzleprint/nn/tensor.hpp"
#include "muzzleprint/random.hpp"

namespace muzzleprint::nn {

inline constexpr std::size_t kNumBlocks = 4;

// Four conv blocks, dropout, one fully connected layer and softmax. Blocks
// 1-3 pool 3x3 stride 2 'same'; block 4 pools 1 x final_pool_w, stride 1,
// no padding.
struct Architecture {
  std::size_t input_h = 66;
  std::size_t input_w = 100;
  std::array<std::size_t, kNumBlocks> channels{40, 80, 160, 160};
  std::size_t kernel = 3;
  std::size_t final_pool_w = 13;
  double dropout = 0.2;
  std::size_t num_classes = 7;

  bool operator==(const Architecture&) const = default;
};

struct LayerLearnables {
  std::string name;
  std::size_t count;
};

struct LearnableReport {
  std::vector<LayerLearnables> layers;
  std::size_t total = 0;
};

// Per-sample activation shapes: input, after each block, flatten, logits.
std::vector<Shape> shape_chain(const Architecture& arch);

// Learnables per conv, batch norm and fc layer, in network order.
LearnableReport count_learnables(const Architecture& arch);

// Per-pixel mean over a set of equally shaped single-sample images.
template <typename T>
Tensor<T> zerocenter_fit(const std::vector<const Tensor<T>*>& images);
template <typename T>
Tensor<T> zerocenter_apply(const Tensor<T>& images, const Tensor<T>& mean);

template <typename T>
class Network {
 public:
  // Glorot-uniform conv and fc weights, zero biases, unit BN scale. The
  // shape chain is validated here; kConfiguration if it does not close.
  Network(const Architecture& arch, Rng& rng);
  // Zero-valued parameters with the given architecture.
  explicit Network(const Architecture& arch);

  const Architecture& architecture() const { return arch_; }

  // Logits for a batch Shape{n, input_h, input_w, 1}. Train mode keeps the
  // activations needed by backward().
  Tensor<T> forward(const Tensor<T>& x, Mode mode, Rng* rng = nullptr);
  // Accumulates nothing; overwrites gradients() from d loss / d logits.
  void backward(const Tensor<T>& grad_logits);

  // Eval-mode class probabilities, one row per sample.
  Tensor<T> predict(const Tensor<T>& x);

  // Learnables in declared order: per block conv weights, conv bias,
  // BN scale, BN offset; then fc weights, fc bias.
  std::vector<Tensor<T>*> parameters();
  std::vector<const Tensor<T>*> parameters() const;
  std::vector<std::string> parameter_names() const;
  std::vector<const Tensor<T>*> gradients() const;

  // Everything a checkpoint stores: parameters, then per-block running
  // mean and variance, then the zerocenter mean image.
  std::vector<Tensor<T>*> state();
  std::vector<const Tensor<T>*> state() const;
  std::vector<std::string> state_names() const;

  Tensor<T>& mean_image() { return mean_image_; }
  const Tensor<T>& mean_image() const { return mean_image_; }
  BatchNormParams<T>& batchnorm(std::size_t block) { return bn_[block]; }

 private:
  struct BlockCache {
    Tensor<T> conv_in;
    BatchNormCache<T> bn;
    Tensor<T> bn_out;
    Shape pool_in;
    std::vector<std::size_t> argmax;
  };

  void init_shapes();
  PoolSpec pool_spec(std::size_t block) const;

  Architecture arch_;
  std::array<Tensor<T>, kNumBlocks> conv_w_;
  std::array<Tensor<T>, kNumBlocks> conv_b_;
  std::array<BatchNormParams<T>, kNumBlocks> bn_;
  Tensor<T> fc_w_;
  Tensor<T> fc_b_;
  Tensor<T> mean_image_;

  std::array<BlockCache, kNumBlocks> cache_;
  std::vector<T> dropout_mask_;
  Tensor<T> fc_in_;
  bool has_cache_ = false;

  std::array<Tensor<T>, kNumBlocks> grad_conv_w_;
  std::array<Tensor<T>, kNumBlocks> grad_conv_b_;
  std::array<Tensor<T>, kNumBlocks> grad_bn_scale_;
  std::array<Tensor<T>, kNumBlocks> grad_bn_offset_;
  Tensor<T> grad_fc_w_;
  Tensor<T> grad_fc_b_;
};

}  // namespace muzzleprint::nn

#endif  // MUZZLEPRINT_NN_NETWORK_HPP_
