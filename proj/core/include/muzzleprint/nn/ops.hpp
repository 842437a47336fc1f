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

#ifndef MUZZLEPRINT_NN_OPS_HPP_
#define MUZZLEPRINT_NN_OPS_HPP_

#include <cstddef>
#include <vector>

#include "muzzleprint/nn/tensor.hpp"
#include "muzzleprint/random.hpp"

namespace muzzleprint::nn {

enum class Mode { kTrain, kEval };

// floor((n + 2p - f) / s + 1); kConfiguration when not positive.
std::size_t output_dim(std::size_t n, std::size_t p, std::size_t f, std::size_t s);

struct Padding {
  std::size_t before = 0;
  std::size_t after = 0;
};

// 'same' rule: out = ceil(n / s), total = max((out - 1) s + f - n, 0),
// before = floor(total / 2).
Padding same_padding(std::size_t n, std::size_t f, std::size_t s);

struct Padding2d {
  Padding rows;
  Padding cols;
};

// ---- convolution (cross-correlation, 'same' padding) -----------------------
// weights: Shape{f, f, c_in, k}; bias: Shape{1, 1, 1, k}.

template <typename T>
Tensor<T> conv2d_forward(const Tensor<T>& x, const Tensor<T>& weights,
                         const Tensor<T>& bias, std::size_t stride = 1);

template <typename T>
struct ConvGrads {
  Tensor<T> input;
  Tensor<T> weights;
  Tensor<T> bias;
};

template <typename T>
ConvGrads<T> conv2d_backward(const Tensor<T>& x, const Tensor<T>& weights,
                             const Tensor<T>& grad_out, std::size_t stride = 1);

// ---- ReLU -------------------------------------------------------------------

template <typename T>
Tensor<T> relu_forward(const Tensor<T>& x);
// Gradient passes where x > 0; the subgradient at 0 is taken as 0.
template <typename T>
Tensor<T> relu_backward(const Tensor<T>& x, const Tensor<T>& grad_out);

// ---- batch normalisation ----------------------------------------------------

inline constexpr double kBatchNormEpsilon = 1e-5;
inline constexpr double kBatchNormMomentum = 0.1;

template <typename T>
struct BatchNormParams {
  Tensor<T> scale;         // gamma, Shape{1,1,1,C}
  Tensor<T> offset;        // beta
  Tensor<T> running_mean;
  Tensor<T> running_var;
  double epsilon = kBatchNormEpsilon;
  double momentum = kBatchNormMomentum;

  explicit BatchNormParams(std::size_t channels = 0);
};

template <typename T>
struct BatchNormCache {
  Tensor<T> normalized;           // x-hat
  std::vector<double> inv_std;    // per channel
};

// Train: batch statistics over (n, h, w) per channel (population variance),
// running statistics blended with `momentum`. Eval: running statistics.
template <typename T>
Tensor<T> batchnorm_forward(const Tensor<T>& x, BatchNormParams<T>& params,
                            Mode mode, BatchNormCache<T>* cache = nullptr);

template <typename T>
struct BatchNormGrads {
  Tensor<T> input;
  Tensor<T> scale;
  Tensor<T> offset;
};

// Backward of the Train-mode transform.
template <typename T>
BatchNormGrads<T> batchnorm_backward(const BatchNormParams<T>& params,
                                     const BatchNormCache<T>& cache,
                                     const Tensor<T>& grad_out);

// ---- max pooling ------------------------------------------------------------

struct PoolSpec {
  std::size_t size_h = 3;
  std::size_t size_w = 3;
  std::size_t stride_h = 2;
  std::size_t stride_w = 2;
  bool same = true;         // 'same' padding; otherwise `padding` is used
  Padding2d padding{};
};

Shape pool_output_shape(const Shape& in, const PoolSpec& spec);

// Padded cells never win. `argmax` receives the flat input index chosen for
// each output cell; ties resolve to the first cell in row-major window order.
template <typename T>
Tensor<T> maxpool_forward(const Tensor<T>& x, const PoolSpec& spec,
                          std::vector<std::size_t>* argmax = nullptr);

template <typename T>
Tensor<T> maxpool_backward(const Shape& input_shape,
                           const std::vector<std::size_t>& argmax,
                           const Tensor<T>& grad_out);

// ---- dropout ----------------------------------------------------------------

// Train: zero each unit with probability p and scale survivors by
// 1 / (1 - p); `mask` receives the applied multipliers. Eval: identity.
template <typename T>
Tensor<T> dropout_forward(const Tensor<T>& x, double p, Mode mode, Rng* rng,
                          std::vector<T>* mask = nullptr);

template <typename T>
Tensor<T> dropout_backward(const std::vector<T>& mask, const Tensor<T>& grad_out);

// ---- fully connected --------------------------------------------------------
// x: per-sample flatten of length in; weights: Shape{1, 1, out, in};
// bias: Shape{1, 1, 1, out}. Output Shape{n, 1, 1, out}.

template <typename T>
Tensor<T> fc_forward(const Tensor<T>& x, const Tensor<T>& weights,
                     const Tensor<T>& bias);

template <typename T>
struct FcGrads {
  Tensor<T> input;
  Tensor<T> weights;
  Tensor<T> bias;
};

template <typename T>
FcGrads<T> fc_backward(const Tensor<T>& x, const Tensor<T>& weights,
                       const Tensor<T>& grad_out);

// ---- softmax / loss ---------------------------------------------------------

// Row-wise softmax of Shape{n, 1, 1, k} logits with max subtraction.
template <typename T>
Tensor<T> softmax(const Tensor<T>& logits);

template <typename T>
struct LossResult {
  double loss;            // mean cross-entropy over the batch
  Tensor<T> grad_logits;  // (probs - onehot) / n
};

template <typename T>
LossResult<T> softmax_cross_entropy(const Tensor<T>& logits,
                                    const std::vector<std::size_t>& labels);

// -log(probs[true_class]) for one probability vector.
double cross_entropy(const std::vector<double>& probs, std::size_t true_class);

}  // namespace muzzleprint::nn

#endif  // MUZZLEPRINT_NN_OPS_HPP_
