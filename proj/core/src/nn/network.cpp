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

#include "muzzleprint/nn/network.hpp"

#include <cmath>

#include "muzzleprint/error.hpp"

namespace muzzleprint::nn {

namespace {

PoolSpec block_pool(const Architecture& arch, std::size_t block) {
  if (block + 1 < kNumBlocks) return PoolSpec{};
  PoolSpec last;
  last.size_h = 1;
  last.size_w = arch.final_pool_w;
  last.stride_h = 1;
  last.stride_w = 1;
  last.same = false;
  return last;
}

void validate(const Architecture& arch) {
  if (arch.input_h == 0 || arch.input_w == 0 || arch.kernel == 0 ||
      arch.final_pool_w == 0) {
    throw Error(ErrorCode::kConfiguration, "architecture dimensions must be positive");
  }
  for (std::size_t c : arch.channels) {
    if (c == 0) throw Error(ErrorCode::kConfiguration, "channel counts must be positive");
  }
  if (arch.num_classes < 2) {
    throw Error(ErrorCode::kConfiguration, "need at least two classes");
  }
  if (!(arch.dropout >= 0.0 && arch.dropout < 1.0)) {
    throw Error(ErrorCode::kConfiguration, "dropout must be in [0, 1)");
  }
}

template <typename T>
void glorot_uniform(Tensor<T>& t, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (auto& v : t.data()) v = static_cast<T>(rng.uniform(-limit, limit));
}

}  // namespace

std::vector<Shape> shape_chain(const Architecture& arch) {
  validate(arch);
  std::vector<Shape> chain;
  Shape s{1, arch.input_h, arch.input_w, 1};
  chain.push_back(s);
  for (std::size_t b = 0; b < kNumBlocks; ++b) {
    s.c = arch.channels[b];
    s = pool_output_shape(s, block_pool(arch, b));
    chain.push_back(s);
  }
  chain.push_back(Shape{1, 1, 1, s.per_sample()});
  chain.push_back(Shape{1, 1, 1, arch.num_classes});
  return chain;
}

LearnableReport count_learnables(const Architecture& arch) {
  const std::vector<Shape> chain = shape_chain(arch);
  LearnableReport report;
  std::size_t c_in = 1;
  for (std::size_t b = 0; b < kNumBlocks; ++b) {
    const std::size_t k = arch.channels[b];
    const std::string idx = std::to_string(b + 1);
    report.layers.push_back({"conv" + idx, arch.kernel * arch.kernel * c_in * k + k});
    report.layers.push_back({"batchnorm" + idx, 2 * k});
    c_in = k;
  }
  const std::size_t flat = chain[kNumBlocks + 1].c;
  report.layers.push_back({"fc", arch.num_classes * flat + arch.num_classes});
  for (const auto& l : report.layers) report.total += l.count;
  return report;
}

template <typename T>
Tensor<T> zerocenter_fit(const std::vector<const Tensor<T>*>& images) {
  if (images.empty()) throw Error(ErrorCode::kArgument, "no images to fit");
  Shape s = images.front()->shape();
  s.n = 1;
  std::vector<double> sum(s.count(), 0.0);
  for (const Tensor<T>* img : images) {
    if (!(img->shape() == s)) {
      throw Error(ErrorCode::kArgument, "zerocenter images must share one shape");
    }
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += (*img)[i];
  }
  Tensor<T> mean(s);
  for (std::size_t i = 0; i < sum.size(); ++i) {
    mean[i] = static_cast<T>(sum[i] / static_cast<double>(images.size()));
  }
  return mean;
}

template <typename T>
Tensor<T> zerocenter_apply(const Tensor<T>& images, const Tensor<T>& mean) {
  const std::size_t per = mean.size();
  if (images.shape().per_sample() != per) {
    throw Error(ErrorCode::kArgument, "zerocenter mean does not match image shape");
  }
  Tensor<T> out(images.shape());
  for (std::size_t i = 0; i < images.size(); ++i) out[i] = images[i] - mean[i % per];
  return out;
}

template <typename T>
Network<T>::Network(const Architecture& arch) : arch_(arch) {
  init_shapes();
}

template <typename T>
Network<T>::Network(const Architecture& arch, Rng& rng) : arch_(arch) {
  init_shapes();
  std::size_t c_in = 1;
  const std::size_t f = arch_.kernel;
  for (std::size_t b = 0; b < kNumBlocks; ++b) {
    glorot_uniform(conv_w_[b], f * f * c_in, f * f * arch_.channels[b], rng);
    c_in = arch_.channels[b];
  }
  glorot_uniform(fc_w_, fc_w_.shape().c, arch_.num_classes, rng);
}

template <typename T>
void Network<T>::init_shapes() {
  const std::vector<Shape> chain = shape_chain(arch_);
  std::size_t c_in = 1;
  const std::size_t f = arch_.kernel;
  for (std::size_t b = 0; b < kNumBlocks; ++b) {
    const std::size_t k = arch_.channels[b];
    conv_w_[b] = Tensor<T>(Shape{f, f, c_in, k});
    conv_b_[b] = Tensor<T>(Shape{1, 1, 1, k});
    bn_[b] = BatchNormParams<T>(k);
    grad_conv_w_[b] = Tensor<T>(conv_w_[b].shape());
    grad_conv_b_[b] = Tensor<T>(conv_b_[b].shape());
    grad_bn_scale_[b] = Tensor<T>(Shape{1, 1, 1, k});
    grad_bn_offset_[b] = Tensor<T>(Shape{1, 1, 1, k});
    c_in = k;
  }
  const std::size_t flat = chain[kNumBlocks + 1].c;
  fc_w_ = Tensor<T>(Shape{1, 1, arch_.num_classes, flat});
  fc_b_ = Tensor<T>(Shape{1, 1, 1, arch_.num_classes});
  grad_fc_w_ = Tensor<T>(fc_w_.shape());
  grad_fc_b_ = Tensor<T>(fc_b_.shape());
  mean_image_ = Tensor<T>(chain.front());
}

template <typename T>
PoolSpec Network<T>::pool_spec(std::size_t block) const {
  return block_pool(arch_, block);
}

template <typename T>
Tensor<T> Network<T>::forward(const Tensor<T>& x, Mode mode, Rng* rng) {
  const Shape& s = x.shape();
  if (s.h != arch_.input_h || s.w != arch_.input_w || s.c != 1 || s.n == 0) {
    throw Error(ErrorCode::kArgument, "network expects n x " +
                                          std::to_string(arch_.input_h) + " x " +
                                          std::to_string(arch_.input_w) +
                                          " x 1 input, got " + to_string(s));
  }
  const bool train = mode == Mode::kTrain;
  Tensor<T> a = zerocenter_apply(x, mean_image_);
  for (std::size_t b = 0; b < kNumBlocks; ++b) {
    BlockCache& c = cache_[b];
    Tensor<T> z = conv2d_forward(a, conv_w_[b], conv_b_[b], 1);
    Tensor<T> n = batchnorm_forward(z, bn_[b], mode, train ? &c.bn : nullptr);
    Tensor<T> r = relu_forward(n);
    if (train) {
      c.conv_in = std::move(a);
      c.bn_out = std::move(n);
      c.pool_in = r.shape();
    }
    a = maxpool_forward(r, pool_spec(b), train ? &c.argmax : nullptr);
  }
  Tensor<T> d = dropout_forward(a, arch_.dropout, mode, rng, train ? &dropout_mask_ : nullptr);
  Tensor<T> logits = fc_forward(d, fc_w_, fc_b_);
  if (train) {
    fc_in_ = std::move(d);
    has_cache_ = true;
  } else {
    has_cache_ = false;
  }
  return logits;
}

template <typename T>
void Network<T>::backward(const Tensor<T>& grad_logits) {
  if (!has_cache_) {
    throw Error(ErrorCode::kArgument, "backward requires a preceding train-mode forward");
  }
  FcGrads<T> fc = fc_backward(fc_in_, fc_w_, grad_logits);
  grad_fc_w_ = std::move(fc.weights);
  grad_fc_b_ = std::move(fc.bias);
  Tensor<T> g = dropout_backward(dropout_mask_, fc.input);
  for (std::size_t b = kNumBlocks; b-- > 0;) {
    BlockCache& c = cache_[b];
    g = maxpool_backward(c.pool_in, c.argmax, g);
    g = relu_backward(c.bn_out, g);
    BatchNormGrads<T> bn = batchnorm_backward(bn_[b], c.bn, g);
    grad_bn_scale_[b] = std::move(bn.scale);
    grad_bn_offset_[b] = std::move(bn.offset);
    ConvGrads<T> conv = conv2d_backward(c.conv_in, conv_w_[b], bn.input, 1);
    grad_conv_w_[b] = std::move(conv.weights);
    grad_conv_b_[b] = std::move(conv.bias);
    if (b > 0) g = std::move(conv.input);
  }
}

template <typename T>
Tensor<T> Network<T>::predict(const Tensor<T>& x) {
  return softmax(forward(x, Mode::kEval));
}

template <typename T>
std::vector<Tensor<T>*> Network<T>::parameters() {
  std::vector<Tensor<T>*> p;
  for (std::size_t b = 0; b < kNumBlocks; ++b) {
    p.push_back(&conv_w_[b]);
    p.push_back(&conv_b_[b]);
    p.push_back(&bn_[b].scale);
    p.push_back(&bn_[b].offset);
  }
  p.push_back(&fc_w_);
  p.push_back(&fc_b_);
  return p;
}

template <typename T>
std::vector<const Tensor<T>*> Network<T>::parameters() const {
  auto p = const_cast<Network*>(this)->parameters();
  return {p.begin(), p.end()};
}

template <typename T>
std::vector<std::string> Network<T>::parameter_names() const {
  std::vector<std::string> names;
  for (std::size_t b = 0; b < kNumBlocks; ++b) {
    const std::string idx = std::to_string(b + 1);
    names.push_back("conv" + idx + ".weights");
    names.push_back("conv" + idx + ".bias");
    names.push_back("batchnorm" + idx + ".scale");
    names.push_back("batchnorm" + idx + ".offset");
  }
  names.push_back("fc.weights");
  names.push_back("fc.bias");
  return names;
}

template <typename T>
std::vector<const Tensor<T>*> Network<T>::gradients() const {
  std::vector<const Tensor<T>*> g;
  for (std::size_t b = 0; b < kNumBlocks; ++b) {
    g.push_back(&grad_conv_w_[b]);
    g.push_back(&grad_conv_b_[b]);
    g.push_back(&grad_bn_scale_[b]);
    g.push_back(&grad_bn_offset_[b]);
  }
  g.push_back(&grad_fc_w_);
  g.push_back(&grad_fc_b_);
  return g;
}

template <typename T>
std::vector<Tensor<T>*> Network<T>::state() {
  std::vector<Tensor<T>*> s = parameters();
  for (std::size_t b = 0; b < kNumBlocks; ++b) {
    s.push_back(&bn_[b].running_mean);
    s.push_back(&bn_[b].running_var);
  }
  s.push_back(&mean_image_);
  return s;
}

template <typename T>
std::vector<const Tensor<T>*> Network<T>::state() const {
  auto s = const_cast<Network*>(this)->state();
  return {s.begin(), s.end()};
}

template <typename T>
std::vector<std::string> Network<T>::state_names() const {
  std::vector<std::string> names = parameter_names();
  for (std::size_t b = 0; b < kNumBlocks; ++b) {
    const std::string idx = std::to_string(b + 1);
    names.push_back("batchnorm" + idx + ".running_mean");
    names.push_back("batchnorm" + idx + ".running_var");
  }
  names.push_back("input.mean_image");
  return names;
}

template class Network<float>;
template class Network<double>;
template Tensor<float> zerocenter_fit(const std::vector<const Tensor<float>*>&);
template Tensor<double> zerocenter_fit(const std::vector<const Tensor<double>*>&);
template Tensor<float> zerocenter_apply(const Tensor<float>&, const Tensor<float>&);
template Tensor<double> zerocenter_apply(const Tensor<double>&, const Tensor<double>&);

}  // namespace muzzleprint::nn
