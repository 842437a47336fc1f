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

#include "muzzleprint/nn/ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include <Eigen/Core>

#include "muzzleprint/error.hpp"

namespace muzzleprint::nn {

namespace {

template <typename T>
using RowMatrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MatrixMap = Eigen::Map<RowMatrix<T>>;
template <typename T>
using ConstMatrixMap = Eigen::Map<const RowMatrix<T>>;

struct ConvGeometry {
  std::size_t n, h, w, c_in;
  std::size_t f, k, stride;
  std::size_t out_h, out_w;
  Padding rows, cols;

  std::size_t patch() const { return f * f * c_in; }
  std::size_t positions() const { return n * out_h * out_w; }
};

template <typename T>
ConvGeometry conv_geometry(const Shape& x, const Tensor<T>& weights,
                           std::size_t stride) {
  const Shape& ws = weights.shape();
  if (ws.n != ws.h) {
    throw Error(ErrorCode::kArgument, "convolution kernel must be square");
  }
  if (ws.w != x.c) {
    throw Error(ErrorCode::kArgument,
                "convolution expects " + std::to_string(ws.w) +
                    " input channels, got " + std::to_string(x.c));
  }
  if (stride == 0) throw Error(ErrorCode::kArgument, "stride must be positive");
  ConvGeometry g{x.n, x.h, x.w, x.c, ws.n, ws.c, stride, 0, 0, {}, {}};
  g.rows = same_padding(x.h, g.f, stride);
  g.cols = same_padding(x.w, g.f, stride);
  g.out_h = (x.h + stride - 1) / stride;
  g.out_w = (x.w + stride - 1) / stride;
  return g;
}

// Patch matrix: one row per output position, columns ordered (kh, kw, c).
template <typename T>
AlignedVector<T> im2col(const Tensor<T>& x, const ConvGeometry& g) {
  AlignedVector<T> cols(g.positions() * g.patch(), T(0));
  const T* src = x.raw();
  T* dst = cols.data();
  for (std::size_t n = 0; n < g.n; ++n) {
    for (std::size_t oh = 0; oh < g.out_h; ++oh) {
      for (std::size_t ow = 0; ow < g.out_w; ++ow) {
        for (std::size_t kh = 0; kh < g.f; ++kh) {
          const auto ih = static_cast<std::ptrdiff_t>(oh * g.stride + kh) -
                          static_cast<std::ptrdiff_t>(g.rows.before);
          for (std::size_t kw = 0; kw < g.f; ++kw) {
            const auto iw = static_cast<std::ptrdiff_t>(ow * g.stride + kw) -
                            static_cast<std::ptrdiff_t>(g.cols.before);
            if (ih >= 0 && iw >= 0 && ih < static_cast<std::ptrdiff_t>(g.h) &&
                iw < static_cast<std::ptrdiff_t>(g.w)) {
              std::memcpy(dst,
                          src + x.offset(n, static_cast<std::size_t>(ih),
                                         static_cast<std::size_t>(iw), 0),
                          g.c_in * sizeof(T));
            }
            dst += g.c_in;
          }
        }
      }
    }
  }
  return cols;
}

template <typename T>
Tensor<T> col2im(const AlignedVector<T>& cols, const ConvGeometry& g) {
  Tensor<T> dx(Shape{g.n, g.h, g.w, g.c_in});
  const T* src = cols.data();
  for (std::size_t n = 0; n < g.n; ++n) {
    for (std::size_t oh = 0; oh < g.out_h; ++oh) {
      for (std::size_t ow = 0; ow < g.out_w; ++ow) {
        for (std::size_t kh = 0; kh < g.f; ++kh) {
          const auto ih = static_cast<std::ptrdiff_t>(oh * g.stride + kh) -
                          static_cast<std::ptrdiff_t>(g.rows.before);
          for (std::size_t kw = 0; kw < g.f; ++kw) {
            const auto iw = static_cast<std::ptrdiff_t>(ow * g.stride + kw) -
                            static_cast<std::ptrdiff_t>(g.cols.before);
            if (ih >= 0 && iw >= 0 && ih < static_cast<std::ptrdiff_t>(g.h) &&
                iw < static_cast<std::ptrdiff_t>(g.w)) {
              T* d = dx.raw() + dx.offset(n, static_cast<std::size_t>(ih),
                                          static_cast<std::size_t>(iw), 0);
              for (std::size_t c = 0; c < g.c_in; ++c) d[c] += src[c];
            }
            src += g.c_in;
          }
        }
      }
    }
  }
  return dx;
}

void check_same_shape(const Shape& a, const Shape& b, const char* what) {
  if (!(a == b)) {
    throw Error(ErrorCode::kArgument, std::string(what) + ": shape " +
                                          to_string(a) + " vs " + to_string(b));
  }
}

}  // namespace

std::size_t output_dim(std::size_t n, std::size_t p, std::size_t f, std::size_t s) {
  if (s == 0) throw Error(ErrorCode::kConfiguration, "stride must be positive");
  if (n + 2 * p < f) {
    throw Error(ErrorCode::kConfiguration,
                "filter " + std::to_string(f) + " larger than padded input " +
                    std::to_string(n + 2 * p));
  }
  return (n + 2 * p - f) / s + 1;
}

Padding same_padding(std::size_t n, std::size_t f, std::size_t s) {
  if (s == 0) throw Error(ErrorCode::kConfiguration, "stride must be positive");
  const std::size_t out = (n + s - 1) / s;
  const std::size_t span = (out - 1) * s + f;
  const std::size_t total = span > n ? span - n : 0;
  return {total / 2, total - total / 2};
}

template <typename T>
Tensor<T> conv2d_forward(const Tensor<T>& x, const Tensor<T>& weights,
                         const Tensor<T>& bias, std::size_t stride) {
  const ConvGeometry g = conv_geometry(x.shape(), weights, stride);
  if (bias.size() != g.k) {
    throw Error(ErrorCode::kArgument, "convolution bias length mismatch");
  }
  const AlignedVector<T> cols = im2col(x, g);
  Tensor<T> out(Shape{g.n, g.out_h, g.out_w, g.k});
  ConstMatrixMap<T> patches(cols.data(), static_cast<Eigen::Index>(g.positions()),
                            static_cast<Eigen::Index>(g.patch()));
  ConstMatrixMap<T> w(weights.raw(), static_cast<Eigen::Index>(g.patch()),
                      static_cast<Eigen::Index>(g.k));
  MatrixMap<T> y(out.raw(), static_cast<Eigen::Index>(g.positions()),
                 static_cast<Eigen::Index>(g.k));
  y.noalias() = patches * w;
  y.rowwise() += Eigen::Map<const Eigen::Matrix<T, 1, Eigen::Dynamic>>(
      bias.raw(), static_cast<Eigen::Index>(g.k));
  return out;
}

template <typename T>
ConvGrads<T> conv2d_backward(const Tensor<T>& x, const Tensor<T>& weights,
                             const Tensor<T>& grad_out, std::size_t stride) {
  const ConvGeometry g = conv_geometry(x.shape(), weights, stride);
  check_same_shape(grad_out.shape(), Shape{g.n, g.out_h, g.out_w, g.k},
                   "conv2d_backward grad_out");
  const AlignedVector<T> cols = im2col(x, g);
  const auto positions = static_cast<Eigen::Index>(g.positions());
  const auto patch = static_cast<Eigen::Index>(g.patch());
  const auto k = static_cast<Eigen::Index>(g.k);

  ConstMatrixMap<T> patches(cols.data(), positions, patch);
  ConstMatrixMap<T> w(weights.raw(), patch, k);
  ConstMatrixMap<T> dy(grad_out.raw(), positions, k);

  ConvGrads<T> grads{Tensor<T>(), Tensor<T>(weights.shape()),
                     Tensor<T>(Shape{1, 1, 1, g.k})};
  MatrixMap<T> dw(grads.weights.raw(), patch, k);
  dw.noalias() = patches.transpose() * dy;
  Eigen::Map<Eigen::Matrix<T, 1, Eigen::Dynamic>> db(grads.bias.raw(), k);
  db = dy.colwise().sum();

  AlignedVector<T> dcols(cols.size());
  MatrixMap<T> dpatches(dcols.data(), positions, patch);
  dpatches.noalias() = dy * w.transpose();
  grads.input = col2im(dcols, g);
  return grads;
}

template <typename T>
Tensor<T> relu_forward(const Tensor<T>& x) {
  Tensor<T> y(x.shape());
  std::transform(x.data().begin(), x.data().end(), y.data().begin(),
                 [](T v) { return v > T(0) ? v : T(0); });
  return y;
}

template <typename T>
Tensor<T> relu_backward(const Tensor<T>& x, const Tensor<T>& grad_out) {
  check_same_shape(x.shape(), grad_out.shape(), "relu_backward");
  Tensor<T> dx(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) {
    dx[i] = x[i] > T(0) ? grad_out[i] : T(0);
  }
  return dx;
}

template <typename T>
BatchNormParams<T>::BatchNormParams(std::size_t channels)
    : scale(Shape{1, 1, 1, channels}, T(1)),
      offset(Shape{1, 1, 1, channels}, T(0)),
      running_mean(Shape{1, 1, 1, channels}, T(0)),
      running_var(Shape{1, 1, 1, channels}, T(1)) {}

template <typename T>
Tensor<T> batchnorm_forward(const Tensor<T>& x, BatchNormParams<T>& params,
                            Mode mode, BatchNormCache<T>* cache) {
  const std::size_t channels = x.shape().c;
  if (params.scale.size() != channels) {
    throw Error(ErrorCode::kArgument, "batch norm channel count mismatch");
  }
  const std::size_t m = x.size() / channels;
  Tensor<T> y(x.shape());

  std::vector<double> mean(channels, 0.0);
  std::vector<double> var(channels, 0.0);
  if (mode == Mode::kTrain) {
    for (std::size_t i = 0; i < m; ++i) {
      const T* row = x.raw() + i * channels;
      for (std::size_t c = 0; c < channels; ++c) mean[c] += row[c];
    }
    for (double& v : mean) v /= static_cast<double>(m);
    for (std::size_t i = 0; i < m; ++i) {
      const T* row = x.raw() + i * channels;
      for (std::size_t c = 0; c < channels; ++c) {
        const double d = row[c] - mean[c];
        var[c] += d * d;
      }
    }
    for (double& v : var) v /= static_cast<double>(m);
    for (std::size_t c = 0; c < channels; ++c) {
      params.running_mean[c] = static_cast<T>(
          (1.0 - params.momentum) * params.running_mean[c] + params.momentum * mean[c]);
      params.running_var[c] = static_cast<T>(
          (1.0 - params.momentum) * params.running_var[c] + params.momentum * var[c]);
    }
  } else {
    for (std::size_t c = 0; c < channels; ++c) {
      mean[c] = params.running_mean[c];
      var[c] = std::max<double>(params.running_var[c], 0.0);
    }
  }

  std::vector<double> inv_std(channels);
  for (std::size_t c = 0; c < channels; ++c) {
    inv_std[c] = 1.0 / std::sqrt(var[c] + params.epsilon);
  }
  if (cache) {
    cache->normalized = Tensor<T>(x.shape());
    cache->inv_std = inv_std;
  }
  for (std::size_t i = 0; i < m; ++i) {
    const T* row = x.raw() + i * channels;
    T* out = y.raw() + i * channels;
    T* norm = cache ? cache->normalized.raw() + i * channels : nullptr;
    for (std::size_t c = 0; c < channels; ++c) {
      const T xhat = static_cast<T>((row[c] - mean[c]) * inv_std[c]);
      if (norm) norm[c] = xhat;
      out[c] = params.scale[c] * xhat + params.offset[c];
    }
  }
  return y;
}

template <typename T>
BatchNormGrads<T> batchnorm_backward(const BatchNormParams<T>& params,
                                     const BatchNormCache<T>& cache,
                                     const Tensor<T>& grad_out) {
  check_same_shape(cache.normalized.shape(), grad_out.shape(), "batchnorm_backward");
  const std::size_t channels = grad_out.shape().c;
  const std::size_t m = grad_out.size() / channels;

  std::vector<double> sum_dy(channels, 0.0);
  std::vector<double> sum_dy_xhat(channels, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const T* dy = grad_out.raw() + i * channels;
    const T* xh = cache.normalized.raw() + i * channels;
    for (std::size_t c = 0; c < channels; ++c) {
      sum_dy[c] += dy[c];
      sum_dy_xhat[c] += static_cast<double>(dy[c]) * xh[c];
    }
  }

  BatchNormGrads<T> g{Tensor<T>(grad_out.shape()), Tensor<T>(params.scale.shape()),
                      Tensor<T>(params.offset.shape())};
  for (std::size_t c = 0; c < channels; ++c) {
    g.scale[c] = static_cast<T>(sum_dy_xhat[c]);
    g.offset[c] = static_cast<T>(sum_dy[c]);
  }
  const double inv_m = 1.0 / static_cast<double>(m);
  for (std::size_t i = 0; i < m; ++i) {
    const T* dy = grad_out.raw() + i * channels;
    const T* xh = cache.normalized.raw() + i * channels;
    T* dx = g.input.raw() + i * channels;
    for (std::size_t c = 0; c < channels; ++c) {
      const double k = params.scale[c] * cache.inv_std[c];
      dx[c] = static_cast<T>(
          k * (dy[c] - inv_m * sum_dy[c] - xh[c] * inv_m * sum_dy_xhat[c]));
    }
  }
  return g;
}

Shape pool_output_shape(const Shape& in, const PoolSpec& spec) {
  if (spec.size_h == 0 || spec.size_w == 0 || spec.stride_h == 0 || spec.stride_w == 0) {
    throw Error(ErrorCode::kConfiguration, "pool size and stride must be positive");
  }
  if (spec.same) {
    return {in.n, (in.h + spec.stride_h - 1) / spec.stride_h,
            (in.w + spec.stride_w - 1) / spec.stride_w, in.c};
  }
  const std::size_t ph = in.h + spec.padding.rows.before + spec.padding.rows.after;
  const std::size_t pw = in.w + spec.padding.cols.before + spec.padding.cols.after;
  if (ph < spec.size_h || pw < spec.size_w) {
    throw Error(ErrorCode::kConfiguration, "pool window larger than padded input");
  }
  return {in.n, (ph - spec.size_h) / spec.stride_h + 1,
          (pw - spec.size_w) / spec.stride_w + 1, in.c};
}

template <typename T>
Tensor<T> maxpool_forward(const Tensor<T>& x, const PoolSpec& spec,
                          std::vector<std::size_t>* argmax) {
  const Shape in = x.shape();
  const Shape out_shape = pool_output_shape(in, spec);
  const Padding2d pad =
      spec.same ? Padding2d{same_padding(in.h, spec.size_h, spec.stride_h),
                            same_padding(in.w, spec.size_w, spec.stride_w)}
                : spec.padding;
  Tensor<T> y(out_shape);
  if (argmax) argmax->assign(y.size(), 0);

  const std::size_t channels = in.c;
  std::vector<T> best(channels);
  std::vector<std::size_t> where(channels);
  for (std::size_t n = 0; n < in.n; ++n) {
    for (std::size_t oh = 0; oh < out_shape.h; ++oh) {
      for (std::size_t ow = 0; ow < out_shape.w; ++ow) {
        std::fill(best.begin(), best.end(), -std::numeric_limits<T>::infinity());
        std::fill(where.begin(), where.end(), std::numeric_limits<std::size_t>::max());
        for (std::size_t kh = 0; kh < spec.size_h; ++kh) {
          const auto ih = static_cast<std::ptrdiff_t>(oh * spec.stride_h + kh) -
                          static_cast<std::ptrdiff_t>(pad.rows.before);
          if (ih < 0 || ih >= static_cast<std::ptrdiff_t>(in.h)) continue;
          for (std::size_t kw = 0; kw < spec.size_w; ++kw) {
            const auto iw = static_cast<std::ptrdiff_t>(ow * spec.stride_w + kw) -
                            static_cast<std::ptrdiff_t>(pad.cols.before);
            if (iw < 0 || iw >= static_cast<std::ptrdiff_t>(in.w)) continue;
            const std::size_t base = x.offset(n, static_cast<std::size_t>(ih),
                                              static_cast<std::size_t>(iw), 0);
            const T* v = x.raw() + base;
            for (std::size_t c = 0; c < channels; ++c) {
              if (v[c] > best[c] || where[c] == std::numeric_limits<std::size_t>::max()) {
                best[c] = v[c];
                where[c] = base + c;
              }
            }
          }
        }
        const std::size_t o = y.offset(n, oh, ow, 0);
        for (std::size_t c = 0; c < channels; ++c) {
          y[o + c] = best[c];
          if (argmax) (*argmax)[o + c] = where[c];
        }
      }
    }
  }
  return y;
}

template <typename T>
Tensor<T> maxpool_backward(const Shape& input_shape,
                           const std::vector<std::size_t>& argmax,
                           const Tensor<T>& grad_out) {
  if (argmax.size() != grad_out.size()) {
    throw Error(ErrorCode::kArgument, "maxpool_backward argmax size mismatch");
  }
  Tensor<T> dx(input_shape);
  for (std::size_t i = 0; i < argmax.size(); ++i) dx[argmax[i]] += grad_out[i];
  return dx;
}

template <typename T>
Tensor<T> dropout_forward(const Tensor<T>& x, double p, Mode mode, Rng* rng,
                          std::vector<T>* mask) {
  if (!(p >= 0.0 && p < 1.0)) {
    throw Error(ErrorCode::kArgument, "dropout probability must be in [0, 1)");
  }
  if (mode == Mode::kEval || p == 0.0) {
    if (mask) mask->assign(x.size(), T(1));
    return x;
  }
  if (!rng) throw Error(ErrorCode::kArgument, "train-mode dropout needs an Rng");
  const T keep_scale = static_cast<T>(1.0 / (1.0 - p));
  std::vector<T> m(x.size());
  for (auto& v : m) v = rng->bernoulli(p) ? T(0) : keep_scale;
  Tensor<T> y(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] * m[i];
  if (mask) *mask = std::move(m);
  return y;
}

template <typename T>
Tensor<T> dropout_backward(const std::vector<T>& mask, const Tensor<T>& grad_out) {
  if (mask.size() != grad_out.size()) {
    throw Error(ErrorCode::kArgument, "dropout_backward mask size mismatch");
  }
  Tensor<T> dx(grad_out.shape());
  for (std::size_t i = 0; i < mask.size(); ++i) dx[i] = grad_out[i] * mask[i];
  return dx;
}

template <typename T>
Tensor<T> fc_forward(const Tensor<T>& x, const Tensor<T>& weights,
                     const Tensor<T>& bias) {
  const std::size_t n = x.shape().n;
  const std::size_t in = x.shape().per_sample();
  const std::size_t out = weights.shape().w;
  if (weights.shape().c != in) {
    throw Error(ErrorCode::kArgument, "fully connected layer expects " +
                                          std::to_string(weights.shape().c) +
                                          " inputs, got " + std::to_string(in));
  }
  if (bias.size() != out) {
    throw Error(ErrorCode::kArgument, "fully connected bias length mismatch");
  }
  Tensor<T> y(Shape{n, 1, 1, out});
  ConstMatrixMap<T> xm(x.raw(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(in));
  ConstMatrixMap<T> wm(weights.raw(), static_cast<Eigen::Index>(out),
                       static_cast<Eigen::Index>(in));
  MatrixMap<T> ym(y.raw(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(out));
  ym.noalias() = xm * wm.transpose();
  ym.rowwise() += Eigen::Map<const Eigen::Matrix<T, 1, Eigen::Dynamic>>(
      bias.raw(), static_cast<Eigen::Index>(out));
  return y;
}

template <typename T>
FcGrads<T> fc_backward(const Tensor<T>& x, const Tensor<T>& weights,
                       const Tensor<T>& grad_out) {
  const auto n = static_cast<Eigen::Index>(x.shape().n);
  const auto in = static_cast<Eigen::Index>(x.shape().per_sample());
  const auto out = static_cast<Eigen::Index>(weights.shape().w);
  if (grad_out.size() != static_cast<std::size_t>(n * out)) {
    throw Error(ErrorCode::kArgument, "fc_backward grad_out size mismatch");
  }
  FcGrads<T> g{Tensor<T>(x.shape()), Tensor<T>(weights.shape()),
               Tensor<T>(Shape{1, 1, 1, static_cast<std::size_t>(out)})};
  ConstMatrixMap<T> xm(x.raw(), n, in);
  ConstMatrixMap<T> wm(weights.raw(), out, in);
  ConstMatrixMap<T> dy(grad_out.raw(), n, out);
  MatrixMap<T> dx(g.input.raw(), n, in);
  MatrixMap<T> dw(g.weights.raw(), out, in);
  dx.noalias() = dy * wm;
  dw.noalias() = dy.transpose() * xm;
  Eigen::Map<Eigen::Matrix<T, 1, Eigen::Dynamic>> db(g.bias.raw(), out);
  db = dy.colwise().sum();
  return g;
}

template <typename T>
Tensor<T> softmax(const Tensor<T>& logits) {
  const std::size_t n = logits.shape().n;
  const std::size_t k = logits.shape().per_sample();
  Tensor<T> p(logits.shape());
  for (std::size_t i = 0; i < n; ++i) {
    const T* z = logits.raw() + i * k;
    T* out = p.raw() + i * k;
    const double top = *std::max_element(z, z + k);
    double total = 0.0;
    for (std::size_t j = 0; j < k; ++j) total += std::exp(static_cast<double>(z[j]) - top);
    for (std::size_t j = 0; j < k; ++j) {
      out[j] = static_cast<T>(std::exp(static_cast<double>(z[j]) - top) / total);
    }
  }
  return p;
}

template <typename T>
LossResult<T> softmax_cross_entropy(const Tensor<T>& logits,
                                    const std::vector<std::size_t>& labels) {
  const std::size_t n = logits.shape().n;
  const std::size_t k = logits.shape().per_sample();
  if (labels.size() != n) {
    throw Error(ErrorCode::kArgument, "label count does not match batch size");
  }
  LossResult<T> r{0.0, Tensor<T>(logits.shape())};
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] >= k) throw Error(ErrorCode::kArgument, "label out of range");
    const T* z = logits.raw() + i * k;
    const double top = *std::max_element(z, z + k);
    double total = 0.0;
    for (std::size_t j = 0; j < k; ++j) total += std::exp(static_cast<double>(z[j]) - top);
    const double log_total = std::log(total) + top;
    r.loss += log_total - static_cast<double>(z[labels[i]]);
    T* g = r.grad_logits.raw() + i * k;
    for (std::size_t j = 0; j < k; ++j) {
      const double prob = std::exp(static_cast<double>(z[j]) - log_total);
      g[j] = static_cast<T>((prob - (j == labels[i] ? 1.0 : 0.0)) / static_cast<double>(n));
    }
  }
  r.loss /= static_cast<double>(n);
  return r;
}

double cross_entropy(const std::vector<double>& probs, std::size_t true_class) {
  if (true_class >= probs.size()) {
    throw Error(ErrorCode::kArgument, "true class out of range");
  }
  const double p = probs[true_class];
  if (!(p > 0.0)) return std::numeric_limits<double>::infinity();
  return -std::log(p);
}

#define MUZZLEPRINT_INSTANTIATE_OPS(T)                                              \
  template Tensor<T> conv2d_forward(const Tensor<T>&, const Tensor<T>&,             \
                                    const Tensor<T>&, std::size_t);                 \
  template ConvGrads<T> conv2d_backward(const Tensor<T>&, const Tensor<T>&,         \
                                        const Tensor<T>&, std::size_t);             \
  template Tensor<T> relu_forward(const Tensor<T>&);                                \
  template Tensor<T> relu_backward(const Tensor<T>&, const Tensor<T>&);             \
  template struct BatchNormParams<T>;                                               \
  template Tensor<T> batchnorm_forward(const Tensor<T>&, BatchNormParams<T>&, Mode, \
                                       BatchNormCache<T>*);                         \
  template BatchNormGrads<T> batchnorm_backward(                                    \
      const BatchNormParams<T>&, const BatchNormCache<T>&, const Tensor<T>&);       \
  template Tensor<T> maxpool_forward(const Tensor<T>&, const PoolSpec&,             \
                                     std::vector<std::size_t>*);                    \
  template Tensor<T> maxpool_backward(const Shape&, const std::vector<std::size_t>&, \
                                      const Tensor<T>&);                            \
  template Tensor<T> dropout_forward(const Tensor<T>&, double, Mode, Rng*,          \
                                     std::vector<T>*);                              \
  template Tensor<T> dropout_backward(const std::vector<T>&, const Tensor<T>&);     \
  template Tensor<T> fc_forward(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&); \
  template FcGrads<T> fc_backward(const Tensor<T>&, const Tensor<T>&,               \
                                  const Tensor<T>&);                                \
  template Tensor<T> softmax(const Tensor<T>&);                                     \
  template LossResult<T> softmax_cross_entropy(const Tensor<T>&,                    \
                                               const std::vector<std::size_t>&);

MUZZLEPRINT_INSTANTIATE_OPS(float)
MUZZLEPRINT_INSTANTIATE_OPS(double)

#undef MUZZLEPRINT_INSTANTIATE_OPS

}  // namespace muzzleprint::nn
