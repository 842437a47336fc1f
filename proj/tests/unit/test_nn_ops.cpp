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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "gradcheck.hpp"
#include "gradient_suite.hpp"
#include "muzzleprint/error.hpp"
#include "muzzleprint/nn/ops.hpp"

namespace muzzleprint::nn {
namespace {

using testing::random_tensor;

// Count window placements directly instead of using the closed form.
std::optional<std::size_t> enumerate_outputs(std::size_t n, std::size_t p, std::size_t f,
                                             std::size_t s) {
  std::size_t count = 0;
  for (std::size_t start = 0; start + f <= n + 2 * p; start += s) ++count;
  if (count == 0) return std::nullopt;
  return count;
}

// Direct cross-correlation with explicit zero padding.
template <typename T>
Tensor<T> naive_conv(const Tensor<T>& x, const Tensor<T>& w, const Tensor<T>& b,
                     std::size_t stride) {
  const std::size_t f = w.shape().n, k = w.shape().c;
  const Padding ph = same_padding(x.shape().h, f, stride);
  const Padding pw = same_padding(x.shape().w, f, stride);
  const std::size_t oh = (x.shape().h + stride - 1) / stride;
  const std::size_t ow = (x.shape().w + stride - 1) / stride;
  Tensor<T> out(Shape{x.shape().n, oh, ow, k});
  for (std::size_t n = 0; n < x.shape().n; ++n)
    for (std::size_t i = 0; i < oh; ++i)
      for (std::size_t j = 0; j < ow; ++j)
        for (std::size_t o = 0; o < k; ++o) {
          double acc = b[o];
          for (std::size_t di = 0; di < f; ++di)
            for (std::size_t dj = 0; dj < f; ++dj) {
              const long r = static_cast<long>(i * stride + di) - static_cast<long>(ph.before);
              const long c = static_cast<long>(j * stride + dj) - static_cast<long>(pw.before);
              if (r < 0 || c < 0 || r >= static_cast<long>(x.shape().h) ||
                  c >= static_cast<long>(x.shape().w))
                continue;
              for (std::size_t ci = 0; ci < x.shape().c; ++ci) {
                acc += static_cast<double>(x.at(n, r, c, ci)) * w.at(di, dj, ci, o);
              }
            }
          out.at(n, i, j, o) = static_cast<T>(acc);
        }
  return out;
}

TEST(OutputDim, WorkedValues) {
  for (std::size_t n = 1; n < 20; ++n) EXPECT_EQ(output_dim(n, 0, 1, 1), n);
  EXPECT_EQ(output_dim(66, 1, 3, 2), 33u);
  EXPECT_EQ(output_dim(13, 0, 13, 1), 1u);
  EXPECT_THROW(output_dim(2, 0, 3, 1), Error);
  EXPECT_THROW(output_dim(5, 0, 3, 0), Error);
}

TEST(OutputDim, ExhaustiveAgainstEnumeration) {
  for (std::size_t n = 1; n <= 64; ++n)
    for (std::size_t f = 1; f <= 7; ++f)
      for (std::size_t s = 1; s <= 3; ++s)
        for (std::size_t p = 0; p <= 3; ++p) {
          const auto expect = enumerate_outputs(n, p, f, s);
          if (expect) {
            ASSERT_EQ(output_dim(n, p, f, s), *expect) << n << " " << p << " " << f << " " << s;
          } else {
            try {
              output_dim(n, p, f, s);
              FAIL() << n << " " << p << " " << f << " " << s;
            } catch (const Error& e) {
              ASSERT_EQ(e.code(), ErrorCode::kConfiguration);
            }
          }
        }
}

TEST(SamePadding, WorkedValuesAndCoverage) {
  const Padding a = same_padding(66, 3, 1);
  EXPECT_EQ(a.before, 1u);
  EXPECT_EQ(a.after, 1u);
  const Padding b = same_padding(25, 3, 2);
  EXPECT_EQ(b.before + b.after, 2u);
  EXPECT_EQ(b.before, 1u);
  const Padding c = same_padding(9, 3, 2);
  EXPECT_EQ(c.before, 1u);
  EXPECT_EQ(c.after, 1u);
  const Padding d = same_padding(100, 3, 2);
  EXPECT_EQ(d.before, 0u);
  EXPECT_EQ(d.after, 1u);
  for (std::size_t n = 1; n <= 64; ++n)
    for (std::size_t f = 1; f <= 7; ++f)
      for (std::size_t s = 1; s <= 3; ++s) {
        const Padding pd = same_padding(n, f, s);
        const std::size_t out = (n + s - 1) / s;
        // Padded extent must fit exactly `out` windows with nothing to spare.
        ASSERT_GE(n + pd.before + pd.after, (out - 1) * s + f);
        ASSERT_LE(pd.after - pd.before, 1u);
        ASSERT_LE(pd.before, pd.after);
      }
}

TEST(Conv2d, IdentityKernelAndConstantSum) {
  Rng rng(1);
  const Tensor<double> x = random_tensor<double>(Shape{2, 5, 6, 1}, rng);
  Tensor<double> w(Shape{3, 3, 1, 1});
  w.at(1, 1, 0, 0) = 1.0;
  const Tensor<double> b(Shape{1, 1, 1, 1});
  const auto y = conv2d_forward(x, w, b);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(y[i], x[i], 1e-12);

  const Tensor<double> c(Shape{1, 6, 6, 1}, 0.7);
  const Tensor<double> ones(Shape{3, 3, 1, 1}, 1.0);
  const auto s = conv2d_forward(c, ones, b);
  for (std::size_t i = 1; i < 5; ++i)
    for (std::size_t j = 1; j < 5; ++j) EXPECT_NEAR(s.at(0, i, j, 0), 9 * 0.7, 1e-12);
  EXPECT_NEAR(s.at(0, 0, 0, 0), 4 * 0.7, 1e-12);
}

TEST(Conv2d, MatchesNaiveLoops) {
  Rng rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t cin = 1 + rng.index(4), k = 1 + rng.index(5), stride = 1 + rng.index(2);
    const std::size_t f = 1 + 2 * rng.index(3);
    const auto x = random_tensor<double>(Shape{1 + rng.index(3), 1 + rng.index(12), 1 + rng.index(12), cin}, rng);
    const auto w = random_tensor<double>(Shape{f, f, cin, k}, rng);
    const auto b = random_tensor<double>(Shape{1, 1, 1, k}, rng);
    const auto fast = conv2d_forward(x, w, b, stride);
    const auto slow = naive_conv(x, w, b, stride);
    ASSERT_EQ(fast.shape(), slow.shape());
    for (std::size_t i = 0; i < fast.size(); ++i) ASSERT_NEAR(fast[i], slow[i], 1e-10);
  }
}

TEST(Conv2d, ShapeErrors) {
  const Tensor<float> x(Shape{1, 4, 4, 2});
  const Tensor<float> w(Shape{3, 3, 3, 1});
  const Tensor<float> b(Shape{1, 1, 1, 1});
  EXPECT_THROW(conv2d_forward(x, w, b), Error);
}

TEST(Relu, ValuesAndSubgradient) {
  const Tensor<double> x(Shape{1, 1, 1, 4}, std::vector<double>{-1.0, 0.0, 2.0, 3.5});
  const auto y = relu_forward(x);
  EXPECT_EQ(y[0], 0.0);
  EXPECT_EQ(y[1], 0.0);
  EXPECT_EQ(y[2], 2.0);
  const Tensor<double> g(x.shape(), 1.0);
  const auto dx = relu_backward(x, g);
  EXPECT_EQ(dx[0], 0.0);
  EXPECT_EQ(dx[1], 0.0);
  EXPECT_EQ(dx[2], 1.0);
  EXPECT_EQ(dx[3], 1.0);
}

TEST(BatchNorm, ThreeValueExample) {
  Tensor<double> x(Shape{3, 1, 1, 1}, std::vector<double>{1.0, 2.0, 3.0});
  BatchNormParams<double> p(1);
  const auto y = batchnorm_forward(x, p, Mode::kTrain);
  const double z = 1.0 / std::sqrt(2.0 / 3.0 + kBatchNormEpsilon);
  EXPECT_NEAR(y[0], -z, 1e-12);
  EXPECT_NEAR(y[1], 0.0, 1e-12);
  EXPECT_NEAR(y[2], z, 1e-12);
  EXPECT_NEAR(y[2], 1.2247, 1e-4);
  // Running statistics moved by one momentum step from (0, 1).
  EXPECT_NEAR(p.running_mean[0], 0.1 * 2.0, 1e-12);
  EXPECT_NEAR(p.running_var[0], 0.9 + 0.1 * (2.0 / 3.0), 1e-12);
}

TEST(BatchNorm, TrainOutputIsStandardised) {
  Rng rng(3);
  const auto x = random_tensor<double>(Shape{4, 5, 6, 3}, rng, 7.0);
  Tensor<double> shifted = x;
  for (auto& v : shifted.data()) v += 40.0;
  BatchNormParams<double> p(3);
  const auto y = batchnorm_forward(shifted, p, Mode::kTrain);
  for (std::size_t c = 0; c < 3; ++c) {
    double mean = 0.0, sq = 0.0;
    const std::size_t m = y.size() / 3;
    for (std::size_t i = c; i < y.size(); i += 3) mean += y[i];
    mean /= m;
    for (std::size_t i = c; i < y.size(); i += 3) sq += (y[i] - mean) * (y[i] - mean);
    EXPECT_LE(std::abs(mean), 1e-5);
    EXPECT_LE(std::abs(sq / m - 1.0), 1e-4);
  }
}

TEST(BatchNorm, EvalUsesRunningStatistics) {
  BatchNormParams<double> p(1);
  p.running_mean[0] = 2.0;
  p.running_var[0] = 4.0;
  p.scale[0] = 3.0;
  p.offset[0] = 1.0;
  const Tensor<double> x(Shape{2, 1, 1, 1}, std::vector<double>{2.0, 4.0});
  const auto y = batchnorm_forward(x, p, Mode::kEval);
  EXPECT_NEAR(y[0], 1.0, 1e-12);
  EXPECT_NEAR(y[1], 1.0 + 3.0 * 2.0 / std::sqrt(4.0 + kBatchNormEpsilon), 1e-12);
  EXPECT_EQ(p.running_mean[0], 2.0);
}

TEST(MaxPool, ShapesFromArchitecture) {
  PoolSpec same;
  EXPECT_EQ(pool_output_shape(Shape{1, 66, 100, 40}, same), (Shape{1, 33, 50, 40}));
  EXPECT_EQ(pool_output_shape(Shape{1, 33, 50, 80}, same), (Shape{1, 17, 25, 80}));
  EXPECT_EQ(pool_output_shape(Shape{1, 17, 25, 160}, same), (Shape{1, 9, 13, 160}));
  PoolSpec strip;
  strip.size_h = 1;
  strip.size_w = 13;
  strip.stride_h = strip.stride_w = 1;
  strip.same = false;
  EXPECT_EQ(pool_output_shape(Shape{1, 9, 13, 160}, strip), (Shape{1, 9, 1, 160}));
}

TEST(MaxPool, ConstantInputAndBruteForce) {
  PoolSpec spec;
  const Tensor<float> c(Shape{1, 7, 9, 2}, -0.5f);
  const auto pooled = maxpool_forward(c, spec);
  for (float v : pooled.data()) EXPECT_EQ(v, -0.5f);

  Rng rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const Shape s{1 + rng.index(2), 1 + rng.index(10), 1 + rng.index(10), 1 + rng.index(3)};
    Tensor<double> x(s);
    // Few distinct values so ties are frequent.
    for (auto& v : x.data()) v = static_cast<double>(rng.index(4)) - 5.0;
    std::vector<std::size_t> arg;
    const auto y = maxpool_forward(x, spec, &arg);
    const Padding ph = same_padding(s.h, 3, 2), pw = same_padding(s.w, 3, 2);
    const Shape os = pool_output_shape(s, spec);
    ASSERT_EQ(y.shape(), os);
    for (std::size_t n = 0; n < s.n; ++n)
      for (std::size_t i = 0; i < os.h; ++i)
        for (std::size_t j = 0; j < os.w; ++j)
          for (std::size_t ch = 0; ch < s.c; ++ch) {
            double best = -std::numeric_limits<double>::infinity();
            std::size_t where = 0;
            for (std::size_t di = 0; di < 3; ++di)
              for (std::size_t dj = 0; dj < 3; ++dj) {
                const long r = static_cast<long>(2 * i + di) - static_cast<long>(ph.before);
                const long col = static_cast<long>(2 * j + dj) - static_cast<long>(pw.before);
                if (r < 0 || col < 0 || r >= static_cast<long>(s.h) || col >= static_cast<long>(s.w))
                  continue;
                if (x.at(n, r, col, ch) > best) {
                  best = x.at(n, r, col, ch);
                  where = x.offset(n, r, col, ch);
                }
              }
            const std::size_t o = y.offset(n, i, j, ch);
            ASSERT_EQ(y[o], best);
            ASSERT_EQ(arg[o], where);
          }
  }
}

TEST(Dropout, EvalAndZeroRateAreIdentity) {
  Rng rng(5);
  const auto x = random_tensor<float>(Shape{2, 3, 3, 2}, rng);
  EXPECT_EQ(dropout_forward(x, 0.2, Mode::kEval, nullptr), x);
  EXPECT_EQ(dropout_forward(x, 0.0, Mode::kTrain, &rng), x);
  EXPECT_THROW(dropout_forward(x, 1.0, Mode::kTrain, &rng), Error);
  EXPECT_THROW(dropout_forward(x, 0.2, Mode::kTrain, nullptr), Error);
}

TEST(Dropout, ExpectationPreserved) {
  Rng rng(6);
  const Tensor<double> x(Shape{1, 100, 100, 1}, 1.0);
  std::vector<double> mask;
  const auto y = dropout_forward(x, 0.2, Mode::kTrain, &rng, &mask);
  double mean = 0.0;
  std::size_t zeros = 0;
  for (double v : y.data()) {
    mean += v;
    zeros += v == 0.0;
    EXPECT_TRUE(v == 0.0 || std::abs(v - 1.25) < 1e-12);
  }
  mean /= static_cast<double>(y.size());
  // Per-unit std is 0.5, so 1e4 draws give a 0.005 standard error.
  EXPECT_NEAR(mean, 1.0, 0.02);
  EXPECT_NEAR(static_cast<double>(zeros) / y.size(), 0.2, 0.02);
  EXPECT_EQ(mask.size(), y.size());
}

TEST(FullyConnected, ZeroWeightsAndSelection) {
  Rng rng(7);
  const auto x = random_tensor<double>(Shape{3, 2, 1, 2}, rng);
  const Tensor<double> w0(Shape{1, 1, 3, 4});
  const Tensor<double> b(Shape{1, 1, 1, 3}, std::vector<double>{0.5, -1.0, 2.0});
  const auto y0 = fc_forward(x, w0, b);
  EXPECT_EQ(y0.shape(), (Shape{3, 1, 1, 3}));
  for (std::size_t n = 0; n < 3; ++n)
    for (std::size_t o = 0; o < 3; ++o) EXPECT_EQ(y0.at(n, 0, 0, o), b[o]);

  Tensor<double> pick(Shape{1, 1, 3, 4});
  pick.at(0, 0, 0, 3) = 1.0;
  pick.at(0, 0, 1, 0) = 1.0;
  pick.at(0, 0, 2, 1) = 1.0;
  const auto y = fc_forward(x, pick, Tensor<double>(Shape{1, 1, 1, 3}));
  for (std::size_t n = 0; n < 3; ++n) {
    EXPECT_EQ(y.at(n, 0, 0, 0), x[n * 4 + 3]);
    EXPECT_EQ(y.at(n, 0, 0, 1), x[n * 4 + 0]);
    EXPECT_EQ(y.at(n, 0, 0, 2), x[n * 4 + 1]);
  }
}

TEST(Softmax, ClosedForms) {
  const Tensor<double> z0(Shape{1, 1, 1, 3});
  const auto uniform = softmax(z0);
  for (double p : uniform.data()) EXPECT_NEAR(p, 1.0 / 3.0, 1e-15);
  const Tensor<double> z(Shape{1, 1, 1, 3},
                         std::vector<double>{std::log(1.0), std::log(2.0), std::log(3.0)});
  const auto p = softmax(z);
  EXPECT_NEAR(p[0], 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(p[1], 2.0 / 6.0, 1e-15);
  EXPECT_NEAR(p[2], 3.0 / 6.0, 1e-15);
  const Tensor<float> huge(Shape{1, 1, 1, 2}, std::vector<float>{1000.0f, 1000.0f});
  EXPECT_NEAR(softmax(huge)[0], 0.5f, 1e-6f);
}

TEST(Softmax, ShiftInvarianceAndNormalisation) {
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 2 + rng.index(10);
    const auto z = random_tensor<double>(Shape{3, 1, 1, k}, rng, 5.0);
    Tensor<double> moved = z;
    const double c = rng.uniform(-50.0, 50.0);
    for (auto& v : moved.data()) v += c;
    const auto p = softmax(z), q = softmax(moved);
    for (std::size_t n = 0; n < 3; ++n) {
      double sum = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        const double v = p.at(n, 0, 0, i);
        EXPECT_GT(v, 0.0);
        EXPECT_LT(v, 1.0);
        EXPECT_NEAR(v, q.at(n, 0, 0, i), 1e-6);
        sum += v;
      }
      EXPECT_NEAR(sum, 1.0, 1e-6);
    }
  }
}

TEST(CrossEntropy, OneHotAndUniform) {
  EXPECT_EQ(cross_entropy({0.0, 1.0, 0.0}, 1), 0.0);
  EXPECT_NEAR(cross_entropy(std::vector<double>(7, 1.0 / 7.0), 3), std::log(7.0), 1e-12);
  EXPECT_NEAR(std::log(7.0), 1.9459, 1e-4);
  EXPECT_EQ(cross_entropy({1.0, 0.0}, 1), std::numeric_limits<double>::infinity());

  const Tensor<double> zero(Shape{2, 1, 1, 7});
  const auto r = softmax_cross_entropy(zero, {0, 6});
  EXPECT_NEAR(r.loss, std::log(7.0), 1e-12);
  EXPECT_NEAR(r.grad_logits.at(0, 0, 0, 0), (1.0 / 7.0 - 1.0) / 2.0, 1e-12);
  EXPECT_NEAR(r.grad_logits.at(1, 0, 0, 0), (1.0 / 7.0) / 2.0, 1e-12);
  EXPECT_THROW(softmax_cross_entropy(zero, {0}), Error);
  EXPECT_THROW(softmax_cross_entropy(zero, {0, 7}), Error);
}

template <typename T>
void expect_suite_passes(std::uint64_t seed) {
  for (const auto& check : testing::run_gradient_suite<T>(20, seed)) {
    EXPECT_TRUE(check.passed()) << check.layer << " worst " << check.worst_error << " > "
                                << check.tolerance;
  }
}

TEST(GradientCheck, DoublePrecision) { expect_suite_passes<double>(101); }
TEST(GradientCheck, SinglePrecision) { expect_suite_passes<float>(202); }

TEST(GradientCheck, WholeNetwork) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    EXPECT_LE(testing::network_gradient_error(seed), testing::kNetworkGradientTolerance)
        << "seed " << seed;
  }
}

}  // namespace
}  // namespace muzzleprint::nn
