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

#include <benchmark/benchmark.h>

#include <vector>

#include "gradcheck.hpp"
#include "muzzleprint/nn/adam.hpp"
#include "muzzleprint/nn/network.hpp"
#include "muzzleprint/nn/ops.hpp"

namespace mp = muzzleprint;
namespace nn = muzzleprint::nn;

namespace {

// Second conv layer of the full model at batch size 8.
void BM_ConvForward(benchmark::State& state) {
  mp::Rng rng(21);
  const auto x = mp::testing::random_tensor<float>(nn::Shape{8, 33, 50, 40}, rng);
  const auto w = mp::testing::random_tensor<float>(nn::Shape{3, 3, 40, 80}, rng, 0.1);
  const nn::Tensor<float> b(nn::Shape{1, 1, 1, 80});
  for (auto _ : state) {
    auto y = nn::conv2d_forward(x, w, b, 2);
    benchmark::DoNotOptimize(y.data().data());
  }
}
BENCHMARK(BM_ConvForward)->Unit(benchmark::kMillisecond);

void BM_ConvBackward(benchmark::State& state) {
  mp::Rng rng(22);
  const auto x = mp::testing::random_tensor<float>(nn::Shape{8, 33, 50, 40}, rng);
  const auto w = mp::testing::random_tensor<float>(nn::Shape{3, 3, 40, 80}, rng, 0.1);
  const nn::Tensor<float> b(nn::Shape{1, 1, 1, 80});
  const auto y = nn::conv2d_forward(x, w, b, 2);
  const auto g = mp::testing::random_tensor<float>(y.shape(), rng);
  for (auto _ : state) {
    auto grads = nn::conv2d_backward(x, w, g, 2);
    benchmark::DoNotOptimize(grads.weights.data().data());
  }
}
BENCHMARK(BM_ConvBackward)->Unit(benchmark::kMillisecond);

void BM_Predict(benchmark::State& state) {
  mp::Rng rng(23);
  nn::Network<float> net(nn::Architecture{}, rng);
  const auto x = mp::testing::random_tensor<float>(nn::Shape{1, 66, 100, 1}, rng, 20.0);
  for (auto _ : state) {
    auto p = net.predict(x);
    benchmark::DoNotOptimize(p.data().data());
  }
}
BENCHMARK(BM_Predict)->Unit(benchmark::kMillisecond);

// One mini-batch of the full model: forward, loss, backward, Adam.
void BM_TrainStep(benchmark::State& state) {
  const auto batch = static_cast<std::size_t>(state.range(0));
  mp::Rng rng(24);
  nn::Network<float> net(nn::Architecture{}, rng);
  const auto x = mp::testing::random_tensor<float>(nn::Shape{batch, 66, 100, 1}, rng, 20.0);
  std::vector<std::size_t> labels(batch);
  for (std::size_t i = 0; i < batch; ++i) labels[i] = i % 7;
  nn::AdamState<float> adam;
  for (auto _ : state) {
    const auto logits = net.forward(x, nn::Mode::kTrain, &rng);
    const auto loss = nn::softmax_cross_entropy(logits, labels);
    net.backward(loss.grad_logits);
    nn::adam_step<float>(net.parameters(), net.gradients(), adam);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(batch));
}
BENCHMARK(BM_TrainStep)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace
