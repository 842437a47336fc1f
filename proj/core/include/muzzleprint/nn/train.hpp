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

#ifndef MUZZLEPRINT_NN_TRAIN_HPP_
#define MUZZLEPRINT_NN_TRAIN_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "muzzleprint/dsp/spectrogram.hpp"
#include "muzzleprint/nn/network.hpp"
#include "muzzleprint/nn/tensor.hpp"

namespace muzzleprint::nn {

inline constexpr double kInputFloorDb = -120.0;

// Power spectrogram -> Shape{1, rows, cols, 1} dB image floored at -120.
Tensor<float> cnn_input(const dsp::Spectrogram& s);

struct Example {
  Tensor<float> image;  // Shape{1, h, w, 1}
  std::size_t label = 0;
};

struct TrainConfig {
  std::size_t max_epochs = 50;
  std::size_t batch_size = 8;
  double initial_lr = 2e-4;
  double val_fraction = 0.2;
  // 0 selects floor(|train| / batch_size).
  std::size_t val_frequency = 0;
  std::uint64_t seed = 0;

  void validate() const;  // kConfiguration
};

struct HistoryPoint {
  std::size_t epoch = 0;      // 1-based
  std::size_t iteration = 0;  // 1-based, across epochs
  double train_loss = 0.0;    // current mini-batch
  double train_accuracy = 0.0;
  std::optional<double> val_loss;
  std::optional<double> val_accuracy;
};

struct TrainResult {
  Network<float> model;
  std::vector<HistoryPoint> history;
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> val_indices;
  double final_val_accuracy = 0.0;
  double final_val_loss = 0.0;
};

using ProgressFn = std::function<void(const HistoryPoint&)>;

// Seeded split, zerocenter mean fitted on the training part, Adam over
// shuffled mini-batches (the last partial batch is kept), validation every
// val_frequency iterations and after the final one. The final-epoch model
// is returned. kDegenerateData with fewer than two classes present, kSize
// with fewer than 2 x batch_size examples.
TrainResult train(const std::vector<Example>& data, const Architecture& arch,
                  const TrainConfig& cfg, const ProgressFn& progress = {});

struct EvalSummary {
  double loss = 0.0;
  double accuracy = 0.0;
  std::vector<std::size_t> predicted;
};

// Eval-mode mean cross-entropy, accuracy and argmax predictions (ties go
// to the lowest class index) over data[indices].
EvalSummary evaluate_examples(Network<float>& model, const std::vector<Example>& data,
                              const std::vector<std::size_t>& indices);

// Index of the largest value; the first one on ties.
std::size_t argmax(std::span<const float> values);

}  // namespace muzzleprint::nn

#endif  // MUZZLEPRINT_NN_TRAIN_HPP_
