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

#include "muzzleprint/nn/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "muzzleprint/error.hpp"
#include "muzzleprint/nn/adam.hpp"
#include "muzzleprint/random.hpp"

namespace muzzleprint::nn {

namespace {

constexpr std::size_t kEvalBatch = 32;

Tensor<float> gather(const std::vector<Example>& data,
                     std::span<const std::size_t> indices) {
  std::vector<const Tensor<float>*> parts;
  parts.reserve(indices.size());
  for (std::size_t i : indices) parts.push_back(&data[i].image);
  return stack(parts);
}

}  // namespace

Tensor<float> cnn_input(const dsp::Spectrogram& s) {
  const dsp::Matrix<double> db = dsp::log_psd(s, kInputFloorDb);
  Tensor<float> image(Shape{1, db.rows, db.cols, 1});
  for (std::size_t i = 0; i < db.data.size(); ++i) image[i] = static_cast<float>(db.data[i]);
  return image;
}

void TrainConfig::validate() const {
  if (max_epochs == 0) throw Error(ErrorCode::kConfiguration, "max_epochs must be positive");
  if (batch_size == 0) throw Error(ErrorCode::kConfiguration, "batch_size must be positive");
  if (!(initial_lr > 0.0) || !std::isfinite(initial_lr)) {
    throw Error(ErrorCode::kConfiguration, "learning rate must be positive");
  }
  if (!(val_fraction > 0.0 && val_fraction < 1.0)) {
    throw Error(ErrorCode::kConfiguration, "val_fraction must be in (0, 1)");
  }
}

std::size_t argmax(std::span<const float> values) {
  if (values.empty()) throw Error(ErrorCode::kArgument, "argmax of empty vector");
  return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) -
                                  values.begin());
}

EvalSummary evaluate_examples(Network<float>& model, const std::vector<Example>& data,
                              const std::vector<std::size_t>& indices) {
  if (indices.empty()) throw Error(ErrorCode::kUndefined, "no examples to evaluate");
  EvalSummary out;
  std::size_t correct = 0;
  const std::size_t k = model.architecture().num_classes;
  for (std::size_t start = 0; start < indices.size(); start += kEvalBatch) {
    const std::size_t end = std::min(indices.size(), start + kEvalBatch);
    const std::span<const std::size_t> chunk(indices.data() + start, end - start);
    const Tensor<float> probs = model.predict(gather(data, chunk));
    for (std::size_t j = 0; j < chunk.size(); ++j) {
      const std::span<const float> row = probs.data().subspan(j * k, k);
      const std::size_t label = data[chunk[j]].label;
      const std::size_t pred = argmax(row);
      out.predicted.push_back(pred);
      if (pred == label) ++correct;
      out.loss += -std::log(std::max(static_cast<double>(row[label]), 1e-30));
    }
  }
  out.loss /= static_cast<double>(indices.size());
  out.accuracy = static_cast<double>(correct) / static_cast<double>(indices.size());
  return out;
}

TrainResult train(const std::vector<Example>& data, const Architecture& arch,
                  const TrainConfig& cfg, const ProgressFn& progress) {
  cfg.validate();
  std::set<std::size_t> classes;
  for (const Example& e : data) {
    if (e.label >= arch.num_classes) {
      throw Error(ErrorCode::kValidation, "label " + std::to_string(e.label) +
                                              " outside " +
                                              std::to_string(arch.num_classes) + " classes");
    }
    classes.insert(e.label);
  }
  if (classes.size() < 2) {
    throw Error(ErrorCode::kDegenerateData, "training needs at least two classes, found " +
                                                std::to_string(classes.size()));
  }
  if (data.size() < 2 * cfg.batch_size) {
    throw Error(ErrorCode::kSize, "training needs at least " +
                                      std::to_string(2 * cfg.batch_size) + " examples, got " +
                                      std::to_string(data.size()));
  }

  Rng rng(cfg.seed);
  Network<float> model(arch, rng);

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(std::span<std::size_t>(order));
  std::size_t n_val = static_cast<std::size_t>(
      std::llround(cfg.val_fraction * static_cast<double>(data.size())));
  n_val = std::clamp<std::size_t>(n_val, 1, data.size() - 1);
  std::vector<std::size_t> val(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_val));
  std::vector<std::size_t> tr(order.begin() + static_cast<std::ptrdiff_t>(n_val), order.end());
  std::sort(val.begin(), val.end());
  std::sort(tr.begin(), tr.end());

  std::vector<const Tensor<float>*> train_images;
  for (std::size_t i : tr) train_images.push_back(&data[i].image);
  model.mean_image() = zerocenter_fit(train_images);

  const std::size_t val_every =
      cfg.val_frequency ? cfg.val_frequency : std::max<std::size_t>(1, tr.size() / cfg.batch_size);

  AdamState<float> adam;
  adam.config.learning_rate = cfg.initial_lr;

  TrainResult result{std::move(model), {}, tr, val, 0.0, 0.0};
  Network<float>& net = result.model;
  const std::size_t per_epoch = (tr.size() + cfg.batch_size - 1) / cfg.batch_size;
  const std::size_t total_iterations = per_epoch * cfg.max_epochs;
  std::vector<std::size_t> epoch_order = tr;
  std::size_t iteration = 0;

  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(epoch_order));
    for (std::size_t start = 0; start < epoch_order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(epoch_order.size(), start + cfg.batch_size);
      const std::span<const std::size_t> batch(epoch_order.data() + start, end - start);
      std::vector<std::size_t> labels;
      for (std::size_t i : batch) labels.push_back(data[i].label);

      const Tensor<float> logits = net.forward(gather(data, batch), Mode::kTrain, &rng);
      const LossResult<float> loss = softmax_cross_entropy(logits, labels);
      net.backward(loss.grad_logits);
      adam_step(net.parameters(), net.gradients(), adam);
      ++iteration;

      HistoryPoint point;
      point.epoch = epoch;
      point.iteration = iteration;
      point.train_loss = loss.loss;
      std::size_t correct = 0;
      for (std::size_t j = 0; j < labels.size(); ++j) {
        if (argmax(logits.data().subspan(j * arch.num_classes, arch.num_classes)) == labels[j]) {
          ++correct;
        }
      }
      point.train_accuracy = static_cast<double>(correct) / static_cast<double>(labels.size());
      if (iteration % val_every == 0 || iteration == total_iterations) {
        const EvalSummary v = evaluate_examples(net, data, val);
        point.val_loss = v.loss;
        point.val_accuracy = v.accuracy;
        result.final_val_loss = v.loss;
        result.final_val_accuracy = v.accuracy;
      }
      if (!std::isfinite(point.train_loss)) {
        throw Error(ErrorCode::kDegenerateData, "training diverged at iteration " +
                                                    std::to_string(iteration));
      }
      result.history.push_back(point);
      if (progress) progress(point);
    }
  }
  return result;
}

}  // namespace muzzleprint::nn
