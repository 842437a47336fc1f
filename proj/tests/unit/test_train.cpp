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

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>

#include "muzzleprint/error.hpp"
#include "muzzleprint/nn/checkpoint.hpp"
#include "muzzleprint/nn/train.hpp"

namespace muzzleprint::nn {
namespace {

Architecture tiny_arch(std::size_t classes = 2) {
  Architecture a;
  a.input_h = 12;
  a.input_w = 16;
  a.channels = {4, 4, 8, 8};
  a.final_pool_w = 2;
  a.num_classes = classes;
  return a;
}

// Class k lights up horizontal band k on a noisy background.
std::vector<Example> banded(std::size_t per_class, std::size_t classes, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Example> out;
  const std::size_t band = 12 / classes;
  for (std::size_t i = 0; i < per_class; ++i) {
    for (std::size_t k = 0; k < classes; ++k) {
      Example e{Tensor<float>(Shape{1, 12, 16, 1}), k};
      for (std::size_t h = 0; h < 12; ++h) {
        for (std::size_t w = 0; w < 16; ++w) {
          const float lit = (h / band == k) ? 2.0f : 0.0f;
          e.image.at(0, h, w, 0) = lit + static_cast<float>(0.3 * rng.normal());
        }
      }
      out.push_back(std::move(e));
    }
  }
  return out;
}

TrainConfig quick(std::size_t epochs) {
  TrainConfig cfg;
  cfg.max_epochs = epochs;
  cfg.batch_size = 8;
  cfg.initial_lr = 1e-3;
  cfg.val_fraction = 0.25;
  cfg.seed = 5;
  return cfg;
}

std::optional<ErrorCode> train_code(const std::vector<Example>& data, const Architecture& a,
                                    const TrainConfig& cfg) {
  try {
    train(data, a, cfg);
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

TEST(TrainConfig, Validation) {
  EXPECT_NO_THROW(TrainConfig{}.validate());
  auto bad = [](auto mutate) {
    TrainConfig c;
    mutate(c);
    try {
      c.validate();
    } catch (const Error& e) {
      return e.code() == ErrorCode::kConfiguration;
    }
    return false;
  };
  EXPECT_TRUE(bad([](TrainConfig& c) { c.max_epochs = 0; }));
  EXPECT_TRUE(bad([](TrainConfig& c) { c.batch_size = 0; }));
  EXPECT_TRUE(bad([](TrainConfig& c) { c.initial_lr = 0.0; }));
  EXPECT_TRUE(bad([](TrainConfig& c) { c.initial_lr = -1.0; }));
  EXPECT_TRUE(bad([](TrainConfig& c) { c.initial_lr = std::nan(""); }));
  EXPECT_TRUE(bad([](TrainConfig& c) { c.val_fraction = 0.0; }));
  EXPECT_TRUE(bad([](TrainConfig& c) { c.val_fraction = 1.0; }));
}

TEST(Train, DegenerateInputsRejected) {
  const auto data = banded(10, 2, 1);
  auto one_class = data;
  for (auto& e : one_class) e.label = 0;
  EXPECT_EQ(train_code(one_class, tiny_arch(), quick(1)), ErrorCode::kDegenerateData);

  auto out_of_range = data;
  out_of_range[3].label = 2;
  EXPECT_EQ(train_code(out_of_range, tiny_arch(), quick(1)), ErrorCode::kValidation);

  const std::vector<Example> few(data.begin(), data.begin() + 15);
  EXPECT_EQ(train_code(few, tiny_arch(), quick(1)), ErrorCode::kSize);

  auto cfg = quick(1);
  cfg.batch_size = 0;
  EXPECT_EQ(train_code(data, tiny_arch(), cfg), ErrorCode::kConfiguration);
}

TEST(Train, SplitIsDisjointSortedAndRounded) {
  const auto data = banded(15, 2, 2);  // 30 examples, 0.25 -> 7.5 -> 8
  const auto r = train(data, tiny_arch(), quick(1));
  EXPECT_EQ(r.val_indices.size(), 8u);
  EXPECT_EQ(r.train_indices.size(), 22u);
  EXPECT_TRUE(std::is_sorted(r.val_indices.begin(), r.val_indices.end()));
  EXPECT_TRUE(std::is_sorted(r.train_indices.begin(), r.train_indices.end()));
  std::set<std::size_t> all(r.val_indices.begin(), r.val_indices.end());
  all.insert(r.train_indices.begin(), r.train_indices.end());
  EXPECT_EQ(all.size(), 30u);
}

TEST(Train, HistoryCadence) {
  const auto data = banded(20, 2, 3);  // 40 -> 30 train, 4 iterations per epoch
  std::size_t callbacks = 0;
  const auto r = train(data, tiny_arch(), quick(3), [&](const HistoryPoint&) { ++callbacks; });
  ASSERT_EQ(r.history.size(), 12u);
  EXPECT_EQ(callbacks, 12u);
  for (std::size_t i = 0; i < r.history.size(); ++i) {
    const auto& p = r.history[i];
    EXPECT_EQ(p.iteration, i + 1);
    EXPECT_EQ(p.epoch, i / 4 + 1);
    // 30 / 8 = 3, so validation lands on every third iteration and the last.
    const bool expect_val = (p.iteration % 3 == 0) || p.iteration == 12;
    EXPECT_EQ(p.val_accuracy.has_value(), expect_val) << p.iteration;
    EXPECT_GE(p.train_accuracy, 0.0);
    EXPECT_LE(p.train_accuracy, 1.0);
  }
  EXPECT_EQ(r.final_val_accuracy, *r.history.back().val_accuracy);
}

TEST(Train, SeparableDataLearnedWithinFiveEpochs) {
  const auto data = banded(24, 2, 4);
  const auto r = train(data, tiny_arch(), quick(5));
  EXPECT_GE(r.final_val_accuracy, 0.99);
  EXPECT_LT(r.history.back().train_loss, r.history.front().train_loss);
}

TEST(Train, FourClassBands) {
  const auto data = banded(16, 4, 6);
  const auto r = train(data, tiny_arch(4), quick(10));
  EXPECT_GE(r.final_val_accuracy, 0.99);
}

TEST(Train, DeterministicForSeed) {
  const auto data = banded(12, 2, 7);
  const auto a = train(data, tiny_arch(), quick(2));
  const auto b = train(data, tiny_arch(), quick(2));
  ASSERT_EQ(a.history.size(), b.history.size());
  for (std::size_t i = 0; i < a.history.size(); ++i) {
    EXPECT_EQ(a.history[i].train_loss, b.history[i].train_loss);
    EXPECT_EQ(a.history[i].val_loss, b.history[i].val_loss);
  }
  const CheckpointMeta meta{{"x", "y"}, "test", 5, ""};
  EXPECT_EQ(encode_checkpoint(a.model, meta), encode_checkpoint(b.model, meta));

  auto cfg = quick(2);
  cfg.seed = 6;
  const auto c = train(data, tiny_arch(), cfg);
  EXPECT_NE(a.history.back().train_loss, c.history.back().train_loss);
}

TEST(Train, MeanImageFromTrainingSplitOnly) {
  const auto data = banded(10, 2, 8);
  const auto r = train(data, tiny_arch(), quick(1));
  Tensor<float> mean(Shape{1, 12, 16, 1});
  for (std::size_t i : r.train_indices) {
    for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += data[i].image[j];
  }
  for (std::size_t j = 0; j < mean.size(); ++j) {
    EXPECT_NEAR(r.model.mean_image()[j], mean[j] / r.train_indices.size(), 1e-5);
  }
}

TEST(Evaluate, MatchesManualCount) {
  const auto data = banded(10, 2, 9);
  auto r = train(data, tiny_arch(), quick(1));
  std::vector<std::size_t> all(data.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const auto s = evaluate_examples(r.model, data, all);
  ASSERT_EQ(s.predicted.size(), data.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < data.size(); ++i) hits += s.predicted[i] == data[i].label;
  EXPECT_DOUBLE_EQ(s.accuracy, static_cast<double>(hits) / data.size());
  EXPECT_GT(s.loss, 0.0);
  try {
    evaluate_examples(r.model, data, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUndefined);
  }
}

TEST(Argmax, FirstMaximumWins) {
  const std::vector<float> v = {0.1f, 0.4f, 0.4f, 0.1f};
  EXPECT_EQ(argmax(v), 1u);
  EXPECT_THROW(argmax(std::span<const float>{}), Error);
}

TEST(CnnInput, DecibelImageWithFloor) {
  dsp::Spectrogram s;
  s.psd = {2, 3, {0.0, 1.0, 1e-3, 10.0, 1e-20, 0.5}};
  const auto img = cnn_input(s);
  EXPECT_EQ(img.shape(), (Shape{1, 2, 3, 1}));
  const std::vector<float> expected = {-120.0f, 0.0f, -30.0f, 10.0f, -120.0f, -3.0103f};
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_NEAR(img[i], expected[i], 1e-4);
}

}  // namespace
}  // namespace muzzleprint::nn
