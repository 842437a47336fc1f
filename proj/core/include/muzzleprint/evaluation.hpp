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

#ifndef MUZZLEPRINT_EVALUATION_HPP_
#define MUZZLEPRINT_EVALUATION_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "muzzleprint/dsp/spectrogram.hpp"
#include "muzzleprint/manifest.hpp"
#include "muzzleprint/nn/network.hpp"
#include "muzzleprint/nn/train.hpp"

namespace muzzleprint {

struct ClassSummary {
  std::string name;
  std::size_t row_total = 0;     // true samples of this class
  std::size_t column_total = 0;  // predictions of this class
  // Empty when the row (recall) or column (precision) has no samples.
  std::optional<double> recall;
  std::optional<double> precision;
};

// Rows are true classes, columns predicted classes.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::vector<std::string> class_names);

  // kArgument when either index is outside the class set.
  void accumulate(std::size_t true_class, std::size_t predicted_class);

  std::size_t num_classes() const { return names_.size(); }
  const std::vector<std::string>& class_names() const { return names_; }
  std::size_t count(std::size_t true_class, std::size_t predicted_class) const;
  std::size_t total() const { return total_; }
  const std::vector<std::size_t>& counts() const { return counts_; }

  // Trace over total; kUndefined when the matrix is empty.
  double accuracy() const;
  std::vector<ClassSummary> class_summaries() const;

  bool operator==(const ConfusionMatrix&) const = default;

 private:
  std::vector<std::string> names_;
  std::vector<std::size_t> counts_;
  std::size_t total_ = 0;
};

// Element-wise mean of matrices that share one class list.
struct AveragedConfusion {
  std::vector<std::string> class_names;
  std::vector<double> counts;  // row-major mean counts
  double accuracy = 0.0;       // mean of the per-run accuracies
};

AveragedConfusion average(std::span<const ConfusionMatrix> runs);

inline constexpr const char* kUndefinedMarker = "n/a";

// {classes, counts (nested rows), accuracy, recalls, precisions}; undefined
// summaries are the string "n/a". An empty matrix reports accuracy "n/a".
std::string to_json(const ConfusionMatrix& cm);
std::string to_json(const AveragedConfusion& cm);

// Fixed-width text grid with a recall column and a precision row.
std::string render_grid(const ConfusionMatrix& cm);
std::string render_grid(const AveragedConfusion& cm);

struct LabeledSpectrogram {
  dsp::Spectrogram spectrogram;
  ManifestEntry entry;
};

// Eval-mode argmax per sample against the task label. kValidation for a
// label outside the task's set or a model/class-count mismatch.
ConfusionMatrix evaluate(nn::Network<float>& model,
                         std::span<const LabeledSpectrogram> samples,
                         const TaskLabels& labels);

// Same, over prepared network inputs with class indices.
ConfusionMatrix evaluate(nn::Network<float>& model, const std::vector<nn::Example>& samples,
                         const std::vector<std::string>& class_names);

}  // namespace muzzleprint

#endif  // MUZZLEPRINT_EVALUATION_HPP_
