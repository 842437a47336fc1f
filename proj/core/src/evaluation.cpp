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

#include "muzzleprint/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "muzzleprint/error.hpp"

namespace muzzleprint {

namespace {

using json = nlohmann::json;

json optional_json(const std::optional<double>& v) {
  return v ? json(*v) : json(kUndefinedMarker);
}

std::string format_cell(double v, bool integral) {
  char buf[32];
  if (integral) {
    std::snprintf(buf, sizeof buf, "%.0f", v);
  } else {
    std::snprintf(buf, sizeof buf, "%.2f", v);
  }
  return buf;
}

std::string format_optional(const std::optional<double>& v) {
  if (!v) return kUndefinedMarker;
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.3f", *v);
  return buf;
}

// Shared renderer for integer and averaged counts.
std::string grid(const std::vector<std::string>& names, const std::vector<double>& counts,
                 bool integral, const std::string& accuracy) {
  const std::size_t k = names.size();
  std::vector<double> row_sum(k, 0.0);
  std::vector<double> col_sum(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      row_sum[i] += counts[i * k + j];
      col_sum[j] += counts[i * k + j];
    }
  }
  std::size_t width = 9;
  for (const auto& n : names) width = std::max(width, n.size() + 2);
  for (double v : counts) width = std::max(width, format_cell(v, integral).size() + 2);

  std::ostringstream out;
  auto cell = [&](const std::string& s) {
    out << std::string(width > s.size() ? width - s.size() : 1, ' ') << s;
  };
  cell("true\\pred");
  for (const auto& n : names) cell(n);
  cell("recall");
  out << '\n';
  for (std::size_t i = 0; i < k; ++i) {
    cell(names[i]);
    for (std::size_t j = 0; j < k; ++j) cell(format_cell(counts[i * k + j], integral));
    cell(format_optional(row_sum[i] > 0 ? std::optional(counts[i * k + i] / row_sum[i])
                                        : std::nullopt));
    out << '\n';
  }
  cell("precision");
  for (std::size_t j = 0; j < k; ++j) {
    cell(format_optional(col_sum[j] > 0 ? std::optional(counts[j * k + j] / col_sum[j])
                                        : std::nullopt));
  }
  out << '\n' << "accuracy " << accuracy << '\n';
  return out.str();
}

}  // namespace

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> class_names)
    : names_(std::move(class_names)), counts_(names_.size() * names_.size(), 0) {
  if (names_.empty()) throw Error(ErrorCode::kArgument, "confusion matrix needs classes");
}

void ConfusionMatrix::accumulate(std::size_t true_class, std::size_t predicted_class) {
  if (true_class >= names_.size() || predicted_class >= names_.size()) {
    throw Error(ErrorCode::kArgument, "class index outside the confusion matrix");
  }
  ++counts_[true_class * names_.size() + predicted_class];
  ++total_;
}

std::size_t ConfusionMatrix::count(std::size_t true_class, std::size_t predicted_class) const {
  if (true_class >= names_.size() || predicted_class >= names_.size()) {
    throw Error(ErrorCode::kArgument, "class index outside the confusion matrix");
  }
  return counts_[true_class * names_.size() + predicted_class];
}

double ConfusionMatrix::accuracy() const {
  if (total_ == 0) throw Error(ErrorCode::kUndefined, "accuracy of an empty confusion matrix");
  std::size_t trace = 0;
  for (std::size_t i = 0; i < names_.size(); ++i) trace += counts_[i * names_.size() + i];
  return static_cast<double>(trace) / static_cast<double>(total_);
}

std::vector<ClassSummary> ConfusionMatrix::class_summaries() const {
  const std::size_t k = names_.size();
  std::vector<ClassSummary> out(k);
  for (std::size_t i = 0; i < k; ++i) {
    out[i].name = names_[i];
    for (std::size_t j = 0; j < k; ++j) {
      out[i].row_total += counts_[i * k + j];
      out[i].column_total += counts_[j * k + i];
    }
    const double diag = static_cast<double>(counts_[i * k + i]);
    if (out[i].row_total) out[i].recall = diag / static_cast<double>(out[i].row_total);
    if (out[i].column_total) out[i].precision = diag / static_cast<double>(out[i].column_total);
  }
  return out;
}

AveragedConfusion average(std::span<const ConfusionMatrix> runs) {
  if (runs.empty()) throw Error(ErrorCode::kArgument, "nothing to average");
  AveragedConfusion out;
  out.class_names = runs.front().class_names();
  out.counts.assign(runs.front().counts().size(), 0.0);
  for (const ConfusionMatrix& cm : runs) {
    if (cm.class_names() != out.class_names) {
      throw Error(ErrorCode::kArgument, "averaged matrices must share one class list");
    }
  }
  for (const ConfusionMatrix& cm : runs) {
    for (std::size_t i = 0; i < out.counts.size(); ++i) {
      out.counts[i] += static_cast<double>(cm.counts()[i]);
    }
    out.accuracy += cm.accuracy();
  }
  const double n = static_cast<double>(runs.size());
  for (double& v : out.counts) v /= n;
  out.accuracy /= n;
  return out;
}

std::string to_json(const ConfusionMatrix& cm) {
  const std::size_t k = cm.num_classes();
  json rows = json::array();
  for (std::size_t i = 0; i < k; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < k; ++j) row.push_back(cm.count(i, j));
    rows.push_back(row);
  }
  json recalls = json::array();
  json precisions = json::array();
  for (const ClassSummary& s : cm.class_summaries()) {
    recalls.push_back(optional_json(s.recall));
    precisions.push_back(optional_json(s.precision));
  }
  return json{{"classes", cm.class_names()},
              {"counts", rows},
              {"accuracy", cm.total() ? json(cm.accuracy()) : json(kUndefinedMarker)},
              {"recalls", recalls},
              {"precisions", precisions}}
      .dump();
}

std::string to_json(const AveragedConfusion& cm) {
  const std::size_t k = cm.class_names.size();
  json rows = json::array();
  json recalls = json::array();
  json precisions = json::array();
  for (std::size_t i = 0; i < k; ++i) {
    json row = json::array();
    double row_sum = 0.0;
    double col_sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      row.push_back(cm.counts[i * k + j]);
      row_sum += cm.counts[i * k + j];
      col_sum += cm.counts[j * k + i];
    }
    rows.push_back(row);
    const double diag = cm.counts[i * k + i];
    recalls.push_back(row_sum > 0 ? json(diag / row_sum) : json(kUndefinedMarker));
    precisions.push_back(col_sum > 0 ? json(diag / col_sum) : json(kUndefinedMarker));
  }
  return json{{"classes", cm.class_names},
              {"counts", rows},
              {"accuracy", cm.accuracy},
              {"recalls", recalls},
              {"precisions", precisions}}
      .dump();
}

std::string render_grid(const ConfusionMatrix& cm) {
  std::vector<double> counts(cm.counts().begin(), cm.counts().end());
  char acc[32];
  if (cm.total()) {
    std::snprintf(acc, sizeof acc, "%.4f (N=%zu)", cm.accuracy(), cm.total());
  } else {
    std::snprintf(acc, sizeof acc, "%s (N=0)", kUndefinedMarker);
  }
  return grid(cm.class_names(), counts, true, acc);
}

std::string render_grid(const AveragedConfusion& cm) {
  char acc[32];
  std::snprintf(acc, sizeof acc, "%.4f (mean)", cm.accuracy);
  return grid(cm.class_names, cm.counts, false, acc);
}

ConfusionMatrix evaluate(nn::Network<float>& model, const std::vector<nn::Example>& samples,
                         const std::vector<std::string>& class_names) {
  if (class_names.size() != model.architecture().num_classes) {
    throw Error(ErrorCode::kValidation, "model has " +
                                            std::to_string(model.architecture().num_classes) +
                                            " classes, label set has " +
                                            std::to_string(class_names.size()));
  }
  if (samples.empty()) throw Error(ErrorCode::kUndefined, "no samples to evaluate (N=0)");
  for (const nn::Example& e : samples) {
    if (e.label >= class_names.size()) {
      throw Error(ErrorCode::kValidation, "sample label outside the task's class set");
    }
  }
  std::vector<std::size_t> indices(samples.size());
  std::iota(indices.begin(), indices.end(), 0);
  const nn::EvalSummary summary = nn::evaluate_examples(model, samples, indices);
  ConfusionMatrix cm(class_names);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    cm.accumulate(samples[i].label, summary.predicted[i]);
  }
  return cm;
}

ConfusionMatrix evaluate(nn::Network<float>& model,
                         std::span<const LabeledSpectrogram> samples,
                         const TaskLabels& labels) {
  std::vector<nn::Example> examples;
  examples.reserve(samples.size());
  for (const LabeledSpectrogram& s : samples) {
    examples.push_back({nn::cnn_input(s.spectrogram), labels.class_of(s.entry)});
  }
  return evaluate(model, examples, labels.class_names());
}

}  // namespace muzzleprint
