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

#include "muzzleprint/shotsvm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

#include <json.hpp>

#include "muzzleprint/error.hpp"
#include "muzzleprint/random.hpp"

namespace muzzleprint::svm {

namespace fs = std::filesystem;
using nlohmann::json;

FeatureVector::FeatureVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() != kFeatureLength) {
    throw Error(ErrorCode::kArgument, "feature vector must have " +
                                          std::to_string(kFeatureLength) +
                                          " entries, got " +
                                          std::to_string(values_.size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kArgument, "non-finite feature");
  }
}

FeatureVector featurize(const AudioClip& svm_slice) {
  const AudioClip at_rate = resample(svm_slice, dsp::kCnnSampleRate);
  const auto spec = dsp::power_spectrogram(at_rate, dsp::kCnnConfig);
  const auto db = dsp::log_psd(spec, kFeatureFloorDb);
  std::vector<double> values(db.rows, 0.0);
  for (std::size_t f = 0; f < db.rows; ++f) {
    double acc = 0.0;
    for (std::size_t t = 0; t < db.cols; ++t) acc += db.at(f, t);
    values[f] = acc / static_cast<double>(db.cols);
  }
  return FeatureVector(std::move(values));
}

FeatureVector featurize(const CandidateEvent& event) {
  return featurize(event.svm_slice());
}

LinearSvmModel svm_train(std::span<const FeatureVector> features,
                         std::span<const Verdict> labels,
                         const SvmTrainConfig& cfg) {
  if (features.size() != labels.size()) {
    throw Error(ErrorCode::kArgument, "features and labels differ in length");
  }
  if (!(cfg.lambda > 0.0) || cfg.epochs <= 0) {
    throw Error(ErrorCode::kArgument, "SVM needs lambda > 0 and epochs > 0");
  }
  std::size_t shots = 0;
  std::size_t noshots = 0;
  for (Verdict v : labels) {
    if (v == Verdict::kShot) {
      ++shots;
    } else if (v == Verdict::kNoShot) {
      ++noshots;
    } else {
      throw Error(ErrorCode::kArgument, "training labels must be shot or noshot");
    }
  }
  if (shots == 0 || noshots == 0) {
    throw Error(ErrorCode::kDegenerateData,
                "SVM training needs both shot and noshot samples (have " +
                    std::to_string(shots) + " shot, " + std::to_string(noshots) +
                    " noshot)");
  }

  const std::size_t n = features.size();
  const std::size_t d = kFeatureLength;

  std::vector<double> mean(d, 0.0);
  std::vector<double> scale(d, 0.0);
  for (const auto& f : features) {
    for (std::size_t j = 0; j < d; ++j) mean[j] += f[j];
  }
  for (double& m : mean) m /= static_cast<double>(n);
  for (const auto& f : features) {
    for (std::size_t j = 0; j < d; ++j) {
      const double c = f[j] - mean[j];
      scale[j] += c * c;
    }
  }
  for (double& s : scale) {
    s = std::sqrt(s / static_cast<double>(n));
    if (s < 1e-12) s = 1.0;
  }

  // Standardised design matrix with a trailing constant column for the bias.
  std::vector<double> z(n * (d + 1));
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      z[i * (d + 1) + j] = (features[i][j] - mean[j]) / scale[j];
    }
    z[i * (d + 1) + d] = 1.0;
    y[i] = labels[i] == Verdict::kShot ? 1.0 : -1.0;
  }

  std::vector<double> w(d + 1, 0.0);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(cfg.seed);
  std::uint64_t t = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t i : order) {
      ++t;
      const double eta = 1.0 / (cfg.lambda * static_cast<double>(t));
      const double* zi = &z[i * (d + 1)];
      double margin = 0.0;
      for (std::size_t j = 0; j <= d; ++j) margin += w[j] * zi[j];
      margin *= y[i];
      const double shrink = 1.0 - eta * cfg.lambda;
      for (std::size_t j = 0; j <= d; ++j) w[j] *= shrink;
      if (margin < 1.0) {
        for (std::size_t j = 0; j <= d; ++j) w[j] += eta * y[i] * zi[j];
      }
    }
  }

  LinearSvmModel model;
  model.weights.resize(d);
  model.bias = w[d];
  for (std::size_t j = 0; j < d; ++j) {
    model.weights[j] = w[j] / scale[j];
    model.bias -= model.weights[j] * mean[j];
  }
  model.trained_on = n;
  return model;
}

double similarity_index(const LinearSvmModel& model, const FeatureVector& x) {
  if (model.weights.size() != x.size()) {
    throw Error(ErrorCode::kArgument, "model and feature dimensions differ");
  }
  double acc = model.bias;
  for (std::size_t j = 0; j < x.size(); ++j) acc += model.weights[j] * x[j];
  return acc;
}

Verdict classify_similarity(double similarity, double thr) {
  return similarity > thr ? Verdict::kShot : Verdict::kNoShot;
}

Verdict classify(const LinearSvmModel& model, const FeatureVector& x, double thr) {
  return classify_similarity(similarity_index(model, x), thr);
}

TrainingSet::TrainingSet(std::vector<TrainingSample> samples) {
  for (auto& s : samples) add(std::move(s));
}

bool TrainingSet::contains(const std::string& id) const {
  return std::any_of(samples_.begin(), samples_.end(),
                     [&](const TrainingSample& s) { return s.id == id; });
}

std::size_t TrainingSet::count(Verdict v) const {
  return static_cast<std::size_t>(
      std::count_if(samples_.begin(), samples_.end(),
                    [v](const TrainingSample& s) { return s.verdict == v; }));
}

void TrainingSet::add(TrainingSample sample) {
  if (sample.verdict == Verdict::kUnreviewed) {
    throw Error(ErrorCode::kArgument, "training sample " + sample.id + " is unreviewed");
  }
  if (contains(sample.id)) {
    throw Error(ErrorCode::kConflict, "training set already holds " + sample.id);
  }
  samples_.push_back(std::move(sample));
}

LinearSvmModel TrainingSet::train(const SvmTrainConfig& cfg) const {
  std::vector<FeatureVector> features;
  std::vector<Verdict> labels;
  features.reserve(samples_.size());
  for (const auto& s : samples_) {
    features.push_back(s.features);
    labels.push_back(s.verdict);
  }
  return svm_train(features, labels, cfg);
}

std::vector<Proposal> rank_candidates(const LinearSvmModel& model,
                                      std::span<const CandidateEvent> candidates,
                                      double thr) {
  std::vector<Proposal> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) {
    const double s = similarity_index(model, featurize(c));
    Proposal p{c, s, classify_similarity(s, thr)};
    p.event.similarity = s;
    out.push_back(std::move(p));
  }
  std::stable_sort(out.begin(), out.end(), [](const Proposal& a, const Proposal& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.event.id() < b.event.id();
  });
  return out;
}

std::vector<Proposal> loop_step(const TrainingSet& training_set,
                                std::span<const CandidateEvent> candidates,
                                const SvmTrainConfig& cfg, double thr) {
  const LinearSvmModel model = training_set.train(cfg);
  return rank_candidates(model, candidates, thr);
}

TrainingSet apply_verdicts(TrainingSet training_set,
                           std::span<const ReviewedEvent> reviewed) {
  std::set<std::string> batch_ids;
  for (const auto& r : reviewed) {
    if (r.verdict == Verdict::kUnreviewed) {
      throw Error(ErrorCode::kArgument, "verdict for " + r.event.id() +
                                            " must be shot or noshot");
    }
    if (r.event.verdict() != Verdict::kUnreviewed) {
      throw Error(ErrorCode::kConflict, "event " + r.event.id() + " was already reviewed");
    }
    if (!batch_ids.insert(r.event.id()).second) {
      throw Error(ErrorCode::kConflict, "event " + r.event.id() +
                                            " appears twice in the review batch");
    }
    if (training_set.contains(r.event.id())) {
      throw Error(ErrorCode::kConflict, "event " + r.event.id() +
                                            " is already in the training set");
    }
  }
  for (const auto& r : reviewed) {
    training_set.add({r.event.id(), featurize(r.event), r.verdict, r.event.similarity});
  }
  return training_set;
}

DetectionMetrics DetectionMetrics::from_counts(std::size_t tp, std::size_t fp,
                                               std::size_t tn, std::size_t fn) {
  DetectionMetrics m;
  m.tp = tp;
  m.fp = fp;
  m.tn = tn;
  m.fn = fn;
  m.n = tp + fp + tn + fn;
  m.actual = tp + fn;
  if (m.n == 0) throw Error(ErrorCode::kArgument, "detection metrics need N > 0");
  m.accuracy = static_cast<double>(tp + tn) / static_cast<double>(m.n);
  return m;
}

DetectionMetrics detection_metrics(std::span<const Verdict> predicted,
                                   std::span<const Verdict> truth) {
  if (predicted.size() != truth.size()) {
    throw Error(ErrorCode::kArgument, "predicted and truth differ in length");
  }
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const bool p = predicted[i] == Verdict::kShot;
    const bool t = truth[i] == Verdict::kShot;
    if (p && t) ++tp;
    else if (p) ++fp;
    else if (t) ++fn;
    else ++tn;
  }
  return DetectionMetrics::from_counts(tp, fp, tn, fn);
}

double display_accuracy(double accuracy) {
  const double rounded = std::round(accuracy * 100.0) / 100.0;
  if (accuracy < 1.0 && rounded >= 1.0) return 0.99;
  return rounded;
}

void append_training_sample(const fs::path& dir, const TrainingSample& sample,
                            const AudioClip& slice) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kFile, "cannot create " + dir.string());
  write_wav_file(dir / (sample.id + ".wav"), slice);
  std::ofstream out(dir / "labels.jsonl", std::ios::app);
  if (!out) throw Error(ErrorCode::kFile, "cannot append to labels.jsonl");
  json rec = {{"id", sample.id},
              {"verdict", to_string(sample.verdict)},
              {"similarity", sample.similarity ? json(*sample.similarity) : json(nullptr)}};
  out << rec.dump() << '\n';
  out.flush();
  if (!out) throw Error(ErrorCode::kFile, "short write to labels.jsonl");
}

TrainingSet load_training_set(const fs::path& dir) {
  TrainingSet set;
  std::ifstream in(dir / "labels.jsonl");
  if (!in) return set;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json rec = json::parse(line);
      const std::string id = rec.at("id").get<std::string>();
      const auto verdict = parse_verdict(rec.at("verdict").get<std::string>());
      if (!verdict || *verdict == Verdict::kUnreviewed) {
        throw Error(ErrorCode::kValidation, "labels.jsonl line " +
                                                std::to_string(line_no) +
                                                ": bad verdict");
      }
      std::optional<double> sim;
      if (rec.contains("similarity") && rec["similarity"].is_number()) {
        sim = rec["similarity"].get<double>();
      }
      set.add({id, featurize(read_wav_file(dir / (id + ".wav"))), *verdict, sim});
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kValidation,
                  "labels.jsonl line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return set;
}

std::string to_json(const LinearSvmModel& model) {
  json j = {{"weights", model.weights},
            {"bias", model.bias},
            {"trained_on", model.trained_on}};
  return j.dump();
}

LinearSvmModel svm_model_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    LinearSvmModel m;
    m.weights = j.at("weights").get<std::vector<double>>();
    m.bias = j.at("bias").get<double>();
    m.trained_on = j.at("trained_on").get<std::size_t>();
    if (m.weights.size() != kFeatureLength) {
      throw Error(ErrorCode::kDecode, "SVM model has wrong weight count");
    }
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kDecode, std::string("SVM model JSON: ") + e.what());
  }
}

}  // namespace muzzleprint::svm
