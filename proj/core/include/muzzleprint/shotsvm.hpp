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

#ifndef MUZZLEPRINT_SHOTSVM_HPP_
#define MUZZLEPRINT_SHOTSVM_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "muzzleprint/blast.hpp"

namespace muzzleprint::svm {

inline constexpr std::size_t kFeatureLength = 66;
inline constexpr double kFeatureFloorDb = -120.0;

// Per-frequency-bin time average of the dB spectrogram of a 0.4 s slice.
class FeatureVector {
 public:
  // Throws kArgument unless values has kFeatureLength finite entries.
  explicit FeatureVector(std::vector<double> values);

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<double> values_;
};

FeatureVector featurize(const AudioClip& svm_slice);
FeatureVector featurize(const CandidateEvent& event);

struct LinearSvmModel {
  std::vector<double> weights;
  double bias = 0.0;
  std::size_t trained_on = 0;
};

struct SvmTrainConfig {
  double lambda = 1e-4;
  int epochs = 200;
  std::uint64_t seed = 0;
};

// L2-regularised hinge loss minimised with Pegasos-style subgradient steps
// (step 1/(lambda t)) on standardised features; the standardisation is
// folded back into the returned weights and bias. The bias is trained as
// a constant augmented feature. Throws kDegenerateData unless both Shot and
// NoShot labels are present, kArgument on size mismatch or unreviewed labels.
LinearSvmModel svm_train(std::span<const FeatureVector> features,
                         std::span<const Verdict> labels,
                         const SvmTrainConfig& cfg = {});

// Raw decision value w . x + b.
double similarity_index(const LinearSvmModel& model, const FeatureVector& x);

// Shot iff similarity > thr.
Verdict classify(const LinearSvmModel& model, const FeatureVector& x,
                 double thr = 0.0);
Verdict classify_similarity(double similarity, double thr = 0.0);

struct TrainingSample {
  std::string id;
  FeatureVector features;
  Verdict verdict;
  std::optional<double> similarity;  // decision value at review time
};

class TrainingSet {
 public:
  TrainingSet() = default;
  explicit TrainingSet(std::vector<TrainingSample> samples);

  const std::vector<TrainingSample>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  bool contains(const std::string& id) const;
  std::size_t count(Verdict v) const;

  // Throws kConflict when the id is already present.
  void add(TrainingSample sample);

  LinearSvmModel train(const SvmTrainConfig& cfg = {}) const;

 private:
  std::vector<TrainingSample> samples_;
};

struct Proposal {
  CandidateEvent event;
  double similarity;
  Verdict predicted;
};

// Trains a fresh model on the current set and ranks the candidates by
// descending similarity (ties by id). The returned events carry the score.
std::vector<Proposal> loop_step(const TrainingSet& training_set,
                                std::span<const CandidateEvent> candidates,
                                const SvmTrainConfig& cfg = {},
                                double thr = 0.0);
std::vector<Proposal> rank_candidates(const LinearSvmModel& model,
                                      std::span<const CandidateEvent> candidates,
                                      double thr = 0.0);

struct ReviewedEvent {
  CandidateEvent event;
  Verdict verdict;
};

// Appends every reviewed event with its human verdict. The whole batch is
// rejected (kConflict) when an event was already reviewed, repeats within
// the batch, or is already in the set; kArgument for an Unreviewed verdict.
TrainingSet apply_verdicts(TrainingSet training_set,
                           std::span<const ReviewedEvent> reviewed);

struct DetectionMetrics {
  std::size_t n = 0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;
  std::size_t actual = 0;
  double accuracy = 0.0;  // exact (tp + tn) / n

  static DetectionMetrics from_counts(std::size_t tp, std::size_t fp,
                                      std::size_t tn, std::size_t fn);
};

// Counts Shot as the positive class. Throws kArgument on length mismatch
// or empty input.
DetectionMetrics detection_metrics(std::span<const Verdict> predicted,
                                   std::span<const Verdict> truth);

// Accuracy rounded to two decimals for display. An imperfect score is
// capped at 0.99 so only an error-free run displays as 1.00.
double display_accuracy(double accuracy);

// Persistence: `<dir>/labels.jsonl` (id, verdict, similarity) plus
// `<dir>/<id>.wav` holding each sample's 0.4 s slice.
void append_training_sample(const std::filesystem::path& dir,
                            const TrainingSample& sample, const AudioClip& slice);
TrainingSet load_training_set(const std::filesystem::path& dir);

std::string to_json(const LinearSvmModel& model);
LinearSvmModel svm_model_from_json(const std::string& text);

}  // namespace muzzleprint::svm

#endif  // MUZZLEPRINT_SHOTSVM_HPP_
