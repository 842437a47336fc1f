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

#ifndef MUZZLEPRINT_REVIEW_SERVICE_HPP_
#define MUZZLEPRINT_REVIEW_SERVICE_HPP_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "muzzleprint/blast.hpp"
#include "muzzleprint/dsp/spectrogram.hpp"
#include "muzzleprint/project.hpp"
#include "muzzleprint/shotsvm.hpp"

namespace muzzleprint::review {

struct CandidateView {
  std::string id;
  double time_s = 0.0;
  double snr_db = 0.0;
  std::optional<double> similarity;
  std::optional<Verdict> predicted;  // present once a model has scored it
  Verdict verdict = Verdict::kUnreviewed;
};

struct RetrainResult {
  std::uint64_t iteration = 0;
  std::size_t trainset_size = 0;
  std::size_t rescored = 0;
};

struct SessionInfo {
  std::uint64_t iteration = 0;
  std::size_t trainset_size = 0;
  std::size_t candidates = 0;
  std::size_t unreviewed = 0;
  std::size_t shots = 0;
  std::size_t noshots = 0;
  bool has_model = false;
};

// Review state of one project. Candidates come from candidates/, verdicts
// are appended to trainset/labels.jsonl, the current model lives in
// trainset/svm_model.json and the loop counter in trainset/session.json.
// Candidate stores are read from candidates/ and its subdirectories.
// Reads are concurrent; verdicts and retrains are serialised.
class ReviewSession {
 public:
  explicit ReviewSession(ProjectLayout project, svm::SvmTrainConfig cfg = {});

  // Sorted by descending similarity; unscored candidates last; ties by id.
  std::vector<CandidateView> candidates(std::optional<Verdict> state = std::nullopt) const;

  // kNotFound for an unknown id.
  CandidateView candidate(const std::string& id) const;
  std::vector<std::uint8_t> audio(const std::string& id) const;
  dsp::Spectrogram spectrogram(const std::string& id) const;

  // kNotFound, kConflict on a second verdict, kArgument for Unreviewed.
  void submit_verdict(const std::string& id, Verdict verdict);

  // Trains on every verdict, rescores the unreviewed candidates and bumps
  // the iteration. kLocked while another retrain runs; kDegenerateData
  // unless both labels are present.
  RetrainResult retrain();

  // Holds the retrain slot; empty when a retrain is already in flight.
  std::optional<std::unique_lock<std::mutex>> try_lock_retrain();

  SessionInfo info() const;
  const ProjectLayout& project() const { return project_; }

 private:
  CandidateView view(const CandidateEvent& e) const;
  const CandidateEvent& find(const std::string& id) const;
  void rescore_locked();
  void save_session_locked() const;

  ProjectLayout project_;
  svm::SvmTrainConfig cfg_;
  mutable std::shared_mutex state_mutex_;
  std::mutex retrain_mutex_;
  std::vector<CandidateEvent> events_;
  svm::TrainingSet training_set_;
  std::optional<svm::LinearSvmModel> model_;
  std::uint64_t iteration_ = 0;
};

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::filesystem::path static_dir;  // optional UI assets
  std::string version;
};

// JSON-over-HTTP front end for a ReviewSession.
class ReviewServer {
 public:
  ReviewServer(ReviewSession& session, ServerOptions options);
  ~ReviewServer();
  ReviewServer(const ReviewServer&) = delete;
  ReviewServer& operator=(const ReviewServer&) = delete;

  // Binds the socket and returns the port; kConfiguration if it fails.
  int bind();
  // Serves until stop(); bind() is called first when needed.
  void listen();
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace muzzleprint::review

#endif  // MUZZLEPRINT_REVIEW_SERVICE_HPP_
