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

#include "muzzleprint/pipeline.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <csignal>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "muzzleprint/audio.hpp"
#include "muzzleprint/error.hpp"
#include "muzzleprint/nn/checkpoint.hpp"
#include "muzzleprint/review_service.hpp"

#ifndef MUZZLEPRINT_VERSION_STRING
#define MUZZLEPRINT_VERSION_STRING "0.0.0"
#endif

namespace muzzleprint::pipeline {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr double kAdvisedLrMin = 1e-4;
constexpr double kAdvisedLrMax = 3e-4;

void ensure_dir(const fs::path& dir) {
  if (dir.empty()) return;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kFile, "cannot create " + dir.string() + ": " + ec.message());
}

void write_report(const fs::path& path, const json& report) {
  ensure_dir(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kFile, "cannot write " + path.string());
  out << report.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::kFile, "short write to " + path.string());
}

// Path as recorded in reports: relative to the project root when inside it.
std::string report_path(const ProjectLayout& project, const fs::path& p) {
  const fs::path abs = fs::weakly_canonical(fs::absolute(p));
  const fs::path root = fs::weakly_canonical(fs::absolute(project.root));
  const fs::path rel = abs.lexically_relative(root);
  if (!rel.empty() && *rel.begin() != "..") return rel.generic_string();
  return abs.generic_string();
}

std::string format_double(double v) {
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

nn::Example example_for(const fs::path& wav, std::size_t label) {
  return {nn::cnn_input(training_image_for(read_wav_file(wav))), label};
}

}  // namespace

const std::string& toolkit_version() {
  static const std::string version = MUZZLEPRINT_VERSION_STRING;
  return version;
}

ProjectLock::ProjectLock(const ProjectLayout& project) {
  ensure_dir(project.root);
  const fs::path path = project.lock_file();
  fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  if (fd_ < 0) throw Error(ErrorCode::kFile, "cannot open lock file " + path.string());
  if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
    ::close(fd_);
    fd_ = -1;
    throw Error(ErrorCode::kLocked,
                "project " + project.root.string() + " is in use by another command");
  }
}

ProjectLock::~ProjectLock() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

std::vector<DetectResult> cmd_detect(const std::vector<fs::path>& audio,
                                     const fs::path& out_dir, const DetectorConfig& cfg) {
  if (audio.empty()) throw Error(ErrorCode::kArgument, "no audio files given");
  std::vector<DetectResult> results;
  std::vector<std::string> stems;
  for (const fs::path& path : audio) {
    const std::string stem = path.stem().string();
    if (std::find(stems.begin(), stems.end(), stem) != stems.end()) {
      throw Error(ErrorCode::kConflict, "two inputs share the name " + stem);
    }
    stems.push_back(stem);
  }
  for (std::size_t i = 0; i < audio.size(); ++i) {
    const AudioClip clip = read_wav_file(audio[i]);
    const auto events = detect_abrupt_changes(clip, cfg, stems[i]);
    const fs::path store = out_dir / stems[i];
    write_candidate_store(store, events);
    results.push_back({store, events.size()});
  }
  return results;
}

Dataset load_dataset(const fs::path& manifest, const TaskLabels& labels) {
  Dataset d;
  d.entries = load_manifest_file(manifest);
  const fs::path base = manifest.parent_path();
  for (const ManifestEntry& e : d.entries) {
    const std::size_t label = labels.class_of(e);
    const fs::path wav = fs::path(e.path).is_absolute() ? fs::path(e.path) : base / e.path;
    d.examples.push_back(example_for(wav, label));
  }
  return d;
}

TrainSummary cmd_train(const TrainOptions& options, std::ostream& log) {
  const nn::TrainConfig& cfg = options.train;
  cfg.validate();
  if (cfg.initial_lr < kAdvisedLrMin || cfg.initial_lr > kAdvisedLrMax) {
    log << "warning: learning rate " << cfg.initial_lr
        << " is outside the advised range [1e-4, 3e-4]\n";
  }
  const fs::path manifest = options.manifest.empty() ? options.project.manifest() : options.manifest;
  const std::vector<ManifestEntry> entries = load_manifest_file(manifest);
  const TaskLabels labels(options.task, entries);
  const Dataset data = load_dataset(manifest, labels);

  nn::Architecture arch;
  arch.num_classes = labels.num_classes();
  const std::string task = std::string(to_string(options.task));
  const nn::TrainResult result = nn::train(
      data.examples, arch, cfg, [&](const nn::HistoryPoint& p) {
        if (p.val_accuracy) {
          log << "epoch " << p.epoch << " iteration " << p.iteration << " loss "
              << p.train_loss << " val_loss " << *p.val_loss << " val_accuracy "
              << *p.val_accuracy << '\n';
        }
      });

  TrainSummary summary;
  summary.class_names = labels.class_names();
  summary.checkpoint = options.checkpoint.empty()
                           ? options.project.checkpoints() / (task + ".mzpt")
                           : options.checkpoint;
  ensure_dir(summary.checkpoint.parent_path());
  nn::save_checkpoint(summary.checkpoint, result.model,
                      {labels.class_names(), task, cfg.seed, toolkit_version()});
  summary.checkpoint_digest = nn::file_digest(summary.checkpoint);
  summary.final_val_accuracy = result.final_val_accuracy;

  FlagSet flags = options.flags;
  flags["task"] = task;
  flags["seed"] = std::to_string(cfg.seed);
  flags["lr"] = format_double(cfg.initial_lr);
  flags["epochs"] = std::to_string(cfg.max_epochs);
  flags["batch"] = std::to_string(cfg.batch_size);
  flags["val_fraction"] = format_double(cfg.val_fraction);

  json history = json::array();
  for (const nn::HistoryPoint& p : result.history) {
    json h = {{"epoch", p.epoch},
              {"iteration", p.iteration},
              {"train_loss", p.train_loss},
              {"train_accuracy", p.train_accuracy}};
    if (p.val_accuracy) {
      h["val_loss"] = *p.val_loss;
      h["val_accuracy"] = *p.val_accuracy;
    }
    history.push_back(h);
  }
  summary.report = options.project.reports() / ("train-" + task + ".json");
  write_report(summary.report,
               {{"command", "train"},
                {"toolkit_version", toolkit_version()},
                {"flags", flags},
                {"manifest", report_path(options.project, manifest)},
                {"checkpoint", report_path(options.project, summary.checkpoint)},
                {"checkpoint_digest", summary.checkpoint_digest},
                {"classes", labels.class_names()},
                {"train_size", result.train_indices.size()},
                {"val_size", result.val_indices.size()},
                {"final_val_accuracy", result.final_val_accuracy},
                {"final_val_loss", result.final_val_loss},
                {"history", history}});
  return summary;
}

EvalSummary cmd_eval(const EvalOptions& options) {
  nn::Checkpoint ck = nn::load_checkpoint(options.checkpoint);
  const std::string task = std::string(to_string(options.task));
  if (ck.meta.task != task) {
    throw Error(ErrorCode::kArgument, "checkpoint was trained for task " + ck.meta.task +
                                          ", not " + task);
  }
  const fs::path manifest = options.manifest.empty() ? options.project.manifest() : options.manifest;
  const TaskLabels labels(options.task, ck.meta.class_names);
  const Dataset data = load_dataset(manifest, labels);
  EvalSummary summary{evaluate(ck.model, data.examples, labels.class_names()), {}};

  FlagSet flags = options.flags;
  flags["task"] = task;
  json report = json::parse(to_json(summary.matrix));
  report["command"] = "eval";
  report["toolkit_version"] = toolkit_version();
  report["flags"] = flags;
  report["checkpoint"] = report_path(options.project, options.checkpoint);
  report["checkpoint_digest"] = nn::file_digest(options.checkpoint);
  report["manifest"] = report_path(options.project, manifest);
  report["n"] = summary.matrix.total();
  summary.report = options.project.reports() / ("eval-" + task + ".json");
  write_report(summary.report, report);
  return summary;
}

std::vector<std::pair<std::string, double>> cmd_infer(const fs::path& checkpoint,
                                                      const fs::path& wav) {
  nn::Checkpoint ck = nn::load_checkpoint(checkpoint);
  const nn::Example ex = example_for(wav, 0);
  const nn::Tensor<float> probs = ck.model.predict(ex.image);
  std::vector<std::pair<std::string, double>> ranked;
  for (std::size_t i = 0; i < ck.meta.class_names.size(); ++i) {
    ranked.emplace_back(ck.meta.class_names[i], probs[i]);
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return ranked;
}

namespace {
std::atomic<review::ReviewServer*> g_server{nullptr};

extern "C" void stop_server(int) {
  if (review::ReviewServer* s = g_server.load()) s->stop();
}
}  // namespace

void cmd_review_serve(const ProjectLayout& project, int port, const std::string& host,
                      const fs::path& static_dir, std::ostream& log) {
  review::ReviewSession session(project);
  review::ReviewServer server(session, {host, port, static_dir, toolkit_version()});
  const int bound = server.bind();
  log << "review service listening on http://" << host << ':' << bound << '\n' << std::flush;
  g_server.store(&server);
  auto old_int = std::signal(SIGINT, stop_server);
  auto old_term = std::signal(SIGTERM, stop_server);
  server.listen();
  std::signal(SIGINT, old_int);
  std::signal(SIGTERM, old_term);
  g_server.store(nullptr);
}

}  // namespace muzzleprint::pipeline
