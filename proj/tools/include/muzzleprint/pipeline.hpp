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

#ifndef MUZZLEPRINT_PIPELINE_HPP_
#define MUZZLEPRINT_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "muzzleprint/blast.hpp"
#include "muzzleprint/evaluation.hpp"
#include "muzzleprint/manifest.hpp"
#include "muzzleprint/nn/train.hpp"
#include "muzzleprint/project.hpp"

namespace muzzleprint::pipeline {

// Toolkit version stamped into reports and checkpoints.
const std::string& toolkit_version();

// Exclusive advisory lock on the project's lock file, held for the
// object's lifetime. kLocked when another process holds it.
class ProjectLock {
 public:
  explicit ProjectLock(const ProjectLayout& project);
  ~ProjectLock();
  ProjectLock(const ProjectLock&) = delete;
  ProjectLock& operator=(const ProjectLock&) = delete;

 private:
  int fd_ = -1;
};

// Flag name -> rendered value, recorded in every report.
using FlagSet = std::map<std::string, std::string>;

struct DetectResult {
  std::filesystem::path store;  // per-recording directory
  std::size_t events = 0;
};

// One candidate store per input under out_dir/<file stem>/.
std::vector<DetectResult> cmd_detect(const std::vector<std::filesystem::path>& audio,
                                     const std::filesystem::path& out_dir,
                                     const DetectorConfig& cfg = {});

// Manifest entries resolved to network inputs. Relative paths are
// resolved against the manifest's directory.
struct Dataset {
  std::vector<ManifestEntry> entries;
  std::vector<nn::Example> examples;
};
Dataset load_dataset(const std::filesystem::path& manifest, const TaskLabels& labels);

struct TrainOptions {
  ProjectLayout project;
  Task task = Task::kCategory;
  std::filesystem::path manifest;    // default: project manifest
  std::filesystem::path checkpoint;  // default: checkpoints/<task>.mzpt
  nn::TrainConfig train;
  FlagSet flags;
};

struct TrainSummary {
  std::filesystem::path checkpoint;
  std::filesystem::path report;
  std::string checkpoint_digest;
  double final_val_accuracy = 0.0;
  std::vector<std::string> class_names;
};

// Learning rates outside [1e-4, 3e-4] are accepted with a warning on log.
TrainSummary cmd_train(const TrainOptions& options, std::ostream& log);

struct EvalOptions {
  ProjectLayout project;
  std::filesystem::path checkpoint;
  std::filesystem::path manifest;  // default: project manifest
  Task task = Task::kCategory;
  FlagSet flags;
};

struct EvalSummary {
  ConfusionMatrix matrix;
  std::filesystem::path report;
};

// kFile for a missing checkpoint, kArgument when the checkpoint was
// trained for another task.
EvalSummary cmd_eval(const EvalOptions& options);

// Classes ranked by descending probability (ties by class order).
std::vector<std::pair<std::string, double>> cmd_infer(const std::filesystem::path& checkpoint,
                                                      const std::filesystem::path& wav);

// Serves the review API until SIGINT/SIGTERM.
void cmd_review_serve(const ProjectLayout& project, int port, const std::string& host,
                      const std::filesystem::path& static_dir, std::ostream& log);

// Full CLI: `muzzleprint <detect|review|train|eval|infer> [flags]`.
// Errors print one line `error: <code>: <message>` and return nonzero.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace muzzleprint::pipeline

#endif  // MUZZLEPRINT_PIPELINE_HPP_
