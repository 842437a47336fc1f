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

#ifndef MUZZLEPRINT_MANIFEST_HPP_
#define MUZZLEPRINT_MANIFEST_HPP_

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "muzzleprint/labels.hpp"

namespace muzzleprint {

struct ManifestEntry {
  std::string path;
  std::string gun_model;
  Caliber caliber;
  Category category;
  int id;
  // 1-based line in the source text; 0 for entries built in code.
  std::size_t line = 0;
};

// Parses JSON Lines with fields path, gun_model, caliber, category, id.
// Blank lines are skipped. Throws kValidation naming the line for bad
// fields or a category that disagrees with the caliber, and kConflict when
// one id maps to two gun models (or one model to two ids).
std::vector<ManifestEntry> load_manifest(std::string_view text);
std::vector<ManifestEntry> load_manifest_file(const std::filesystem::path& path);

std::string to_json_line(const ManifestEntry& entry);

// Label projection of a shared manifest onto one classification task.
enum class Task { kCategory, kCaliber, kModel };

std::string_view to_string(Task task);
Task parse_task(std::string_view text);

class TaskLabels {
 public:
  // Category and caliber use the closed label sets; the model task uses the
  // distinct gun models present in `entries`, ordered by id.
  TaskLabels(Task task, const std::vector<ManifestEntry>& entries);
  // Rebuilds a projection from stored class names (checkpoint metadata).
  TaskLabels(Task task, std::vector<std::string> class_names);

  Task task() const { return task_; }
  const std::vector<std::string>& class_names() const { return names_; }
  std::size_t num_classes() const { return names_.size(); }

  // Throws kValidation when the entry's label is outside this task's set.
  std::size_t class_of(const ManifestEntry& entry) const;

 private:
  Task task_;
  std::vector<std::string> names_;
};

}  // namespace muzzleprint

#endif  // MUZZLEPRINT_MANIFEST_HPP_
