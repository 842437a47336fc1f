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

#ifndef MUZZLEPRINT_PROJECT_HPP_
#define MUZZLEPRINT_PROJECT_HPP_

#include <filesystem>

namespace muzzleprint {

// On-disk layout shared by the CLI and the review service.
struct ProjectLayout {
  std::filesystem::path root;

  std::filesystem::path manifest() const { return root / "manifest.jsonl"; }
  std::filesystem::path candidates() const { return root / "candidates"; }
  std::filesystem::path trainset() const { return root / "trainset"; }
  std::filesystem::path checkpoints() const { return root / "checkpoints"; }
  std::filesystem::path reports() const { return root / "reports"; }
  std::filesystem::path lock_file() const { return root / ".muzzleprint.lock"; }
};

}  // namespace muzzleprint

#endif  // MUZZLEPRINT_PROJECT_HPP_
