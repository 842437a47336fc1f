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

#ifndef MUZZLEPRINT_NN_CHECKPOINT_HPP_
#define MUZZLEPRINT_NN_CHECKPOINT_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "muzzleprint/nn/network.hpp"

namespace muzzleprint::nn {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct CheckpointMeta {
  std::vector<std::string> class_names;
  std::string task;
  std::uint64_t seed = 0;
  std::string toolkit_version;
};

// 64-bit FNV-1a, rendered as 16 lowercase hex digits.
std::string fnv1a_hex(std::span<const std::uint8_t> bytes);
std::string file_digest(const std::filesystem::path& path);

// Layout: "MZPT", u32 version, u32 metadata length, metadata JSON, then
// every Network::state() tensor as little-endian float32 in state order.
// Tensors are NHWC; the fc input is flattened (height, width, channel).
std::vector<std::uint8_t> encode_checkpoint(const Network<float>& model,
                                            const CheckpointMeta& meta);

struct Checkpoint {
  Network<float> model;
  CheckpointMeta meta;
};

// kDecode on a malformed container, kUnsupportedFormat on a version or
// tensor layout this build does not know.
Checkpoint decode_checkpoint(std::span<const std::uint8_t> bytes);

void save_checkpoint(const std::filesystem::path& path, const Network<float>& model,
                     const CheckpointMeta& meta);
// kFile when the path cannot be read.
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace muzzleprint::nn

#endif  // MUZZLEPRINT_NN_CHECKPOINT_HPP_
