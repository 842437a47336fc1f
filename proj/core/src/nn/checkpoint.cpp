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

#include "muzzleprint/nn/checkpoint.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <cstdio>
#include <fstream>
#include <iterator>

#include <json.hpp>

#include "muzzleprint/error.hpp"

namespace muzzleprint::nn {

namespace {

using json = nlohmann::json;

constexpr char kMagic[4] = {'M', 'Z', 'P', 'T'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> bytes, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[at + i]) << (8 * i);
  return v;
}

json shape_json(const Shape& s) { return json::array({s.n, s.h, s.w, s.c}); }

json architecture_json(const Architecture& a) {
  return {{"input_h", a.input_h},
          {"input_w", a.input_w},
          {"channels", a.channels},
          {"kernel", a.kernel},
          {"final_pool_w", a.final_pool_w},
          {"dropout", a.dropout},
          {"num_classes", a.num_classes}};
}

Architecture architecture_from(const json& j) {
  Architecture a;
  a.input_h = j.at("input_h").get<std::size_t>();
  a.input_w = j.at("input_w").get<std::size_t>();
  a.channels = j.at("channels").get<std::array<std::size_t, kNumBlocks>>();
  a.kernel = j.at("kernel").get<std::size_t>();
  a.final_pool_w = j.at("final_pool_w").get<std::size_t>();
  a.dropout = j.at("dropout").get<double>();
  a.num_classes = j.at("num_classes").get<std::size_t>();
  return a;
}

std::span<const std::uint8_t> tensor_bytes(const Tensor<float>& t) {
  return {reinterpret_cast<const std::uint8_t*>(t.raw()), t.size() * sizeof(float)};
}

}  // namespace

std::string fnv1a_hex(std::span<const std::uint8_t> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFile, "cannot open " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  return fnv1a_hex(bytes);
}

std::vector<std::uint8_t> encode_checkpoint(const Network<float>& model,
                                            const CheckpointMeta& meta) {
  static_assert(std::endian::native == std::endian::little,
                "checkpoint writer assumes a little-endian host");
  const auto tensors = model.state();
  const auto names = model.state_names();
  json layout = json::array();
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    layout.push_back({{"name", names[i]}, {"shape", shape_json(tensors[i]->shape())}});
  }
  const json j = {{"architecture", architecture_json(model.architecture())},
                  {"num_classes", model.architecture().num_classes},
                  {"class_names", meta.class_names},
                  {"task", meta.task},
                  {"seed", meta.seed},
                  {"toolkit_version", meta.toolkit_version},
                  {"layout", "nhwc"},
                  {"flatten_order", "height,width,channel"},
                  {"mean_image_digest", fnv1a_hex(tensor_bytes(model.mean_image()))},
                  {"tensors", layout}};
  const std::string text = j.dump();

  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  put_u32(out, kCheckpointVersion);
  put_u32(out, static_cast<std::uint32_t>(text.size()));
  out.insert(out.end(), text.begin(), text.end());
  for (const Tensor<float>* t : tensors) {
    const auto b = tensor_bytes(*t);
    out.insert(out.end(), b.begin(), b.end());
  }
  return out;
}

Checkpoint decode_checkpoint(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12 || !std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin(),
                                       [](char a, std::uint8_t b) { return static_cast<std::uint8_t>(a) == b; })) {
    throw Error(ErrorCode::kDecode, "not a muzzleprint checkpoint");
  }
  const std::uint32_t version = get_u32(bytes, 4);
  if (version != kCheckpointVersion) {
    throw Error(ErrorCode::kUnsupportedFormat,
                "checkpoint version " + std::to_string(version) + " is not supported");
  }
  const std::size_t meta_len = get_u32(bytes, 8);
  if (bytes.size() < 12 + meta_len) throw Error(ErrorCode::kDecode, "truncated checkpoint metadata");

  json j;
  try {
    j = json::parse(bytes.begin() + 12, bytes.begin() + 12 + static_cast<std::ptrdiff_t>(meta_len));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kDecode, std::string("checkpoint metadata: ") + e.what());
  }

  try {
    Checkpoint ck{Network<float>(architecture_from(j.at("architecture"))), {}};
    ck.meta.class_names = j.at("class_names").get<std::vector<std::string>>();
    ck.meta.task = j.at("task").get<std::string>();
    ck.meta.seed = j.at("seed").get<std::uint64_t>();
    ck.meta.toolkit_version = j.value("toolkit_version", "");
    if (ck.meta.class_names.size() != ck.model.architecture().num_classes) {
      throw Error(ErrorCode::kDecode, "class name count does not match the architecture");
    }

    auto tensors = ck.model.state();
    const auto names = ck.model.state_names();
    const json& layout = j.at("tensors");
    if (layout.size() != tensors.size()) {
      throw Error(ErrorCode::kUnsupportedFormat, "unexpected tensor count in checkpoint");
    }
    std::size_t at = 12 + meta_len;
    for (std::size_t i = 0; i < tensors.size(); ++i) {
      const auto s = layout[i].at("shape").get<std::array<std::size_t, 4>>();
      if (layout[i].at("name").get<std::string>() != names[i] ||
          !(Shape{s[0], s[1], s[2], s[3]} == tensors[i]->shape())) {
        throw Error(ErrorCode::kUnsupportedFormat, "tensor " + names[i] + " layout mismatch");
      }
      const std::size_t len = tensors[i]->size() * sizeof(float);
      if (bytes.size() < at + len) throw Error(ErrorCode::kDecode, "truncated tensor data");
      std::memcpy(tensors[i]->raw(), bytes.data() + at, len);
      at += len;
    }
    if (at != bytes.size()) throw Error(ErrorCode::kDecode, "trailing bytes in checkpoint");
    if (j.at("mean_image_digest").get<std::string>() !=
        fnv1a_hex(tensor_bytes(ck.model.mean_image()))) {
      throw Error(ErrorCode::kDecode, "mean image digest mismatch");
    }
    return ck;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kDecode, std::string("checkpoint metadata: ") + e.what());
  }
}

void save_checkpoint(const std::filesystem::path& path, const Network<float>& model,
                     const CheckpointMeta& meta) {
  const auto bytes = encode_checkpoint(model, meta);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kFile, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kFile, "short write to " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFile, "cannot open checkpoint " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  try {
    return decode_checkpoint(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

}  // namespace muzzleprint::nn
