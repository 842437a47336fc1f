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

#include "muzzleprint/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <optional>
#include <string>

#include "muzzleprint/error.hpp"

namespace muzzleprint {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr double kInt16Scale = 32768.0;

std::uint16_t read_u16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

std::uint32_t read_u32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) |
         (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) |
         (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

bool tag_is(std::span<const std::uint8_t> b, std::size_t at, const char* tag) {
  return std::memcmp(b.data() + at, tag, 4) == 0;
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) {
    out.push_back(static_cast<std::uint8_t>((v >> shift) & 0xff));
  }
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

struct FormatChunk {
  std::uint16_t format;
  std::uint16_t channels;
  std::uint32_t sample_rate;
  std::uint16_t block_align;
  std::uint16_t bits_per_sample;
};

}  // namespace

AudioClip::AudioClip(std::vector<float> samples, int sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
  if (sample_rate_ <= 0) {
    throw Error(ErrorCode::kArgument, "sample rate must be positive");
  }
  if (samples_.empty()) {
    throw Error(ErrorCode::kArgument, "audio clip must not be empty");
  }
  for (float s : samples_) {
    if (!(std::abs(s) <= 1.0f)) {
      throw Error(ErrorCode::kArgument,
                  "audio sample outside [-1, 1]: " + std::to_string(s));
    }
  }
}

std::size_t seconds_to_samples(double seconds, int rate) {
  if (!(seconds >= 0.0) || !std::isfinite(seconds)) {
    throw Error(ErrorCode::kArgument, "duration must be finite and >= 0");
  }
  return static_cast<std::size_t>(std::nearbyint(seconds * rate));
}

AudioClip decode_wav(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12 || !tag_is(bytes, 0, "RIFF") ||
      !tag_is(bytes, 8, "WAVE")) {
    throw Error(ErrorCode::kDecode, "not a RIFF/WAVE container");
  }

  std::optional<FormatChunk> fmt;
  std::optional<std::span<const std::uint8_t>> data;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint32_t chunk_size = read_u32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    if (chunk_size > bytes.size() - body) {
      // Truncated trailing data chunks are common in the wild; accept the
      // bytes that are present, reject anything else.
      if (!tag_is(bytes, pos, "data")) {
        throw Error(ErrorCode::kDecode, "chunk extends past end of file");
      }
    }
    const std::size_t available =
        std::min<std::size_t>(chunk_size, bytes.size() - body);
    if (tag_is(bytes, pos, "fmt ")) {
      if (available < 16) {
        throw Error(ErrorCode::kDecode, "fmt chunk too short");
      }
      fmt = FormatChunk{read_u16(bytes, body), read_u16(bytes, body + 2),
                        read_u32(bytes, body + 4), read_u16(bytes, body + 12),
                        read_u16(bytes, body + 14)};
    } else if (tag_is(bytes, pos, "data")) {
      data = bytes.subspan(body, available);
    }
    // Chunks are word aligned.
    pos = body + available + (available & 1u);
  }

  if (!fmt) throw Error(ErrorCode::kDecode, "missing fmt chunk");
  if (!data) throw Error(ErrorCode::kDecode, "missing data chunk");
  if (fmt->format != kFormatPcm) {
    throw Error(ErrorCode::kUnsupportedFormat,
                "only PCM (format 1) is supported, got format " +
                    std::to_string(fmt->format));
  }
  if (fmt->bits_per_sample != 16) {
    throw Error(ErrorCode::kUnsupportedFormat,
                "only 16-bit samples are supported, got " +
                    std::to_string(fmt->bits_per_sample));
  }
  if (fmt->channels != 1 && fmt->channels != 2) {
    throw Error(ErrorCode::kUnsupportedFormat,
                "only mono or stereo is supported, got " +
                    std::to_string(fmt->channels) + " channels");
  }
  if (fmt->sample_rate == 0 ||
      fmt->sample_rate > static_cast<std::uint32_t>(
                             std::numeric_limits<int>::max())) {
    throw Error(ErrorCode::kDecode, "invalid sample rate");
  }
  if (fmt->block_align != 2 * fmt->channels) {
    throw Error(ErrorCode::kDecode, "block align inconsistent with format");
  }

  const std::size_t frames = data->size() / fmt->block_align;
  if (frames == 0) throw Error(ErrorCode::kDecode, "data chunk is empty");

  std::vector<float> samples(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    const std::size_t at = i * fmt->block_align;
    if (fmt->channels == 1) {
      const auto v = static_cast<std::int16_t>(read_u16(*data, at));
      samples[i] = static_cast<float>(v / kInt16Scale);
    } else {
      const auto l = static_cast<std::int16_t>(read_u16(*data, at));
      const auto r = static_cast<std::int16_t>(read_u16(*data, at + 2));
      samples[i] = static_cast<float>((l + r) / (2.0 * kInt16Scale));
    }
  }
  return AudioClip(std::move(samples), static_cast<int>(fmt->sample_rate));
}

std::vector<std::uint8_t> encode_wav(const AudioClip& clip) {
  const auto data_bytes = static_cast<std::uint32_t>(clip.size() * 2);
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, kFormatPcm);
  put_u16(out, 1);
  put_u32(out, static_cast<std::uint32_t>(clip.sample_rate()));
  put_u32(out, static_cast<std::uint32_t>(clip.sample_rate()) * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  put_tag(out, "data");
  put_u32(out, data_bytes);
  for (float s : clip.samples()) {
    const double scaled = std::nearbyint(static_cast<double>(s) * kInt16Scale);
    const auto v = static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
    put_u16(out, static_cast<std::uint16_t>(v));
  }
  return out;
}

AudioClip read_wav_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kFile, "cannot open " + path.string());
  }
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return decode_wav(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void write_wav_file(const std::filesystem::path& path, const AudioClip& clip) {
  const auto bytes = encode_wav(clip);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kFile, "cannot write " + path.string());
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw Error(ErrorCode::kFile, "short write to " + path.string());
  }
}

AudioClip resample(const AudioClip& clip, int target_rate) {
  if (target_rate <= 0) {
    throw Error(ErrorCode::kArgument, "target rate must be positive");
  }
  if (target_rate == clip.sample_rate()) return clip;

  const auto in = clip.samples();
  const double ratio = static_cast<double>(target_rate) / clip.sample_rate();
  const auto out_len = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(in.size() * ratio)));
  const double step = static_cast<double>(clip.sample_rate()) / target_rate;

  std::vector<float> out(out_len);
  const std::size_t last = in.size() - 1;
  for (std::size_t i = 0; i < out_len; ++i) {
    const double pos = i * step;
    const auto lo = std::min(static_cast<std::size_t>(pos), last);
    const std::size_t hi = std::min(lo + 1, last);
    const double frac = std::clamp(pos - static_cast<double>(lo), 0.0, 1.0);
    const double v = in[lo] + frac * (static_cast<double>(in[hi]) - in[lo]);
    out[i] = static_cast<float>(std::clamp(v, -1.0, 1.0));
  }
  return AudioClip(std::move(out), target_rate);
}

AudioClip slice_clip(const AudioClip& clip, double start_s, double duration_s) {
  if (!(duration_s > 0.0)) {
    throw Error(ErrorCode::kArgument, "slice duration must be positive");
  }
  const std::size_t begin = seconds_to_samples(start_s, clip.sample_rate());
  if (begin >= clip.size()) {
    throw Error(ErrorCode::kRange, "slice start " + std::to_string(start_s) +
                                       " s is beyond the clip end");
  }
  const std::size_t length = seconds_to_samples(duration_s, clip.sample_rate());
  if (length == 0) {
    throw Error(ErrorCode::kArgument, "slice shorter than one sample");
  }
  std::vector<float> out(length, 0.0f);
  const auto in = clip.samples();
  const std::size_t copy = std::min(length, in.size() - begin);
  std::copy_n(in.begin() + static_cast<std::ptrdiff_t>(begin), copy, out.begin());
  return AudioClip(std::move(out), clip.sample_rate());
}

}  // namespace muzzleprint
