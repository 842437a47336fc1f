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

#ifndef MUZZLEPRINT_AUDIO_HPP_
#define MUZZLEPRINT_AUDIO_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace muzzleprint {

// Mono PCM audio with amplitudes in [-1, 1]. Immutable once built; the
// constructor rejects empty buffers, out-of-range samples and
// non-positive sample rates.
class AudioClip {
 public:
  AudioClip(std::vector<float> samples, int sample_rate);

  std::span<const float> samples() const { return samples_; }
  int sample_rate() const { return sample_rate_; }
  std::size_t size() const { return samples_.size(); }
  double duration() const {
    return static_cast<double>(samples_.size()) / sample_rate_;
  }

  bool operator==(const AudioClip&) const = default;

 private:
  std::vector<float> samples_;
  int sample_rate_;
};

// Decodes a RIFF/WAVE PCM 16-bit container with one or two channels.
// Stereo frames are averaged; integers are scaled by 1/32768.
AudioClip decode_wav(std::span<const std::uint8_t> bytes);

// Encodes as mono PCM 16-bit. Samples are scaled by 32768, rounded to
// nearest and saturated to the int16 range.
std::vector<std::uint8_t> encode_wav(const AudioClip& clip);

AudioClip read_wav_file(const std::filesystem::path& path);
void write_wav_file(const std::filesystem::path& path, const AudioClip& clip);

// Linear-interpolation resampling. Output length is
// round(size * target_rate / sample_rate).
AudioClip resample(const AudioClip& clip, int target_rate);

// Extracts round(duration_s * rate) samples starting at round(start_s * rate).
// Samples past the end of the clip are zero-filled.
AudioClip slice_clip(const AudioClip& clip, double start_s, double duration_s);

// Converts seconds to a sample count at `rate` with round-half-away rounding.
std::size_t seconds_to_samples(double seconds, int rate);

}  // namespace muzzleprint

#endif  // MUZZLEPRINT_AUDIO_HPP_
