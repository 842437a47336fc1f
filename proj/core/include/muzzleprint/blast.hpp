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

#ifndef MUZZLEPRINT_BLAST_HPP_
#define MUZZLEPRINT_BLAST_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "muzzleprint/audio.hpp"
#include "muzzleprint/dsp/events.hpp"
#include "muzzleprint/dsp/spectrogram.hpp"

namespace muzzleprint {

enum class Verdict { kUnreviewed, kShot, kNoShot };

std::string_view to_string(Verdict v);  // "unreviewed", "shot", "noshot"
std::optional<Verdict> parse_verdict(std::string_view text);

// One detected abrupt change in a recording.
class CandidateEvent {
 public:
  CandidateEvent(std::string id, double time_s, double peak_s,
                 AudioClip svm_slice, dsp::SnrReport snr);

  const std::string& id() const { return id_; }
  // Refined blast onset, seconds from the start of the recording.
  double time_s() const { return time_s_; }
  // Location of the moving-variance peak that triggered the event.
  double peak_s() const { return peak_s_; }
  // 0.4 s from the onset at the recording's sample rate.
  const AudioClip& svm_slice() const { return svm_slice_; }
  // 0.1 s from the onset resampled to 48 kHz: always 4800 samples.
  const AudioClip& cnn_slice() const { return cnn_slice_; }
  const dsp::SnrReport& snr() const { return snr_; }

  std::optional<double> similarity;

  Verdict verdict() const { return verdict_; }
  // Only Unreviewed -> Shot/NoShot is allowed; anything else is kConflict
  // (re-review) or kArgument (reviewing back to Unreviewed).
  void review(Verdict verdict);

 private:
  std::string id_;
  double time_s_;
  double peak_s_;
  AudioClip svm_slice_;
  AudioClip cnn_slice_;
  dsp::SnrReport snr_;
  Verdict verdict_ = Verdict::kUnreviewed;
};

// First 0.1 s of `clip`, resampled to 48 kHz and fitted to 4800 samples.
AudioClip cnn_slice_from(const AudioClip& clip);

struct DetectorConfig {
  double variance_window_s = 0.005;
  double min_prominence = 0.3;
  double min_separation_s = 0.3;
  // Onset gate: first sample above onset_gate x RMS of the preceding
  // noise_window_s, searched inside the variance window before the peak.
  double onset_gate = 3.0;
  double noise_window_s = 0.1;
};

inline constexpr double kMinDetectSeconds = 0.4;

// Moving variance -> prominence peaks -> onset-refined events, in time
// order and all Unreviewed. Event ids are "<source>_<onset ms>".
// Throws kSize for clips shorter than 0.4 s.
std::vector<CandidateEvent> detect_abrupt_changes(
    const AudioClip& clip, const DetectorConfig& cfg = {},
    std::string_view source = "clip");

// 66 x 100 power spectrogram of the event's CNN slice.
dsp::Spectrogram extract_training_image(const CandidateEvent& event);

// Same transform applied to an onset-aligned clip (e.g. a stored slice).
dsp::Spectrogram training_image_for(const AudioClip& onset_aligned);

// Candidate store: `<dir>/candidates.jsonl` plus `<dir>/<ms>.wav` slices
// (zero-padded 8-digit millisecond onset). Rewrites the directory's
// previous store so reruns are idempotent.
void write_candidate_store(const std::filesystem::path& dir,
                           const std::vector<CandidateEvent>& events);
std::vector<CandidateEvent> read_candidate_store(const std::filesystem::path& dir);

std::string slice_file_name(double time_s);

}  // namespace muzzleprint

#endif  // MUZZLEPRINT_BLAST_HPP_
