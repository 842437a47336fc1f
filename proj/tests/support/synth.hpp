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

#ifndef MUZZLEPRINT_TESTS_SUPPORT_SYNTH_HPP_
#define MUZZLEPRINT_TESTS_SUPPORT_SYNTH_HPP_

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "muzzleprint/audio.hpp"
#include "muzzleprint/nn/train.hpp"
#include "muzzleprint/random.hpp"

namespace muzzleprint::testing {

// Gaussian noise floor plus decaying random-sign impulses, clamped to
// [-1, 1]. Impulse k starts exactly at onsets[k].
AudioClip impulse_trace(double duration_s, int rate, const std::vector<double>& onsets,
                        Rng& rng, double noise_std = 0.01, double amplitude = 0.9,
                        double decay_s = 0.02);

// K onsets in [0.5, duration - 0.6] with at least min_gap_s between them.
std::vector<double> random_onsets(std::size_t k, double duration_s, double min_gap_s,
                                  Rng& rng);

// Seven-class burst family: class c has its own centre frequency
// (1 kHz .. 22 kHz) and decay constant.
struct BurstClass {
  double center_hz;
  double decay_s;
};
std::vector<BurstClass> burst_classes(std::size_t n = 7);

// 0.1 s at 48 kHz: a decaying tone of the class with jittered frequency,
// amplitude and onset, plus noise at a random SNR between snr_lo and
// snr_hi dB.
AudioClip burst_clip(const BurstClass& cls, Rng& rng, double snr_lo = 10.0,
                     double snr_hi = 30.0);

// `per_class` network inputs per burst class, labels 0..n-1.
std::vector<nn::Example> burst_dataset(std::size_t classes, std::size_t per_class,
                                       std::uint64_t seed);

// 0.4 s at 48 kHz, shot-like: broadband decaying burst over a noise floor.
AudioClip shot_slice(Rng& rng);
// 0.4 s at 48 kHz, not a shot: a low tone or plain background noise.
AudioClip noshot_slice(Rng& rng);
// Same family with the background pinned to the shot slices' 0.01 noise
// floor, so the two classes differ only by the burst.
AudioClip matched_noshot_slice(Rng& rng);

// Writes <dir>/<name>.wav per clip plus manifest.jsonl. Classes map onto
// the given calibers in order (category follows from the caliber).
struct ProjectSample {
  std::string name;
  AudioClip clip;
  std::size_t caliber_index;
};
void write_project(const std::filesystem::path& root, const std::vector<ProjectSample>& samples);

// Fresh empty directory under the system temp dir.
std::filesystem::path fresh_dir(const std::string& name);

}  // namespace muzzleprint::testing

#endif  // MUZZLEPRINT_TESTS_SUPPORT_SYNTH_HPP_
