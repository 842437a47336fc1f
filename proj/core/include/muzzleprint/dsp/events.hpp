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

#ifndef MUZZLEPRINT_DSP_EVENTS_HPP_
#define MUZZLEPRINT_DSP_EVENTS_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "muzzleprint/audio.hpp"

namespace muzzleprint::dsp {

// Unbiased variance of the trailing window ending at each sample. The first
// window-1 outputs use the available prefix (0 when it has one sample).
std::vector<double> moving_variance(std::span<const double> signal,
                                    std::size_t window);
// Window given in seconds; rounds to samples and throws kArgument below 2.
std::vector<double> moving_variance(const AudioClip& clip, double window_s);

// Indices of strict local maxima. A plateau counts once, at its first
// sample, when both neighbours of the plateau are lower. Endpoints never
// qualify.
std::vector<std::size_t> local_maxima(std::span<const double> signal);

// Topographic prominence of signal[peak]: its height above the higher of
// the two minima found between the peak and the nearest strictly higher
// sample (or the signal edge) on each side.
double peak_prominence(std::span<const double> signal, std::size_t peak);

// Local maxima with prominence >= min_prominence; among survivors closer
// than min_separation_s the highest wins, ties going to the earliest index.
// Result is sorted by index.
std::vector<std::size_t> find_peaks(std::span<const double> signal,
                                    double min_prominence,
                                    double min_separation_s, int rate);

struct SnrReport {
  double snr_db = 0.0;
  double blast_power = 0.0;
  double reference_power = 0.0;
};

inline constexpr double kSnrBlastSeconds = 0.4;
// Mean power of uniform noise on [-0.1, 0.1]: 0.1^2 / 3.
inline constexpr double kSnrReferencePower = 0.01 / 3.0;
inline constexpr double kSnrFloorDb = -120.0;

// Mean squared amplitude over 0.4 s from blast_start_s (zero-padded past the
// end) against the analytic reference noise power. Silent blasts report
// floor_db. Throws kRange when the start lies beyond the clip.
SnrReport snr_db(const AudioClip& clip, double blast_start_s,
                 double floor_db = kSnrFloorDb);

}  // namespace muzzleprint::dsp

#endif  // MUZZLEPRINT_DSP_EVENTS_HPP_
