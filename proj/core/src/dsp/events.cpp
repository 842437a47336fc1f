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

#include "muzzleprint/dsp/events.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "muzzleprint/error.hpp"

namespace muzzleprint::dsp {

namespace {

// Running sums are rebuilt from scratch this often to stop drift.
constexpr std::size_t kResyncInterval = 1 << 14;

}  // namespace

std::vector<double> moving_variance(std::span<const double> signal,
                                    std::size_t window) {
  if (window < 2) {
    throw Error(ErrorCode::kArgument, "variance window must cover >= 2 samples");
  }
  std::vector<double> out(signal.size(), 0.0);
  if (signal.empty()) return out;

  // Shift by the global mean so the sums stay well conditioned and adding a
  // constant to the input leaves the centred values unchanged.
  const double shift =
      std::accumulate(signal.begin(), signal.end(), 0.0) / signal.size();

  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < signal.size(); ++i) {
    const std::size_t count = std::min(i + 1, window);
    if (i % kResyncInterval == 0) {
      sum = 0.0;
      sum_sq = 0.0;
      for (std::size_t j = i + 1 - count; j <= i; ++j) {
        const double d = signal[j] - shift;
        sum += d;
        sum_sq += d * d;
      }
    } else {
      const double d = signal[i] - shift;
      sum += d;
      sum_sq += d * d;
      if (i >= window) {
        const double old = signal[i - window] - shift;
        sum -= old;
        sum_sq -= old * old;
      }
    }
    if (count >= 2) {
      const double n = static_cast<double>(count);
      out[i] = std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0));
    }
  }
  return out;
}

std::vector<double> moving_variance(const AudioClip& clip, double window_s) {
  const std::size_t window = seconds_to_samples(window_s, clip.sample_rate());
  const auto s = clip.samples();
  std::vector<double> x(s.begin(), s.end());
  return moving_variance(x, window);
}

std::vector<std::size_t> local_maxima(std::span<const double> signal) {
  std::vector<std::size_t> peaks;
  const std::size_t n = signal.size();
  std::size_t i = 1;
  while (i + 1 < n) {
    if (signal[i] > signal[i - 1]) {
      std::size_t ahead = i + 1;
      while (ahead < n && signal[ahead] == signal[i]) ++ahead;
      if (ahead < n && signal[ahead] < signal[i]) {
        peaks.push_back(i);
      }
      i = ahead;
    } else {
      ++i;
    }
  }
  return peaks;
}

double peak_prominence(std::span<const double> signal, std::size_t peak) {
  const double height = signal[peak];

  double left_min = height;
  for (std::size_t j = peak; j-- > 0;) {
    if (signal[j] > height) break;
    left_min = std::min(left_min, signal[j]);
  }
  double right_min = height;
  for (std::size_t j = peak + 1; j < signal.size(); ++j) {
    if (signal[j] > height) break;
    right_min = std::min(right_min, signal[j]);
  }
  return height - std::max(left_min, right_min);
}

std::vector<std::size_t> find_peaks(std::span<const double> signal,
                                    double min_prominence,
                                    double min_separation_s, int rate) {
  if (!(min_prominence >= 0.0)) {
    throw Error(ErrorCode::kArgument, "minimum prominence must be >= 0");
  }
  if (rate <= 0) throw Error(ErrorCode::kArgument, "rate must be positive");
  if (signal.empty()) return {};

  std::vector<std::size_t> candidates;
  for (std::size_t p : local_maxima(signal)) {
    if (peak_prominence(signal, p) >= min_prominence) candidates.push_back(p);
  }

  const double separation = min_separation_s * rate;
  if (separation <= 1.0 || candidates.size() < 2) return candidates;

  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return signal[candidates[a]] > signal[candidates[b]];
  });

  std::vector<bool> removed(candidates.size(), false);
  for (std::size_t idx : order) {
    if (removed[idx]) continue;
    const auto here = static_cast<double>(candidates[idx]);
    // Candidates are sorted by index, so neighbours are contiguous.
    for (std::size_t j = idx + 1;
         j < candidates.size() && candidates[j] - here < separation; ++j) {
      removed[j] = true;
    }
    for (std::size_t j = idx;
         j-- > 0 && here - candidates[j] < separation;) {
      removed[j] = true;
    }
  }

  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!removed[i]) kept.push_back(candidates[i]);
  }
  return kept;
}

SnrReport snr_db(const AudioClip& clip, double blast_start_s, double floor_db) {
  const std::size_t begin = seconds_to_samples(blast_start_s, clip.sample_rate());
  if (begin >= clip.size()) {
    throw Error(ErrorCode::kRange, "blast start beyond clip end");
  }
  const std::size_t length = seconds_to_samples(kSnrBlastSeconds, clip.sample_rate());
  const auto x = clip.samples();
  const std::size_t end = std::min(begin + length, x.size());
  double energy = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    energy += static_cast<double>(x[i]) * x[i];
  }

  SnrReport r;
  r.blast_power = energy / static_cast<double>(length);
  r.reference_power = kSnrReferencePower;
  r.snr_db = r.blast_power > 0.0
                 ? std::max(10.0 * std::log10(r.blast_power / r.reference_power),
                            floor_db)
                 : floor_db;
  return r;
}

}  // namespace muzzleprint::dsp
