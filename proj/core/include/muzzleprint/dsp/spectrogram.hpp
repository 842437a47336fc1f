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

#ifndef MUZZLEPRINT_DSP_SPECTROGRAM_HPP_
#define MUZZLEPRINT_DSP_SPECTROGRAM_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "muzzleprint/audio.hpp"
#include "muzzleprint/dsp/fft.hpp"

namespace muzzleprint::dsp {

// Symmetric Hann window, w[k] = 0.5 (1 - cos(2 pi k / (n - 1))).
std::vector<double> hann_window(std::size_t n);

struct SpectrogramConfig {
  std::size_t window_len;
  std::size_t overlap;
  std::size_t fft_len;
  int sample_rate;

  // Throws kConfiguration unless 0 <= overlap < window_len <= fft_len and the
  // sample rate is positive.
  void validate() const;

  std::size_t hop() const { return window_len - overlap; }
  // floor(fft_len / 2 + 1)
  std::size_t freq_bins() const { return fft_len / 2 + 1; }
  // floor((L - overlap) / (window_len - overlap)); 0 when L < window_len.
  std::size_t time_slots(std::size_t length) const;
};

// Network input grid: 0.1 s at 48 kHz, fl=130, w=114, no=67 -> 66 x 100.
inline constexpr SpectrogramConfig kCnnConfig{114, 67, 130, 48000};
inline constexpr int kCnnSampleRate = 48000;
inline constexpr double kCnnSliceSeconds = 0.1;

// Row-major F x T matrix; rows are frequency bins, columns time frames.
template <typename T>
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<T> data;

  T& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  const T& at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

struct Spectrogram {
  Matrix<double> psd;
  double freq_step = 0.0;  // Hz per row
  double time_step = 0.0;  // seconds per column

  std::size_t rows() const { return psd.rows; }
  std::size_t cols() const { return psd.cols; }
};

// Hann-weighted frames of the clip, zero-padded to fft_len and transformed;
// keeps the first freq_bins() rows. Throws kSize when the clip is shorter
// than one window. The clip's own sample rate must match the config.
Matrix<Complex> stft(const AudioClip& clip, const SpectrogramConfig& cfg);

// |stft|^2 element-wise.
Spectrogram power_spectrogram(const AudioClip& clip, const SpectrogramConfig& cfg);

// 10 log10(p) clamped from below at floor_db.
Matrix<double> log_psd(const Spectrogram& s, double floor_db);
double power_to_db(double power, double floor_db);

// JSON object {freq_step, time_step, rows, cols, psd} with psd row-major.
std::string to_json(const Spectrogram& s);
Spectrogram spectrogram_from_json(const std::string& text);

}  // namespace muzzleprint::dsp

#endif  // MUZZLEPRINT_DSP_SPECTROGRAM_HPP_
