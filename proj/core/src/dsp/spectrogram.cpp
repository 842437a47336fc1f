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

#include "muzzleprint/dsp/spectrogram.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include "muzzleprint/error.hpp"

namespace muzzleprint::dsp {

std::vector<double> hann_window(std::size_t n) {
  if (n < 2) throw Error(ErrorCode::kArgument, "Hann window needs n >= 2");
  std::vector<double> w(n);
  const double denom = static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) {
    w[k] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * k / denom));
  }
  // Pin the symmetric endpoints and midpoint exactly.
  w.front() = 0.0;
  w.back() = 0.0;
  if (n % 2 == 1) w[(n - 1) / 2] = 1.0;
  return w;
}

void SpectrogramConfig::validate() const {
  if (window_len < 2 || overlap >= window_len || window_len > fft_len) {
    throw Error(ErrorCode::kConfiguration,
                "spectrogram config needs 0 <= overlap < window <= fft_len "
                "(window=" + std::to_string(window_len) +
                    ", overlap=" + std::to_string(overlap) +
                    ", fft_len=" + std::to_string(fft_len) + ")");
  }
  if (sample_rate <= 0) {
    throw Error(ErrorCode::kConfiguration, "sample rate must be positive");
  }
}

std::size_t SpectrogramConfig::time_slots(std::size_t length) const {
  if (length < window_len) return 0;
  return (length - overlap) / hop();
}

Matrix<Complex> stft(const AudioClip& clip, const SpectrogramConfig& cfg) {
  cfg.validate();
  if (clip.sample_rate() != cfg.sample_rate) {
    throw Error(ErrorCode::kArgument,
                "clip rate " + std::to_string(clip.sample_rate()) +
                    " Hz does not match config rate " +
                    std::to_string(cfg.sample_rate) + " Hz");
  }
  if (clip.size() < cfg.window_len) {
    throw Error(ErrorCode::kSize, "clip of " + std::to_string(clip.size()) +
                                      " samples is shorter than one window of " +
                                      std::to_string(cfg.window_len));
  }

  const auto window = hann_window(cfg.window_len);
  const FftPlan plan(cfg.fft_len);
  const std::size_t bins = cfg.freq_bins();
  const std::size_t frames = cfg.time_slots(clip.size());
  const auto x = clip.samples();

  Matrix<Complex> out{bins, frames, std::vector<Complex>(bins * frames)};
  std::vector<Complex> frame(cfg.fft_len);
  std::vector<Complex> spectrum(cfg.fft_len);
  for (std::size_t m = 0; m < frames; ++m) {
    const std::size_t start = m * cfg.hop();
    std::fill(frame.begin(), frame.end(), Complex(0.0));
    for (std::size_t k = 0; k < cfg.window_len; ++k) {
      frame[k] = window[k] * static_cast<double>(x[start + k]);
    }
    plan.forward(frame, spectrum);
    for (std::size_t f = 0; f < bins; ++f) out.at(f, m) = spectrum[f];
  }
  return out;
}

Spectrogram power_spectrogram(const AudioClip& clip, const SpectrogramConfig& cfg) {
  const auto z = stft(clip, cfg);
  Spectrogram s;
  s.psd.rows = z.rows;
  s.psd.cols = z.cols;
  s.psd.data.resize(z.data.size());
  std::transform(z.data.begin(), z.data.end(), s.psd.data.begin(),
                 [](const Complex& c) { return std::norm(c); });
  s.freq_step = static_cast<double>(cfg.sample_rate) / cfg.fft_len;
  s.time_step = static_cast<double>(cfg.hop()) / cfg.sample_rate;
  return s;
}

double power_to_db(double power, double floor_db) {
  if (!(power > 0.0)) return floor_db;
  return std::max(10.0 * std::log10(power), floor_db);
}

Matrix<double> log_psd(const Spectrogram& s, double floor_db) {
  if (!std::isfinite(floor_db)) {
    throw Error(ErrorCode::kArgument, "dB floor must be finite");
  }
  Matrix<double> out{s.psd.rows, s.psd.cols, std::vector<double>(s.psd.data.size())};
  std::transform(s.psd.data.begin(), s.psd.data.end(), out.data.begin(),
                 [floor_db](double p) { return power_to_db(p, floor_db); });
  return out;
}

std::string to_json(const Spectrogram& s) {
  nlohmann::json j = {{"freq_step", s.freq_step},
                      {"time_step", s.time_step},
                      {"rows", s.psd.rows},
                      {"cols", s.psd.cols},
                      {"psd", s.psd.data}};
  return j.dump();
}

Spectrogram spectrogram_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kDecode, std::string("spectrogram JSON: ") + e.what());
  }
  try {
    Spectrogram s;
    s.freq_step = j.at("freq_step").get<double>();
    s.time_step = j.at("time_step").get<double>();
    s.psd.rows = j.at("rows").get<std::size_t>();
    s.psd.cols = j.at("cols").get<std::size_t>();
    s.psd.data = j.at("psd").get<std::vector<double>>();
    if (s.psd.data.size() != s.psd.rows * s.psd.cols) {
      throw Error(ErrorCode::kDecode, "spectrogram JSON: psd length != rows*cols");
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kDecode, std::string("spectrogram JSON: ") + e.what());
  }
}

}  // namespace muzzleprint::dsp
