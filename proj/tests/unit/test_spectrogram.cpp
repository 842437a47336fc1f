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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "muzzleprint/dsp/spectrogram.hpp"
#include "muzzleprint/error.hpp"
#include "muzzleprint/random.hpp"

namespace muzzleprint::dsp {
namespace {

AudioClip sine(double hz, std::size_t n, int rate, double amp = 1.0) {
  std::vector<float> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = static_cast<float>(amp * std::sin(2.0 * std::numbers::pi * hz * i / rate));
  }
  return AudioClip(std::move(s), rate);
}

AudioClip noise(std::size_t n, int rate, Rng& rng, double amp = 0.4) {
  std::vector<float> s(n);
  for (float& v : s) v = static_cast<float>(rng.uniform(-amp, amp));
  return AudioClip(std::move(s), rate);
}

TEST(HannWindow, EndpointsMidpointAndSmallCase) {
  const auto w4 = hann_window(4);
  const std::vector<double> expected = {0.0, 0.75, 0.75, 0.0};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(w4[i], expected[i], 1e-15);
  for (std::size_t n : {2u, 5u, 33u, 114u}) {
    const auto w = hann_window(n);
    EXPECT_NEAR(w.front(), 0.0, 1e-15);
    EXPECT_NEAR(w.back(), 0.0, 1e-15);
    if (n % 2 == 1) EXPECT_NEAR(w[(n - 1) / 2], 1.0, 1e-15);
  }
  EXPECT_THROW(hann_window(1), Error);
}

TEST(SpectrogramConfig, Validation) {
  EXPECT_NO_THROW(kCnnConfig.validate());
  EXPECT_THROW((SpectrogramConfig{10, 10, 16, 48000}.validate()), Error);
  EXPECT_THROW((SpectrogramConfig{20, 5, 16, 48000}.validate()), Error);
  EXPECT_THROW((SpectrogramConfig{10, 5, 16, 0}.validate()), Error);
  try {
    SpectrogramConfig{20, 5, 16, 48000}.validate();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfiguration);
  }
}

TEST(Stft, WorkedExampleDimensions) {
  const SpectrogramConfig cfg{44, 22, 65, 48000};
  const auto z = stft(AudioClip(std::vector<float>(4800, 0.0f), 48000), cfg);
  EXPECT_EQ(z.rows, 33u);
  EXPECT_EQ(z.cols, 217u);
}

TEST(Stft, CnnConfigGives66By100) {
  Rng rng(1);
  const auto s = power_spectrogram(noise(4800, 48000, rng), kCnnConfig);
  EXPECT_EQ(s.rows(), 66u);
  EXPECT_EQ(s.cols(), 100u);
  EXPECT_DOUBLE_EQ(s.freq_step, 48000.0 / 130.0);
  EXPECT_DOUBLE_EQ(s.time_step, 47.0 / 48000.0);
}

TEST(Stft, ZerosInZerosOut) {
  const auto s = power_spectrogram(AudioClip(std::vector<float>(4800, 0.0f), 48000), kCnnConfig);
  for (double p : s.psd.data) EXPECT_EQ(p, 0.0);
}

TEST(Stft, FramesMatchDirectDft) {
  Rng rng(4);
  const SpectrogramConfig cfg{20, 7, 27, 16000};
  const AudioClip clip = noise(200, 16000, rng);
  const auto z = stft(clip, cfg);
  for (std::size_t m = 0; m < z.cols; ++m) {
    std::vector<Complex> frame(cfg.fft_len, 0.0);
    for (std::size_t k = 0; k < cfg.window_len; ++k) {
      const double hann = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * k / 19.0));
      frame[k] = hann * static_cast<double>(clip.samples()[m * 13 + k]);
    }
    const auto X = dft_reference(frame);
    for (std::size_t f = 0; f < z.rows; ++f) {
      EXPECT_NEAR(std::abs(z.at(f, m) - X[f]), 0.0, 1e-9);
    }
  }
}

TEST(Stft, ErrorsForShortClipAndRateMismatch) {
  try {
    stft(AudioClip(std::vector<float>(50, 0.1f), 48000), kCnnConfig);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSize);
  }
  EXPECT_THROW(stft(AudioClip(std::vector<float>(4800, 0.1f), 44100), kCnnConfig), Error);
}

TEST(PowerSpectrogram, OneKilohertzPeak) {
  const auto s = power_spectrogram(sine(1000.0, 4800, 48000), kCnnConfig);
  std::vector<double> row_power(s.rows(), 0.0);
  for (std::size_t f = 0; f < s.rows(); ++f) {
    for (std::size_t m = 0; m < s.cols(); ++m) row_power[f] += s.psd.at(f, m);
  }
  const auto best = static_cast<double>(
      std::max_element(row_power.begin(), row_power.end()) - row_power.begin());
  EXPECT_LE(std::abs(best - 1000.0 / s.freq_step), 1.0);
}

TEST(PowerSpectrogram, DoublingInputQuadruplesPower) {
  Rng rng(8);
  const AudioClip a = noise(4800, 48000, rng, 0.3);
  std::vector<float> doubled(a.samples().begin(), a.samples().end());
  for (float& v : doubled) v *= 2.0f;
  const auto p1 = power_spectrogram(a, kCnnConfig);
  const auto p2 = power_spectrogram(AudioClip(doubled, 48000), kCnnConfig);
  for (std::size_t i = 0; i < p1.psd.data.size(); ++i) {
    EXPECT_NEAR(p2.psd.data[i], 4.0 * p1.psd.data[i], 1e-9 * (1.0 + p1.psd.data[i]));
  }
}

TEST(PowerSpectrogram, RandomConfigDimensions) {
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t w = 2 + rng.index(150);
    const std::size_t no = rng.index(w);
    const std::size_t fl = w + rng.index(120);
    const std::size_t len = w + rng.index(3000);
    const SpectrogramConfig cfg{w, no, fl, 8000};
    const auto s = power_spectrogram(AudioClip(std::vector<float>(len, 0.01f), 8000), cfg);
    ASSERT_EQ(s.rows(), fl / 2 + 1) << w << " " << no << " " << fl << " " << len;
    ASSERT_EQ(s.cols(), (len - no) / (w - no)) << w << " " << no << " " << fl << " " << len;
    for (double p : s.psd.data) ASSERT_GE(p, 0.0);
  }
}

TEST(LogPsd, DecibelConversion) {
  EXPECT_DOUBLE_EQ(power_to_db(1.0, -120.0), 0.0);
  EXPECT_DOUBLE_EQ(power_to_db(0.0, -120.0), -120.0);
  EXPECT_NEAR(power_to_db(0.01, -120.0), -20.0, 1e-12);
  EXPECT_DOUBLE_EQ(power_to_db(1e-20, -120.0), -120.0);
  Spectrogram s;
  s.psd = {1, 3, {1.0, 0.0, 0.01}};
  const auto db = log_psd(s, -90.0);
  EXPECT_DOUBLE_EQ(db.at(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(db.at(0, 1), -90.0);
  EXPECT_NEAR(db.at(0, 2), -20.0, 1e-12);
  EXPECT_THROW(log_psd(s, -INFINITY), Error);
}

TEST(SpectrogramJson, RoundTripAndBadInput) {
  Rng rng(3);
  const auto s = power_spectrogram(noise(4800, 48000, rng), kCnnConfig);
  const auto back = spectrogram_from_json(to_json(s));
  EXPECT_EQ(back.psd.rows, s.psd.rows);
  EXPECT_EQ(back.psd.cols, s.psd.cols);
  EXPECT_EQ(back.psd.data, s.psd.data);
  EXPECT_EQ(back.freq_step, s.freq_step);
  EXPECT_THROW(spectrogram_from_json("{"), Error);
  EXPECT_THROW(spectrogram_from_json(R"({"freq_step":1,"time_step":1,"rows":2,"cols":2,"psd":[1]})"),
               Error);
}

}  // namespace
}  // namespace muzzleprint::dsp
