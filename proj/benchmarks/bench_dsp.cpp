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

#include <benchmark/benchmark.h>

#include <vector>

#include "muzzleprint/blast.hpp"
#include "muzzleprint/dsp/fft.hpp"
#include "muzzleprint/dsp/spectrogram.hpp"
#include "muzzleprint/random.hpp"
#include "synth.hpp"

namespace mp = muzzleprint;

namespace {

void BM_Fft(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  mp::Rng rng(11);
  std::vector<mp::dsp::Complex> in(n);
  for (auto& z : in) z = {rng.normal(), rng.normal()};
  const mp::dsp::FftPlan plan(n);
  std::vector<mp::dsp::Complex> out(n);
  for (auto _ : state) {
    plan.forward(in, out);
    benchmark::DoNotOptimize(out.data());
  }
}
// 130 is the CNN frame length; powers of two for comparison.
BENCHMARK(BM_Fft)->Arg(130)->Arg(256)->Arg(1024)->Arg(4096);

void BM_CnnSpectrogram(benchmark::State& state) {
  mp::Rng rng(12);
  const auto clip = mp::testing::shot_slice(rng);
  for (auto _ : state) {
    auto s = mp::training_image_for(clip);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_CnnSpectrogram);

void BM_DetectMinute(benchmark::State& state) {
  mp::Rng rng(13);
  const auto onsets = mp::testing::random_onsets(10, 60.0, 1.0, rng);
  const auto clip = mp::testing::impulse_trace(60.0, 48000, onsets, rng);
  for (auto _ : state) {
    auto events = mp::detect_abrupt_changes(clip);
    benchmark::DoNotOptimize(events);
  }
}
BENCHMARK(BM_DetectMinute)->Unit(benchmark::kMillisecond);

}  // namespace
