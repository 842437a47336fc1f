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

#include "muzzleprint/dsp/fft.hpp"

#include <cmath>
#include <numbers>

#include "muzzleprint/error.hpp"

namespace muzzleprint::dsp {

std::vector<Complex> dft_reference(std::span<const Complex> input) {
  const std::size_t n = input.size();
  std::vector<Complex> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      // Reduce k*j mod n first so the angle stays small and exact.
      const double angle = -2.0 * std::numbers::pi *
                           static_cast<double>((k * j) % n) /
                           static_cast<double>(n);
      acc += input[j] * Complex(std::cos(angle), std::sin(angle));
    }
    out[k] = acc;
  }
  return out;
}

FftPlan::FftPlan(std::size_t n) : n_(n) {
  if (n == 0) throw Error(ErrorCode::kArgument, "FFT length must be positive");
  std::size_t rest = n;
  for (std::size_t p = 2; p * p <= rest; ++p) {
    while (rest % p == 0) {
      factors_.push_back(p);
      rest /= p;
    }
  }
  if (rest > 1) factors_.push_back(rest);

  twiddles_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double angle =
        -2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    twiddles_[j] = Complex(std::cos(angle), std::sin(angle));
  }
}

void FftPlan::transform(const Complex* in, std::size_t stride, Complex* out,
                        std::size_t n, std::size_t factor_index,
                        std::vector<Complex>& scratch) const {
  if (n == 1) {
    out[0] = in[0];
    return;
  }
  const std::size_t p = factors_[factor_index];
  const std::size_t m = n / p;
  for (std::size_t r = 0; r < p; ++r) {
    transform(in + r * stride, stride * p, out + r * m, m, factor_index + 1,
              scratch);
  }

  // Butterfly: X[k + q m] = sum_r W_n^{r k} W_p^{r q} Y_r[k].
  const std::size_t tw_step = n_ / n;  // W_n^j == twiddles_[j * tw_step]
  Complex* t = scratch.data() + factor_index * n_;
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t r = 0; r < p; ++r) {
      t[r] = out[r * m + k] * twiddles_[(r * k * tw_step) % n_];
    }
    for (std::size_t q = 0; q < p; ++q) {
      Complex acc = t[0];
      for (std::size_t r = 1; r < p; ++r) {
        acc += t[r] * twiddles_[((r * q) % p) * m * tw_step];
      }
      out[q * m + k] = acc;
    }
  }
}

void FftPlan::forward(std::span<const Complex> input,
                      std::span<Complex> output) const {
  if (input.size() != n_ || output.size() != n_) {
    throw Error(ErrorCode::kArgument, "FFT buffer length mismatch");
  }
  std::vector<Complex> scratch(n_ * (factors_.size() + 1));
  transform(input.data(), 1, output.data(), n_, 0, scratch);
}

std::vector<Complex> FftPlan::forward(std::span<const Complex> input) const {
  std::vector<Complex> out(n_);
  forward(input, out);
  return out;
}

}  // namespace muzzleprint::dsp
