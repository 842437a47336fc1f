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

#ifndef MUZZLEPRINT_DSP_FFT_HPP_
#define MUZZLEPRINT_DSP_FFT_HPP_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace muzzleprint::dsp {

using Complex = std::complex<double>;

// Direct O(n^2) evaluation of X[k] = sum_n x[n] exp(-2 pi i k n / N).
std::vector<Complex> dft_reference(std::span<const Complex> input);

// Mixed-radix Cooley-Tukey transform for arbitrary lengths. Each prime
// factor p of the length costs O(n p), so lengths with large prime
// factors degrade towards the direct transform.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);

  std::size_t size() const { return n_; }

  // `output` must hold size() values and must not alias `input`.
  void forward(std::span<const Complex> input, std::span<Complex> output) const;
  std::vector<Complex> forward(std::span<const Complex> input) const;

 private:
  void transform(const Complex* in, std::size_t stride, Complex* out,
                 std::size_t n, std::size_t factor_index,
                 std::vector<Complex>& scratch) const;

  std::size_t n_;
  std::vector<std::size_t> factors_;
  std::vector<Complex> twiddles_;  // exp(-2 pi i j / n), j < n
};

}  // namespace muzzleprint::dsp

#endif  // MUZZLEPRINT_DSP_FFT_HPP_
