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

#ifndef MUZZLEPRINT_TESTS_SUPPORT_GRADIENT_SUITE_HPP_
#define MUZZLEPRINT_TESTS_SUPPORT_GRADIENT_SUITE_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace muzzleprint::testing {

struct LayerCheck {
  std::string layer;
  std::size_t trials = 0;
  double worst_error = 0.0;  // worst relative error over trials and tensors
  double tolerance = 0.0;

  bool passed() const { return worst_error <= tolerance; }
};

// Analytic backward vs central differences for every layer type on
// `trials` random small tensors each.
template <typename T>
std::vector<LayerCheck> run_gradient_suite(std::size_t trials, std::uint64_t seed);

// End-to-end check of a small four-block model in 64-bit: worst relative
// error over all parameter tensors. Each tensor is differenced at 1e-6 and
// 1e-7 and the closer one counts, since a single step occasionally lands
// across a relu or max-pool kink somewhere in the stack.
double network_gradient_error(std::uint64_t seed);
inline constexpr double kNetworkGradientTolerance = 1e-5;

}  // namespace muzzleprint::testing

#endif  // MUZZLEPRINT_TESTS_SUPPORT_GRADIENT_SUITE_HPP_
