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

#include "muzzleprint/nn/tensor.hpp"

#include <cmath>

#include "muzzleprint/error.hpp"

namespace muzzleprint::nn {

std::string to_string(const Shape& s) {
  return std::to_string(s.n) + "x" + std::to_string(s.h) + "x" +
         std::to_string(s.w) + "x" + std::to_string(s.c);
}

template <typename T>
Tensor<T>::Tensor(Shape shape, std::span<const T> data)
    : shape_(shape), data_(data.begin(), data.end()) {
  if (data_.size() != shape_.count()) {
    throw Error(ErrorCode::kArgument, "tensor data length " +
                                          std::to_string(data_.size()) +
                                          " does not match shape " +
                                          to_string(shape_));
  }
}

template <typename T>
Tensor<T> Tensor<T>::reshaped(Shape shape) const {
  if (shape.count() != shape_.count()) {
    throw Error(ErrorCode::kArgument,
                "cannot reshape " + to_string(shape_) + " to " + to_string(shape));
  }
  return Tensor(shape, std::span<const T>(data_));
}

template <typename T>
Tensor<T> Tensor<T>::sample(std::size_t i) const {
  if (i >= shape_.n) throw Error(ErrorCode::kRange, "sample index out of range");
  const std::size_t per = shape_.per_sample();
  Shape s = shape_;
  s.n = 1;
  const auto begin = data_.begin() + static_cast<std::ptrdiff_t>(i * per);
  return Tensor(s, std::span<const T>(&*begin, per));
}

template <typename T>
bool Tensor<T>::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](T v) { return std::isfinite(v); });
}

template <typename T>
Tensor<T> stack(const std::vector<const Tensor<T>*>& samples) {
  if (samples.empty()) throw Error(ErrorCode::kArgument, "nothing to stack");
  Shape s = samples.front()->shape();
  if (s.n != 1) throw Error(ErrorCode::kArgument, "stack expects single samples");
  s.n = samples.size();
  Tensor<T> out(s);
  const std::size_t per = s.per_sample();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    Shape one = samples[i]->shape();
    if (one.n != 1 || one.per_sample() != per || one.h != s.h || one.w != s.w) {
      throw Error(ErrorCode::kArgument, "stack shape mismatch");
    }
    std::copy(samples[i]->data().begin(), samples[i]->data().end(),
              out.data().begin() + static_cast<std::ptrdiff_t>(i * per));
  }
  return out;
}

template class Tensor<float>;
template class Tensor<double>;
template Tensor<float> stack(const std::vector<const Tensor<float>*>&);
template Tensor<double> stack(const std::vector<const Tensor<double>*>&);

}  // namespace muzzleprint::nn
