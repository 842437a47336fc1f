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

#ifndef MUZZLEPRINT_NN_TENSOR_HPP_
#define MUZZLEPRINT_NN_TENSOR_HPP_

#include <algorithm>
#include <cstddef>
#include <new>
#include <span>
#include <string>
#include <vector>

namespace muzzleprint::nn {

// Batch x height x width x channels. Storage is row-major in that order,
// so channels are contiguous and a per-sample flatten runs
// (height, width, channel).
struct Shape {
  std::size_t n = 1;
  std::size_t h = 1;
  std::size_t w = 1;
  std::size_t c = 1;

  std::size_t count() const { return n * h * w * c; }
  std::size_t per_sample() const { return h * w * c; }
  bool operator==(const Shape&) const = default;
};

std::string to_string(const Shape& s);

// Cache-line aligned storage. Vectorised kernels peel differently for
// different base alignments, so a fixed alignment keeps float sums
// independent of where the heap happens to place a buffer.
inline constexpr std::size_t kTensorAlignment = 64;

template <typename T>
struct AlignedAllocator {
  using value_type = T;
  AlignedAllocator() = default;
  template <typename U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}  // NOLINT
  T* allocate(std::size_t n) {
    return static_cast<T*>(::operator new(n * sizeof(T), std::align_val_t{kTensorAlignment}));
  }
  void deallocate(T* p, std::size_t) noexcept {
    ::operator delete(p, std::align_val_t{kTensorAlignment});
  }
  template <typename U>
  bool operator==(const AlignedAllocator<U>&) const noexcept {
    return true;
  }
};

template <typename T>
using AlignedVector = std::vector<T, AlignedAllocator<T>>;

template <typename T>
class Tensor {
 public:
  Tensor() : shape_{0, 0, 0, 0} {}
  explicit Tensor(Shape shape, T fill = T(0))
      : shape_(shape), data_(shape.count(), fill) {}
  Tensor(Shape shape, std::span<const T> data);

  const Shape& shape() const { return shape_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::span<T> data() { return data_; }
  std::span<const T> data() const { return data_; }
  T* raw() { return data_.data(); }
  const T* raw() const { return data_.data(); }

  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  std::size_t offset(std::size_t n, std::size_t h, std::size_t w,
                     std::size_t c) const {
    return ((n * shape_.h + h) * shape_.w + w) * shape_.c + c;
  }
  T& at(std::size_t n, std::size_t h, std::size_t w, std::size_t c) {
    return data_[offset(n, h, w, c)];
  }
  const T& at(std::size_t n, std::size_t h, std::size_t w, std::size_t c) const {
    return data_[offset(n, h, w, c)];
  }

  void fill(T value) { std::fill(data_.begin(), data_.end(), value); }

  // Same data, new shape of equal element count.
  Tensor reshaped(Shape shape) const;

  // Copy of sample `i` as a batch of one.
  Tensor sample(std::size_t i) const;

  template <typename U>
  Tensor<U> cast() const {
    Tensor<U> out(shape_);
    std::transform(data_.begin(), data_.end(), out.data().begin(),
                   [](T v) { return static_cast<U>(v); });
    return out;
  }

  bool all_finite() const;

  bool operator==(const Tensor&) const = default;

 private:
  Shape shape_;
  AlignedVector<T> data_;
};

// Stacks equally shaped single-sample tensors along the batch axis.
template <typename T>
Tensor<T> stack(const std::vector<const Tensor<T>*>& samples);

}  // namespace muzzleprint::nn

#endif  // MUZZLEPRINT_NN_TENSOR_HPP_
