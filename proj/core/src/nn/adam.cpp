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

#include "muzzleprint/nn/adam.hpp"

#include <cmath>

#include "muzzleprint/error.hpp"

namespace muzzleprint::nn {

template <typename T>
void adam_step(const std::vector<Tensor<T>*>& params,
               const std::vector<const Tensor<T>*>& grads, AdamState<T>& state) {
  if (params.size() != grads.size()) {
    throw Error(ErrorCode::kArgument, "adam: parameter and gradient counts differ");
  }
  if (state.m.empty()) {
    for (const Tensor<T>* p : params) {
      state.m.emplace_back(p->shape());
      state.v.emplace_back(p->shape());
    }
  }
  if (state.m.size() != params.size()) {
    throw Error(ErrorCode::kArgument, "adam: state does not match parameter list");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!(params[i]->shape() == grads[i]->shape()) ||
        !(params[i]->shape() == state.m[i].shape())) {
      throw Error(ErrorCode::kArgument, "adam: shape mismatch at parameter " +
                                            std::to_string(i));
    }
  }

  const AdamConfig& c = state.config;
  state.t += 1;
  const double t = static_cast<double>(state.t);
  const double correct1 = 1.0 - std::pow(c.beta1, t);
  const double correct2 = 1.0 - std::pow(c.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    T* theta = params[i]->raw();
    const T* g = grads[i]->raw();
    T* m = state.m[i].raw();
    T* v = state.v[i].raw();
    for (std::size_t j = 0; j < params[i]->size(); ++j) {
      const double gj = g[j];
      const double mj = c.beta1 * m[j] + (1.0 - c.beta1) * gj;
      const double vj = c.beta2 * v[j] + (1.0 - c.beta2) * gj * gj;
      m[j] = static_cast<T>(mj);
      v[j] = static_cast<T>(vj);
      const double m_hat = mj / correct1;
      const double v_hat = vj / correct2;
      theta[j] = static_cast<T>(theta[j] - c.learning_rate * m_hat / (std::sqrt(v_hat) + c.epsilon));
    }
  }
}

template void adam_step(const std::vector<Tensor<float>*>&,
                        const std::vector<const Tensor<float>*>&, AdamState<float>&);
template void adam_step(const std::vector<Tensor<double>*>&,
                        const std::vector<const Tensor<double>*>&, AdamState<double>&);

}  // namespace muzzleprint::nn
