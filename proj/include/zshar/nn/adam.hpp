// Copyright 2026 The zshar Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "zshar/nn/tensor.hpp"

namespace zshar::nn {

/// A named reference to one parameter (or gradient) tensor.
struct TensorRef {
  std::string name;
  Tensor2* tensor;
};

/// Collects references to every tensor visited by `owner.for_each`.
template <typename Owner>
std::vector<TensorRef> collect_tensors(Owner& owner) {
  std::vector<TensorRef> refs;
  owner.for_each([&](const std::string& name, Tensor2& t) { refs.push_back({name, &t}); });
  return refs;
}

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  AdamConfig config;
  std::vector<Tensor2> first_moment;
  std::vector<Tensor2> second_moment;
  std::uint64_t step = 0;
};

AdamState make_adam_state(const std::vector<TensorRef>& params, const AdamConfig& config);

/// One bias-corrected Adam update. Throws NumericError naming the first gradient tensor that
/// holds a non-finite value; in that case nothing is modified.
void adam_step(const std::vector<TensorRef>& params, const std::vector<TensorRef>& grads,
               AdamState& state);

/// Rescales all gradients so their joint L2 norm is at most max_norm. Returns the norm
/// before clipping.
double clip_global_norm(const std::vector<TensorRef>& grads, double max_norm);

void zero_tensors(const std::vector<TensorRef>& tensors);

}  // namespace zshar::nn
