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

#include <span>

#include "zshar/nn/rng.hpp"
#include "zshar/nn/tensor.hpp"

namespace zshar::nn {

enum class Mode { kTrain, kEval };

/// y = x W + b, with b broadcast over rows.
Tensor2 linear_forward(const Tensor2& x, const Tensor2& weight, std::span<const double> bias);

struct LinearGrads {
  Tensor2 dx;
  Tensor2 dweight;
  Tensor2 dbias;  // 1 x out
};

LinearGrads linear_backward(const Tensor2& x, const Tensor2& weight, const Tensor2& dy);

Tensor2 relu_forward(const Tensor2& x);
/// Gradient passes only where x > 0; the tie at zero gets 0.
Tensor2 relu_backward(const Tensor2& x, const Tensor2& dy);

struct DropoutResult {
  Tensor2 output;
  Tensor2 mask;  // 0 for dropped elements, 1/(1-rate) for survivors
};

/// Inverted dropout. In eval mode (or with rate 0) the input is returned unchanged and the
/// mask is all ones; no random numbers are drawn.
DropoutResult dropout_forward(const Tensor2& x, double rate, Mode mode, Rng& rng);
Tensor2 dropout_backward(const Tensor2& mask, const Tensor2& dy);

/// Applies an existing mask (elementwise product).
Tensor2 apply_mask(const Tensor2& x, const Tensor2& mask);

}  // namespace zshar::nn
