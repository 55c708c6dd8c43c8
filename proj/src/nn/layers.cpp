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

#include "zshar/nn/layers.hpp"

#include <algorithm>
#include <string>

#include "zshar/error.hpp"

namespace zshar::nn {

Tensor2 linear_forward(const Tensor2& x, const Tensor2& weight, std::span<const double> bias) {
  if (x.cols() != weight.rows()) {
    throw DimensionError("linear: input " + x.shape() + " incompatible with weight " +
                         weight.shape());
  }
  if (bias.size() != weight.cols()) {
    throw DimensionError("linear: bias length " + std::to_string(bias.size()) +
                         " incompatible with weight " + weight.shape());
  }
  Tensor2 y(x.rows(), weight.cols());
  for (std::size_t r = 0; r < y.rows(); ++r) std::copy(bias.begin(), bias.end(), y.row(r).begin());
  matmul_acc(x, weight, y);
  return y;
}

LinearGrads linear_backward(const Tensor2& x, const Tensor2& weight, const Tensor2& dy) {
  if (dy.rows() != x.rows() || dy.cols() != weight.cols() || x.cols() != weight.rows()) {
    throw DimensionError("linear backward: x " + x.shape() + ", weight " + weight.shape() +
                         ", dy " + dy.shape());
  }
  LinearGrads g{Tensor2(x.rows(), x.cols()), Tensor2(weight.rows(), weight.cols()),
                Tensor2(1, weight.cols())};
  matmul_acc(dy, transpose(weight), g.dx);
  matmul_tn_acc(x, dy, g.dweight);
  for (std::size_t r = 0; r < dy.rows(); ++r) {
    for (std::size_t c = 0; c < dy.cols(); ++c) g.dbias(0, c) += dy(r, c);
  }
  return g;
}

Tensor2 relu_forward(const Tensor2& x) {
  Tensor2 y = x;
  for (double& v : y.values()) v = v > 0.0 ? v : 0.0;
  return y;
}

Tensor2 relu_backward(const Tensor2& x, const Tensor2& dy) {
  if (x.rows() != dy.rows() || x.cols() != dy.cols()) {
    throw DimensionError("relu backward: x " + x.shape() + " vs dy " + dy.shape());
  }
  Tensor2 dx(x.rows(), x.cols());
  const auto xv = x.values();
  const auto gv = dy.values();
  auto out = dx.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = xv[i] > 0.0 ? gv[i] : 0.0;
  return dx;
}

DropoutResult dropout_forward(const Tensor2& x, double rate, Mode mode, Rng& rng) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw ConfigError("dropout rate must lie in [0, 1), got " + std::to_string(rate));
  }
  if (mode == Mode::kEval || rate == 0.0) {
    return {x, Tensor2(x.rows(), x.cols(), 1.0)};
  }
  const double keep_scale = 1.0 / (1.0 - rate);
  Tensor2 mask(x.rows(), x.cols());
  for (double& m : mask.values()) m = rng.uniform() < rate ? 0.0 : keep_scale;
  return {apply_mask(x, mask), std::move(mask)};
}

Tensor2 apply_mask(const Tensor2& x, const Tensor2& mask) {
  if (x.rows() != mask.rows() || x.cols() != mask.cols()) {
    throw DimensionError("mask shape " + mask.shape() + " vs input " + x.shape());
  }
  Tensor2 y(x.rows(), x.cols());
  const auto xv = x.values();
  const auto mv = mask.values();
  auto out = y.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = xv[i] * mv[i];
  return y;
}

Tensor2 dropout_backward(const Tensor2& mask, const Tensor2& dy) { return apply_mask(dy, mask); }

}  // namespace zshar::nn
