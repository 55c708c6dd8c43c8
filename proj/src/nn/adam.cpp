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

#include "zshar/nn/adam.hpp"

#include <cmath>

#include "zshar/error.hpp"

namespace zshar::nn {

AdamState make_adam_state(const std::vector<TensorRef>& params, const AdamConfig& config) {
  AdamState state;
  state.config = config;
  for (const TensorRef& p : params) {
    state.first_moment.emplace_back(p.tensor->rows(), p.tensor->cols());
    state.second_moment.emplace_back(p.tensor->rows(), p.tensor->cols());
  }
  return state;
}

void adam_step(const std::vector<TensorRef>& params, const std::vector<TensorRef>& grads,
               AdamState& state) {
  if (params.size() != grads.size() || params.size() != state.first_moment.size()) {
    throw DimensionError("adam: " + std::to_string(params.size()) + " parameters, " +
                         std::to_string(grads.size()) + " gradients, " +
                         std::to_string(state.first_moment.size()) + " moment slots");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    const Tensor2& p = *params[i].tensor;
    const Tensor2& g = *grads[i].tensor;
    if (p.rows() != g.rows() || p.cols() != g.cols() ||
        state.first_moment[i].rows() != p.rows() || state.first_moment[i].cols() != p.cols()) {
      throw DimensionError("adam: shape mismatch for " + params[i].name + ": param " +
                           p.shape() + ", grad " + g.shape());
    }
    if (!g.all_finite()) throw NumericError("adam: non-finite gradient in " + grads[i].name);
  }

  const AdamConfig& cfg = state.config;
  state.step += 1;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(cfg.beta1, t);
  const double correction2 = 1.0 - std::pow(cfg.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto p = params[i].tensor->values();
    const auto g = grads[i].tensor->values();
    auto m = state.first_moment[i].values();
    auto v = state.second_moment[i].values();
    for (std::size_t k = 0; k < p.size(); ++k) {
      m[k] = cfg.beta1 * m[k] + (1.0 - cfg.beta1) * g[k];
      v[k] = cfg.beta2 * v[k] + (1.0 - cfg.beta2) * g[k] * g[k];
      const double m_hat = m[k] / correction1;
      const double v_hat = v[k] / correction2;
      p[k] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
    }
  }
}

double clip_global_norm(const std::vector<TensorRef>& grads, double max_norm) {
  double sum = 0.0;
  for (const TensorRef& g : grads) {
    for (double v : g.tensor->values()) sum += v * v;
  }
  const double norm = std::sqrt(sum);
  if (norm > max_norm && norm > 0.0) {
    const double scale = max_norm / norm;
    for (const TensorRef& g : grads) {
      for (double& v : g.tensor->values()) v *= scale;
    }
  }
  return norm;
}

void zero_tensors(const std::vector<TensorRef>& tensors) {
  for (const TensorRef& t : tensors) t.tensor->fill(0.0);
}

}  // namespace zshar::nn
