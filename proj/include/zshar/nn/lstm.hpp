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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "zshar/nn/rng.hpp"
#include "zshar/nn/tensor.hpp"

namespace zshar::nn {

/// Parameters of one LSTM cell. Gate blocks are laid out [input | forget | candidate | output]
/// along the columns, each `hidden` wide.
struct LstmParams {
  Tensor2 w_input;   // input_size x 4H
  Tensor2 w_hidden;  // H x 4H
  Tensor2 bias;      // 1 x 4H

  std::size_t input_size() const { return w_input.rows(); }
  std::size_t hidden_size() const { return w_hidden.rows(); }

  static LstmParams zeros(std::size_t input_size, std::size_t hidden_size);
  /// Uniform in +-1/sqrt(hidden).
  static LstmParams random(std::size_t input_size, std::size_t hidden_size, Rng& rng);

  template <typename F>
  void for_each(const std::string& prefix, F&& f) {
    f(prefix + ".w_input", w_input);
    f(prefix + ".w_hidden", w_hidden);
    f(prefix + ".bias", bias);
  }
  template <typename F>
  void for_each(const std::string& prefix, F&& f) const {
    f(prefix + ".w_input", w_input);
    f(prefix + ".w_hidden", w_hidden);
    f(prefix + ".bias", bias);
  }
};

struct LstmStepCache {
  Tensor2 x;       // B x I
  Tensor2 h_prev;  // B x H
  Tensor2 c_prev;  // B x H
  Tensor2 gates;   // B x 4H, post-activation
  Tensor2 tanh_c;  // B x H
};

struct LstmStep {
  Tensor2 h;
  Tensor2 c;
  LstmStepCache cache;
};

/// One batched step. Rows of x, h_prev and c_prev are independent sequences.
LstmStep lstm_cell_forward(const Tensor2& x, const Tensor2& h_prev, const Tensor2& c_prev,
                           const LstmParams& params);

struct LstmStepGrads {
  Tensor2 dx;
  Tensor2 dh_prev;
  Tensor2 dc_prev;
};

/// Backward through one step; parameter gradients are accumulated into `grads`.
LstmStepGrads lstm_cell_backward(const LstmStepCache& cache, const Tensor2& dh, const Tensor2& dc,
                                 const LstmParams& params, LstmParams& grads);

// ---------------------------------------------------------------------------
// Stacked bidirectional LSTM

struct BiLstmLayer {
  LstmParams forward;
  LstmParams backward;
};

struct BiLstmParams {
  std::vector<BiLstmLayer> layers;

  std::size_t input_size() const { return layers.empty() ? 0 : layers.front().forward.input_size(); }
  std::size_t hidden_size() const {
    return layers.empty() ? 0 : layers.front().forward.hidden_size();
  }
  std::size_t stacks() const { return layers.size(); }

  static BiLstmParams zeros(std::size_t input_size, std::size_t hidden_size, std::size_t stacks);
  static BiLstmParams random(std::size_t input_size, std::size_t hidden_size, std::size_t stacks,
                             Rng& rng);

  template <typename F>
  void for_each(const std::string& prefix, F&& f) {
    for (std::size_t l = 0; l < layers.size(); ++l) {
      layers[l].forward.for_each(prefix + ".l" + std::to_string(l) + ".fwd", f);
      layers[l].backward.for_each(prefix + ".l" + std::to_string(l) + ".bwd", f);
    }
  }
  template <typename F>
  void for_each(const std::string& prefix, F&& f) const {
    for (std::size_t l = 0; l < layers.size(); ++l) {
      layers[l].forward.for_each(prefix + ".l" + std::to_string(l) + ".fwd", f);
      layers[l].backward.for_each(prefix + ".l" + std::to_string(l) + ".bwd", f);
    }
  }
};

enum class Pooling { kLastConcat, kMeanPool };

struct BiLstmCache {
  Pooling pooling = Pooling::kLastConcat;
  // [layer][t], indexed by sequence position for both directions.
  std::vector<std::vector<LstmStepCache>> forward;
  std::vector<std::vector<LstmStepCache>> backward;
};

struct BiLstmOutput {
  Tensor2 h_forward_last;   // B x H, forward direction after the final step
  Tensor2 h_backward_last;  // B x H, reverse direction after reaching position 0
  Tensor2 representation;   // B x 2H, pooled sequence representation
  BiLstmCache cache;
};

/// `steps` is time-major: steps[t] is B x input_size.
BiLstmOutput bilstm_forward(std::span<const Tensor2> steps, const BiLstmParams& params,
                            Pooling pooling = Pooling::kLastConcat);

/// Backward from the gradient of the pooled representation. Accumulates parameter gradients
/// into `grads` and returns the gradient with respect to each input step.
std::vector<Tensor2> bilstm_backward(const BiLstmCache& cache, const Tensor2& d_representation,
                                     const BiLstmParams& params, BiLstmParams& grads);

}  // namespace zshar::nn
