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

#include "zshar/data/types.hpp"
#include "zshar/model/config.hpp"
#include "zshar/nn/lstm.hpp"
#include "zshar/nn/rng.hpp"
#include "zshar/nn/tensor.hpp"

namespace zshar::model {

/// Shape-defining settings of a network; everything needed to rebuild it from tensors.
struct Architecture {
  std::size_t features = 0;  // IMU channels d
  std::size_t hidden = 128;
  std::size_t stacks = 2;
  std::size_t embedding_dim = 0;
  std::size_t decoder_hidden = 64;
  std::size_t frames = 32;
  std::size_t joints = 12;
  std::size_t dims = 2;
  double dropout = 0.1;
  nn::Pooling pooling = nn::Pooling::kLastConcat;
  bool normalize_features = false;

  std::size_t frame_width() const { return joints * dims; }
  bool operator==(const Architecture&) const = default;

  static Architecture from_config(const TrainConfig& config, std::size_t features,
                                  std::size_t embedding_dim);
};

/// Per-channel standardization fitted on training windows.
struct FeatureNormalization {
  std::vector<double> mean;
  std::vector<double> scale;  // divide by this; never zero

  bool operator==(const FeatureNormalization&) const = default;

  static FeatureNormalization identity(std::size_t features);
  /// Mean and population std over every time step of every window; a std below 1e-8 maps
  /// to scale 1.
  static FeatureNormalization fit(std::span<const data::ImuWindow* const> windows);

  nn::Tensor2 apply(const nn::Tensor2& values) const;
};

/// Condition-to-state maps, constant start token, one LSTM cell and the output head.
struct DecoderParams {
  nn::Tensor2 init_h_weight;  // E x Hd
  nn::Tensor2 init_h_bias;    // 1 x Hd
  nn::Tensor2 init_c_weight;  // E x Hd
  nn::Tensor2 init_c_bias;    // 1 x Hd
  nn::Tensor2 start_token;    // 1 x S
  nn::LstmParams cell;        // S -> Hd
  nn::Tensor2 out_weight;     // Hd x S
  nn::Tensor2 out_bias;       // 1 x S

  template <typename Self, typename F>
  static void visit(Self& self, const std::string& prefix, F&& f) {
    f(prefix + ".init_h.weight", self.init_h_weight);
    f(prefix + ".init_h.bias", self.init_h_bias);
    f(prefix + ".init_c.weight", self.init_c_weight);
    f(prefix + ".init_c.bias", self.init_c_bias);
    f(prefix + ".start_token", self.start_token);
    self.cell.for_each(prefix + ".cell", f);
    f(prefix + ".out.weight", self.out_weight);
    f(prefix + ".out.bias", self.out_bias);
  }
};

struct ModelParams {
  Architecture arch;
  FeatureNormalization normalization;
  nn::BiLstmParams encoder;
  nn::Tensor2 head_weight;  // 2H x E
  nn::Tensor2 head_bias;    // 1 x E
  DecoderParams decoder;

  /// All-zero tensors with identity normalization.
  static ModelParams zeros(const Architecture& arch);
  /// LSTM weights uniform in +-1/sqrt(H); linear weights uniform in +-1/sqrt(fan_in); linear
  /// biases zero; start token uniform in +-1.
  static ModelParams random(const Architecture& arch, nn::Rng& rng);
  /// Same architecture, all tensors zero. Used as a gradient accumulator.
  ModelParams zeros_like() const;

  /// Visits every trainable tensor as (name, tensor). Normalization is not visited.
  template <typename F>
  void for_each(F&& f) {
    visit(*this, f);
  }
  template <typename F>
  void for_each(F&& f) const {
    visit(*this, f);
  }

  std::size_t parameter_count() const;
  bool all_finite() const;
  /// Throws DimensionError if any tensor disagrees with `arch`.
  void check_shapes() const;

 private:
  template <typename Self, typename F>
  static void visit(Self& self, F&& f) {
    self.encoder.for_each("encoder", f);
    f(std::string("head.weight"), self.head_weight);
    f(std::string("head.bias"), self.head_bias);
    DecoderParams::visit(self.decoder, "decoder", f);
  }
};

}  // namespace zshar::model
