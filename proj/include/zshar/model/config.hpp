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
#include <cstdint>
#include <string>

#include "json.hpp"
#include "zshar/nn/lstm.hpp"

namespace zshar::model {

/// Hyperparameters for training plus the decoder's output geometry.
struct TrainConfig {
  double lambda = 1e-2;  // weight of the classification loss
  double alpha = 0.6;    // weight of the reconstruction loss
  double learning_rate = 1e-3;
  std::size_t epochs = 20;
  std::size_t batch_size = 64;
  std::size_t hidden = 128;
  std::size_t stacks = 2;
  double dropout = 0.1;
  std::uint64_t seed = 1;
  std::size_t frames = 32;  // decoder length T
  std::size_t joints = 12;
  std::size_t dims = 2;
  std::size_t decoder_hidden = 64;
  nn::Pooling pooling = nn::Pooling::kLastConcat;
  bool normalize_features = false;  // length-normalize f before scoring
  double clip_norm = 5.0;           // 0 disables gradient clipping
  double train_fraction = 0.9;

  /// Throws ConfigError naming the first offending field.
  void validate() const;
};

nlohmann::json to_json(const TrainConfig& config);

/// Starts from `base` and overrides the keys present in `doc`. Unknown keys and wrong types
/// raise ConfigError.
TrainConfig config_from_json(const nlohmann::json& doc, const TrainConfig& base = {});

std::string pooling_name(nn::Pooling pooling);
nn::Pooling parse_pooling(const std::string& name);

}  // namespace zshar::model
