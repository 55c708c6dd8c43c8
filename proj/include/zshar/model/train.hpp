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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "zshar/data/types.hpp"
#include "zshar/model/config.hpp"
#include "zshar/model/params.hpp"

namespace zshar::model {

struct EpochLog {
  std::size_t epoch = 0;  // 1-based
  // Sample-weighted means over the epoch's batches.
  double matching = 0.0;
  double classification = 0.0;
  double reconstruction = 0.0;
  double total = 0.0;
  std::optional<double> validation_accuracy;  // seen-class average accuracy per class
};

nlohmann::json to_json(const EpochLog& entry);

struct TrainingResult {
  ModelParams params;  // weights of the best validation epoch
  std::vector<EpochLog> log;
  std::size_t best_epoch = 0;
  std::vector<std::string> seen_classes;
  std::size_t train_samples = 0;
  std::size_t validation_samples = 0;
};

using EpochCallback = std::function<void(const EpochLog&)>;

/// Trains on the fold's seen classes. The best epoch is the one with the highest validation
/// accuracy, later epochs winning ties; without a validation set it is the last epoch.
/// Throws NumericError with epoch and batch numbers when the loss stops being finite, and
/// DataError when a seen class lacks windows, semantics or skeletons.
TrainingResult train(const data::Dataset& dataset, const data::FoldSpec& fold,
                     const TrainConfig& config, const EpochCallback& on_epoch = {});

}  // namespace zshar::model
