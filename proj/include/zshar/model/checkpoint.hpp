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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "zshar/model/config.hpp"
#include "zshar/model/params.hpp"

namespace zshar::model {

inline constexpr int kCheckpointVersion = 1;

struct Checkpoint {
  ModelParams params;
  TrainConfig config;
  std::string dataset;
  std::optional<std::size_t> fold;
  std::vector<std::string> seen_classes;
  std::vector<std::string> unseen_classes;
  std::size_t best_epoch = 0;
};

/// JSON container: format tag, version, config echo, architecture, normalization statistics
/// and every tensor with its shape.
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);

/// Throws CheckpointError for unreadable, truncated or inconsistent files and for a version
/// other than kCheckpointVersion.
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace zshar::model
