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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "zshar/metrics/metrics.hpp"

namespace zshar::metrics {

/// Everything measured on one fold's unseen samples.
struct EvalReport {
  std::string dataset;
  std::optional<std::size_t> fold;
  std::uint64_t seed = 0;
  std::vector<std::string> unseen_classes;
  double cost_epsilon = 0.0;
  AccuracyReport accuracy;
  AlignmentReport alignment;  // records hold the per-sample explanation verdicts
  RealismReport realism;      // values[i] belongs to alignment.records[i]

  /// True when every numeric field that is present is finite.
  bool all_finite() const;
};

/// Per-sample records merge alignment and realism; undefined percentages become null.
nlohmann::json to_json(const EvalReport& report);

/// Accuracy, alignment and realism tables with one row per report and, for more than one
/// report, a mean row. Undefined values print as "n/a".
std::string render_tables(std::span<const EvalReport> reports);

}  // namespace zshar::metrics
