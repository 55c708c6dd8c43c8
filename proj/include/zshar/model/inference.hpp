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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "zshar/data/types.hpp"
#include "zshar/metrics/metrics.hpp"
#include "zshar/model/params.hpp"

namespace zshar::model {

struct Prediction {
  std::string predicted_class;
  std::map<std::string, double> scores;         // beta_k
  std::map<std::string, double> probabilities;  // softmax of the scores
  std::vector<double> features;                 // f
};

/// Scores f against `classes`; the argmax takes the lexicographically smallest class on ties.
/// With normalize_features the scores use f / |f|.
Prediction prediction_from_features(std::vector<double> features,
                                    const data::ClassSemanticSet& classes,
                                    bool normalize_features);

/// Eval-mode encode, then matching against the unseen classes only.
Prediction predict_unseen(const data::ImuWindow& x, const ModelParams& params,
                          const data::ClassSemanticSet& unseen);

/// Batched predict_unseen; results are identical to calling it per window.
std::vector<Prediction> predict_unseen_batch(std::span<const data::ImuWindow* const> windows,
                                             const ModelParams& params,
                                             const data::ClassSemanticSet& unseen);

struct Explanation {
  data::SkeletonSequence generated;  // decoded from f, class_name = predicted class
  Prediction prediction;
  std::string matching_seen_class;
  double dtw_to_match = 0.0;
  std::size_t reference_index = 0;
};

/// Decodes the prediction's f and finds the nearest seen reference under DTW.
Explanation explain_prediction(Prediction prediction, const ModelParams& params,
                               std::span<const data::SkeletonSequence> references,
                               const metrics::CostModel& cost);

Explanation explain(const data::ImuWindow& x, const ModelParams& params,
                    const data::ClassSemanticSet& unseen,
                    std::span<const data::SkeletonSequence> references,
                    const metrics::CostModel& cost);

}  // namespace zshar::model
