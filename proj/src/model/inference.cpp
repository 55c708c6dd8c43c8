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

#include "zshar/model/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zshar/error.hpp"
#include "zshar/model/network.hpp"

namespace zshar::model {

Prediction prediction_from_features(std::vector<double> features,
                                    const data::ClassSemanticSet& classes,
                                    bool normalize_features) {
  if (classes.vectors.empty()) throw DataError("predict: empty class set");
  std::vector<double> g = features;
  if (normalize_features) {
    double sq = 0.0;
    for (double v : g) sq += v * v;
    if (sq > 0.0) {
      const double norm = std::sqrt(sq);
      for (double& v : g) v /= norm;
    }
  }
  Prediction p;
  p.scores = similarity_scores(g, classes);
  p.probabilities = class_probabilities(p.scores);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& [name, s] : p.scores) {
    if (p.predicted_class.empty() || s > best) {
      best = s;
      p.predicted_class = name;
    }
  }
  p.features = std::move(features);
  return p;
}

Prediction predict_unseen(const data::ImuWindow& x, const ModelParams& params,
                          const data::ClassSemanticSet& unseen) {
  nn::Rng unused(0);
  return prediction_from_features(encode_imu(x, params, nn::Mode::kEval, unused), unseen,
                                  params.arch.normalize_features);
}

std::vector<Prediction> predict_unseen_batch(std::span<const data::ImuWindow* const> windows,
                                             const ModelParams& params,
                                             const data::ClassSemanticSet& unseen) {
  constexpr std::size_t kChunk = 64;
  std::vector<Prediction> out;
  out.reserve(windows.size());
  nn::Rng unused(0);
  for (const data::ImuWindow* w : windows) {
    if (w->features() != params.arch.features) {
      throw DimensionError("predict: window '" + w->id + "' has " + std::to_string(w->features()) +
                           " features, model expects " + std::to_string(params.arch.features));
    }
  }
  for (std::size_t begin = 0; begin < windows.size(); begin += kChunk) {
    const auto chunk = windows.subspan(begin, std::min(kChunk, windows.size() - begin));
    const auto steps = stack_windows(chunk, params.normalization);
    const EncoderOutput enc = encode_batch(steps, params, nn::Mode::kEval, unused);
    for (std::size_t b = 0; b < chunk.size(); ++b) {
      const auto row = enc.features.row(b);
      out.push_back(prediction_from_features({row.begin(), row.end()}, unseen,
                                             params.arch.normalize_features));
    }
  }
  return out;
}

Explanation explain_prediction(Prediction prediction, const ModelParams& params,
                               std::span<const data::SkeletonSequence> references,
                               const metrics::CostModel& cost) {
  Explanation e;
  e.generated = decode_skeleton(prediction.features, params);
  e.generated.class_name = prediction.predicted_class;
  const metrics::Match match = metrics::matching_seen_class(e.generated, references, cost);
  e.matching_seen_class = match.class_name;
  e.dtw_to_match = match.distance;
  e.reference_index = match.reference_index;
  e.prediction = std::move(prediction);
  return e;
}

Explanation explain(const data::ImuWindow& x, const ModelParams& params,
                    const data::ClassSemanticSet& unseen,
                    std::span<const data::SkeletonSequence> references,
                    const metrics::CostModel& cost) {
  if (references.empty()) throw DataError("explain: no seen reference skeletons");
  return explain_prediction(predict_unseen(x, params, unseen), params, references, cost);
}

}  // namespace zshar::model
