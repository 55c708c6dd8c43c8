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

#include "zshar/data/ops.hpp"

#include <cmath>
#include <set>

#include "zshar/error.hpp"

namespace zshar::data {

SkeletonSequence resample_skeleton(const SkeletonSequence& seq, std::size_t target_frames) {
  if (seq.frames < 2 || target_frames < 2) {
    throw DataError("resample_skeleton: need at least 2 source and 2 target frames");
  }
  if (target_frames == seq.frames) return seq;
  SkeletonSequence out(target_frames, seq.joints, seq.dims, seq.class_name);
  const std::size_t width = seq.frame_width();
  const double scale =
      static_cast<double>(seq.frames - 1) / static_cast<double>(target_frames - 1);
  for (std::size_t t = 0; t < target_frames; ++t) {
    auto dst = out.frame(t);
    if (t == 0 || t == target_frames - 1) {
      const auto src = seq.frame(t == 0 ? 0 : seq.frames - 1);
      std::copy(src.begin(), src.end(), dst.begin());
      continue;
    }
    const double pos = static_cast<double>(t) * scale;
    const std::size_t lo = std::min(static_cast<std::size_t>(std::floor(pos)), seq.frames - 2);
    const double w = pos - static_cast<double>(lo);
    const auto a = seq.frame(lo);
    const auto b = seq.frame(lo + 1);
    for (std::size_t i = 0; i < width; ++i) dst[i] = (1.0 - w) * a[i] + w * b[i];
  }
  return out;
}

SkeletonSequence select_keypoints(const nn::Tensor2& raw, std::size_t dims,
                                  std::span<const std::size_t> indices,
                                  const std::string& class_name) {
  if (indices.empty()) throw ConfigError("select_keypoints: empty keypoint list");
  std::set<std::size_t> distinct;
  for (std::size_t idx : indices) {
    if (idx >= kRawKeypointCount) {
      throw ConfigError("select_keypoints: keypoint index " + std::to_string(idx) +
                        " outside [0, " + std::to_string(kRawKeypointCount) + ")");
    }
    if (!distinct.insert(idx).second) {
      throw ConfigError("select_keypoints: duplicate keypoint index " + std::to_string(idx));
    }
  }
  if (dims == 0 || raw.cols() != kRawKeypointCount * dims) {
    throw DimensionError("select_keypoints: raw frames are " + raw.shape() + ", expected " +
                         std::to_string(kRawKeypointCount) + "*" + std::to_string(dims) +
                         " columns");
  }
  SkeletonSequence out(raw.rows(), indices.size(), dims, class_name);
  for (std::size_t t = 0; t < raw.rows(); ++t) {
    for (std::size_t j = 0; j < indices.size(); ++j) {
      for (std::size_t k = 0; k < dims; ++k) out.at(t, j, k) = raw(t, indices[j] * dims + k);
    }
  }
  return out;
}

ClassSemanticSet build_semantic_set(
    const std::map<std::string, std::vector<std::vector<double>>>& per_class_embeddings) {
  ClassSemanticSet set;
  bool have_dim = false;
  for (const auto& [name, embeddings] : per_class_embeddings) {
    if (embeddings.empty()) {
      throw DataError("build_semantic_set: class '" + name + "' has no embeddings");
    }
    if (!have_dim) {
      set.embedding_dim = embeddings.front().size();
      have_dim = true;
    }
    std::vector<double> sum(set.embedding_dim, 0.0);
    for (const auto& e : embeddings) {
      if (e.size() != set.embedding_dim) {
        throw DimensionError("build_semantic_set: class '" + name + "' has an embedding of length " +
                             std::to_string(e.size()) + ", expected " +
                             std::to_string(set.embedding_dim));
      }
      for (std::size_t i = 0; i < e.size(); ++i) sum[i] += e[i];
    }
    for (double& v : sum) v /= static_cast<double>(embeddings.size());
    set.vectors[name] = std::move(sum);
    set.source_videos[name] = embeddings.size();
  }
  return set;
}

}  // namespace zshar::data
