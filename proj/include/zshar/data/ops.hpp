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

#include <map>
#include <span>
#include <string>
#include <vector>

#include "zshar/data/types.hpp"
#include "zshar/nn/tensor.hpp"

namespace zshar::data {

/// Linear interpolation of every joint coordinate onto `target_frames` evenly spaced points
/// of the normalized time axis. Endpoints are copied exactly.
SkeletonSequence resample_skeleton(const SkeletonSequence& seq, std::size_t target_frames);

/// Projects raw frames (T x 25*K, keypoint-major) onto the listed keypoints, keeping their
/// order. Throws ConfigError on an empty list, a duplicate or an out-of-range index.
SkeletonSequence select_keypoints(const nn::Tensor2& raw, std::size_t dims,
                                  std::span<const std::size_t> indices,
                                  const std::string& class_name = {});

/// Class semantic vector = arithmetic mean of the class's video embeddings.
ClassSemanticSet build_semantic_set(
    const std::map<std::string, std::vector<std::vector<double>>>& per_class_embeddings);

}  // namespace zshar::data
