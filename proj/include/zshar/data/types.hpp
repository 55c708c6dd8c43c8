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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zshar/nn/tensor.hpp"

namespace zshar::data {

/// One pre-windowed IMU sample: n time steps (rows) by d features (columns).
struct ImuWindow {
  std::string id;
  nn::Tensor2 values;
  std::optional<std::string> label;

  std::size_t steps() const { return values.rows(); }
  std::size_t features() const { return values.cols(); }
};

/// Per-class semantic vectors, each the mean of that class's video embeddings.
struct ClassSemanticSet {
  std::size_t embedding_dim = 0;
  std::map<std::string, std::vector<double>> vectors;
  std::map<std::string, std::size_t> source_videos;

  std::vector<std::string> class_names() const;
  bool contains(const std::string& name) const { return vectors.count(name) != 0; }
  /// Throws DataError naming the class when absent.
  const std::vector<double>& at(const std::string& name) const;
  /// Restriction to the listed classes, in the map's (sorted) order.
  ClassSemanticSet subset(std::span<const std::string> names) const;
  /// Checks lengths and nonzero norms; throws DimensionError / DataError naming the class.
  void validate() const;
};

/// T frames of J joints with K coordinates each, stored frame-major.
struct SkeletonSequence {
  std::size_t frames = 0;
  std::size_t joints = 12;
  std::size_t dims = 2;
  std::vector<double> coords;  // frames * joints * dims
  std::string class_name;

  SkeletonSequence() = default;
  SkeletonSequence(std::size_t frames, std::size_t joints, std::size_t dims,
                   std::string class_name = {});

  std::size_t frame_width() const { return joints * dims; }
  std::span<double> frame(std::size_t t) { return {coords.data() + t * frame_width(), frame_width()}; }
  std::span<const double> frame(std::size_t t) const {
    return {coords.data() + t * frame_width(), frame_width()};
  }
  double& at(std::size_t t, std::size_t joint, std::size_t dim) {
    return coords[(t * joints + joint) * dims + dim];
  }
  double at(std::size_t t, std::size_t joint, std::size_t dim) const {
    return coords[(t * joints + joint) * dims + dim];
  }

  /// T >= 2, finite, every coordinate within [-1.5, 1.5].
  void validate() const;

  friend bool operator==(const SkeletonSequence&, const SkeletonSequence&) = default;
};

/// class name -> super-class name
using SuperClassMap = std::map<std::string, std::string>;

/// super-class -> sorted member classes. Throws DataError if a super-class has fewer than two
/// members.
std::map<std::string, std::vector<std::string>> group_by_superclass(const SuperClassMap& map);

struct FoldSpec {
  std::size_t index = 0;
  std::vector<std::string> seen;
  std::vector<std::string> unseen;

  friend bool operator==(const FoldSpec&, const FoldSpec&) = default;
};

/// Joints selected from a 25-keypoint body layout (OpenPose BODY_25 ordering):
/// shoulders, elbows, wrists, hips, knees, ankles, right side first.
inline constexpr std::size_t kDefaultKeypoints[12] = {2, 5, 3, 6, 4, 7, 9, 12, 10, 13, 11, 14};
inline constexpr std::size_t kRawKeypointCount = 25;

struct DatasetManifest {
  std::string name;
  std::filesystem::path imu_path;
  std::filesystem::path semantics_path;
  std::filesystem::path skeleton_dir;
  std::filesystem::path superclass_path;
  std::size_t steps = 0;     // n
  std::size_t features = 0;  // d
  std::size_t folds = 0;
  std::size_t joints = 12;
  std::size_t dims = 2;
  std::size_t frames = 32;  // decoder target length
  std::vector<std::size_t> keypoints{std::begin(kDefaultKeypoints), std::end(kDefaultKeypoints)};
};

/// Everything a manifest references, loaded and cross-checked.
struct Dataset {
  DatasetManifest manifest;
  std::vector<ImuWindow> windows;
  ClassSemanticSet semantics;
  std::vector<SkeletonSequence> skeletons;
  SuperClassMap superclasses;

  /// Sorted class list (the super-class map's keys).
  std::vector<std::string> classes() const;
  const ImuWindow& window(const std::string& id) const;
};

}  // namespace zshar::data
