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

#include <filesystem>
#include <vector>

#include "zshar/data/types.hpp"

namespace zshar::data {

// File formats
//
//   IMU file        CSV blocks. A block starts with a header row `id,label,n,d` (label may be
//                   empty) followed by n rows of d comma-separated values. Blocks are
//                   separated by a blank line.
//   Semantics       JSON object with key "embedding_dim"; every other key (except "metadata")
//                   is a class name mapped to either one vector or an array of per-video
//                   vectors, which are averaged.
//   Skeleton        one CSV per video named `<class>__<idx>.csv`, T rows of J*K values.
//   Super-classes   JSON object class -> super-class.
//   Manifest        JSON {name, imu_path, semantics_path, skeleton_dir, superclass_path, n, d,
//                   folds} plus optional joints, dims, frames, keypoints. Relative paths are
//                   resolved against the manifest's directory.
//   Folds           JSON {seed, unseen_per_fold, folds: [{index, seen, unseen}]}.

std::vector<ImuWindow> read_imu_csv(const std::filesystem::path& path);
void write_imu_csv(const std::filesystem::path& path, const std::vector<ImuWindow>& windows);

ClassSemanticSet read_semantics_json(const std::filesystem::path& path);
/// Writes per-video vectors when given, else the class means.
void write_semantics_json(const std::filesystem::path& path, const ClassSemanticSet& set,
                          const std::map<std::string, std::vector<std::vector<double>>>* per_video =
                              nullptr);

SkeletonSequence read_skeleton_csv(const std::filesystem::path& path, std::size_t joints,
                                   std::size_t dims, const std::string& class_name);
void write_skeleton_csv(const std::filesystem::path& path, const SkeletonSequence& seq);
/// Reads every `<class>__<idx>.csv` in a directory, ordered by class then numeric index.
std::vector<SkeletonSequence> read_skeleton_dir(const std::filesystem::path& dir,
                                                std::size_t joints, std::size_t dims);
std::string skeleton_file_name(const std::string& class_name, std::size_t index);

SuperClassMap read_superclass_json(const std::filesystem::path& path);
void write_superclass_json(const std::filesystem::path& path, const SuperClassMap& map);

DatasetManifest read_manifest_json(const std::filesystem::path& path);
void write_manifest_json(const std::filesystem::path& path, const DatasetManifest& manifest);

/// Parses the manifest and every file it references, then checks cross-file consistency:
/// declared n/d match the IMU file, every IMU label, semantic class and skeleton class is in
/// the super-class map, and the semantic and skeleton class sets equal the map's class set.
Dataset load_manifest(const std::filesystem::path& path);

struct FoldsFile {
  std::uint64_t seed = 0;
  std::size_t unseen_per_fold = 0;
  std::vector<FoldSpec> folds;
};

FoldsFile read_folds_json(const std::filesystem::path& path);
void write_folds_json(const std::filesystem::path& path, const FoldsFile& folds);

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);

}  // namespace zshar::data
