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

#include <algorithm>
#include <cmath>

#include "zshar/data/types.hpp"
#include "zshar/error.hpp"

namespace zshar::data {

std::vector<std::string> ClassSemanticSet::class_names() const {
  std::vector<std::string> names;
  names.reserve(vectors.size());
  for (const auto& [name, _] : vectors) names.push_back(name);
  return names;
}

const std::vector<double>& ClassSemanticSet::at(const std::string& name) const {
  const auto it = vectors.find(name);
  if (it == vectors.end()) throw DataError("no semantic vector for class '" + name + "'");
  return it->second;
}

ClassSemanticSet ClassSemanticSet::subset(std::span<const std::string> names) const {
  ClassSemanticSet out;
  out.embedding_dim = embedding_dim;
  for (const std::string& name : names) {
    out.vectors[name] = at(name);
    const auto it = source_videos.find(name);
    if (it != source_videos.end()) out.source_videos[name] = it->second;
  }
  return out;
}

void ClassSemanticSet::validate() const {
  for (const auto& [name, v] : vectors) {
    if (v.size() != embedding_dim) {
      throw DimensionError("semantic vector for class '" + name + "' has length " +
                           std::to_string(v.size()) + ", expected embedding_dim " +
                           std::to_string(embedding_dim));
    }
    double sq = 0.0;
    for (double x : v) {
      if (!std::isfinite(x)) throw DataError("semantic vector for class '" + name + "' is not finite");
      sq += x * x;
    }
    if (sq == 0.0) throw DataError("semantic vector for class '" + name + "' has zero norm");
  }
}

SkeletonSequence::SkeletonSequence(std::size_t frames, std::size_t joints, std::size_t dims,
                                   std::string class_name)
    : frames(frames),
      joints(joints),
      dims(dims),
      coords(frames * joints * dims, 0.0),
      class_name(std::move(class_name)) {}

void SkeletonSequence::validate() const {
  if (frames < 2) {
    throw DataError("skeleton sequence of class '" + class_name + "' has " +
                    std::to_string(frames) + " frames, need at least 2");
  }
  if (coords.size() != frames * joints * dims) {
    throw DimensionError("skeleton sequence of class '" + class_name +
                         "' has inconsistent coordinate count");
  }
  for (double v : coords) {
    if (!std::isfinite(v) || v < -1.5 || v > 1.5) {
      throw DataError("skeleton sequence of class '" + class_name +
                      "' has a coordinate outside [-1.5, 1.5]");
    }
  }
}

std::map<std::string, std::vector<std::string>> group_by_superclass(const SuperClassMap& map) {
  std::map<std::string, std::vector<std::string>> groups;
  for (const auto& [cls, super] : map) groups[super].push_back(cls);
  for (const auto& [super, members] : groups) {
    if (members.size() < 2) {
      throw DataError("super-class '" + super + "' has a single member class '" +
                      members.front() + "'");
    }
  }
  return groups;
}

std::vector<std::string> Dataset::classes() const {
  std::vector<std::string> names;
  for (const auto& [cls, _] : superclasses) names.push_back(cls);
  return names;
}

const ImuWindow& Dataset::window(const std::string& id) const {
  const auto it = std::find_if(windows.begin(), windows.end(),
                               [&](const ImuWindow& w) { return w.id == id; });
  if (it == windows.end()) throw DataError("no IMU sample with id '" + id + "'");
  return *it;
}

}  // namespace zshar::data
