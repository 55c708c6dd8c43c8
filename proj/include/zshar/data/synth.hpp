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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "zshar/data/types.hpp"

namespace zshar::data {

struct SynthConfig {
  std::size_t classes = 8;
  std::size_t superclasses = 3;
  std::size_t samples_per_class = 40;
  std::size_t steps = 64;     // n
  std::size_t features = 6;   // d
  std::size_t frames = 32;    // T
  std::size_t embedding_dim = 32;
  std::size_t videos_per_class = 5;
  std::size_t latent_dim = 8;
  std::size_t folds = 4;
  std::uint64_t seed = 1;

  /// Throws ConfigError unless >= 2 super-classes and >= 2 classes in each.
  void validate() const;
};

/// Latent structure behind a generated dataset. Classes are assigned to super-classes
/// round-robin; each class prototype is its super-class center plus a class-specific offset,
/// so prototypes sharing a super-class are closer in cosine than prototypes that do not.
struct SynthWorld {
  SynthConfig config;
  std::vector<std::string> class_names;
  std::vector<std::string> superclass_names;
  std::vector<std::size_t> superclass_of;           // per class
  std::vector<std::vector<double>> prototypes;      // per class, unit length
};

SynthWorld make_synth_world(const SynthConfig& config);

/// Writes manifest.json, imu.csv, semantics.json, superclasses.json and skeletons/ into `dir`
/// (created if missing) and returns the manifest path. Output is a pure function of the config.
///   IMU windows: per-feature sinusoid mixtures whose amplitudes and offsets are fixed linear
///     maps of the class prototype, with seeded phase, gain jitter and additive noise.
///   Skeletons: a rest pose shifted by a posture offset plus smooth periodic joint motion, both
///     linear in the prototype.
///   Semantic vectors: a fixed linear embedding of the prototype plus per-video noise.
std::filesystem::path synth_generate(const SynthConfig& config, const std::filesystem::path& dir);

}  // namespace zshar::data
