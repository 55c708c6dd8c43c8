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

#include "zshar/data/synth.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "zshar/data/io.hpp"
#include "zshar/error.hpp"
#include "zshar/nn/rng.hpp"

namespace zshar::data {

namespace fs = std::filesystem;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Stream ids for derive_seed.
enum Stream : std::uint64_t { kWorld = 0, kImuMixing, kImuSamples, kSkeletons, kSemantics };

std::vector<double> gaussian_vector(std::size_t n, nn::Rng& rng) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.normal();
  return v;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void normalize(std::vector<double>& v) {
  const double n = std::sqrt(dot(v, v));
  for (double& x : v) x /= n;
}

// rows x cols matrix of N(0, scale^2) entries.
std::vector<std::vector<double>> gaussian_matrix(std::size_t rows, std::size_t cols, double scale,
                                                 nn::Rng& rng) {
  std::vector<std::vector<double>> m(rows);
  for (auto& row : m) {
    row = gaussian_vector(cols, rng);
    for (double& x : row) x *= scale;
  }
  return m;
}

std::vector<double> apply(const std::vector<std::vector<double>>& m, const std::vector<double>& v) {
  std::vector<double> out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = dot(m[i], v);
  return out;
}

// Rest pose for the default 12-joint layout (x, y), y pointing up.
constexpr double kRestPose[12][2] = {
    {-0.25, 0.55}, {0.25, 0.55},   // shoulders
    {-0.35, 0.25}, {0.35, 0.25},   // elbows
    {-0.40, -0.05}, {0.40, -0.05}, // wrists
    {-0.15, -0.05}, {0.15, -0.05}, // hips
    {-0.17, -0.40}, {0.17, -0.40}, // knees
    {-0.18, -0.75}, {0.18, -0.75}, // ankles
};

std::string indexed_name(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s_%02zu", prefix, i);
  return buf;
}

}  // namespace

void SynthConfig::validate() const {
  if (superclasses < 2) throw ConfigError("synth: need at least 2 super-classes");
  if (classes < 2 * superclasses) {
    throw ConfigError("synth: " + std::to_string(classes) + " classes cannot give each of " +
                      std::to_string(superclasses) + " super-classes two members");
  }
  if (samples_per_class == 0 || steps == 0 || features == 0 || frames < 2 ||
      embedding_dim == 0 || videos_per_class == 0 || latent_dim == 0 || folds == 0) {
    throw ConfigError("synth: counts must be positive and frames >= 2");
  }
}

SynthWorld make_synth_world(const SynthConfig& config) {
  config.validate();
  SynthWorld world;
  world.config = config;
  nn::Rng rng(nn::derive_seed(config.seed, kWorld));

  std::vector<std::vector<double>> centers;
  for (std::size_t g = 0; g < config.superclasses; ++g) {
    world.superclass_names.push_back(indexed_name("group", g));
    std::vector<double> c = gaussian_vector(config.latent_dim, rng);
    // Gram-Schmidt while there is room, so super-class centers are mutually orthogonal.
    if (g < config.latent_dim) {
      for (const auto& prev : centers) {
        const double proj = dot(c, prev);
        for (std::size_t i = 0; i < c.size(); ++i) c[i] -= proj * prev[i];
      }
    }
    normalize(c);
    centers.push_back(std::move(c));
  }
  constexpr double kClassSpread = 0.6;
  for (std::size_t c = 0; c < config.classes; ++c) {
    world.class_names.push_back(indexed_name("activity", c));
    const std::size_t g = c % config.superclasses;
    world.superclass_of.push_back(g);
    std::vector<double> offset = gaussian_vector(config.latent_dim, rng);
    normalize(offset);
    std::vector<double> proto = centers[g];
    for (std::size_t i = 0; i < proto.size(); ++i) proto[i] += kClassSpread * offset[i];
    normalize(proto);
    world.prototypes.push_back(std::move(proto));
  }
  return world;
}

fs::path synth_generate(const SynthConfig& config, const fs::path& dir) {
  const SynthWorld world = make_synth_world(config);
  const std::size_t n_classes = config.classes;
  const std::size_t latent = config.latent_dim;

  // IMU: feature j = offset_j + gain * sum_m amp_jm * sin(2 pi f_m t / n + phase_jm + shift).
  constexpr double kFrequencies[] = {1.5, 3.0, 4.5};
  constexpr std::size_t kComponents = std::size(kFrequencies);
  constexpr double kImuNoise = 0.15;
  nn::Rng mixing_rng(nn::derive_seed(config.seed, kImuMixing));
  const auto offsets = gaussian_matrix(config.features, latent, 0.8, mixing_rng);
  std::vector<std::vector<std::vector<double>>> amplitude_maps;
  for (std::size_t m = 0; m < kComponents; ++m) {
    amplitude_maps.push_back(gaussian_matrix(config.features, latent, 1.0, mixing_rng));
  }
  std::vector<std::vector<double>> phases(config.features, std::vector<double>(kComponents));
  for (auto& row : phases)
    for (double& p : row) p = mixing_rng.uniform(0.0, kTwoPi);

  nn::Rng imu_rng(nn::derive_seed(config.seed, kImuSamples));
  std::vector<ImuWindow> windows;
  std::size_t sample_id = 0;
  for (std::size_t c = 0; c < n_classes; ++c) {
    const auto& proto = world.prototypes[c];
    const std::vector<double> offset = apply(offsets, proto);
    std::vector<std::vector<double>> amps;
    for (const auto& map : amplitude_maps) amps.push_back(apply(map, proto));
    for (std::size_t s = 0; s < config.samples_per_class; ++s) {
      const double shift = imu_rng.uniform(0.0, kTwoPi);
      const double gain = 1.0 + 0.1 * imu_rng.normal();
      nn::Tensor2 values(config.steps, config.features);
      for (std::size_t t = 0; t < config.steps; ++t) {
        const double u = static_cast<double>(t) / static_cast<double>(config.steps);
        for (std::size_t j = 0; j < config.features; ++j) {
          double x = offset[j];
          for (std::size_t m = 0; m < kComponents; ++m) {
            x += gain * amps[m][j] * std::sin(kTwoPi * kFrequencies[m] * u + phases[j][m] + shift);
          }
          values(t, j) = x + kImuNoise * imu_rng.normal();
        }
      }
      windows.push_back({indexed_name("s", sample_id++), std::move(values), world.class_names[c]});
    }
  }

  // Skeletons: rest pose + sum over two harmonics of (C_m proto) * sin(2 pi m u + theta + psi).
  const std::size_t joints = std::size(kRestPose);
  const std::size_t width = joints * 2;
  constexpr double kMotionScale = 0.12;
  constexpr double kPostureScale = 0.15;
  constexpr double kJitter = 0.03;
  nn::Rng skel_rng(nn::derive_seed(config.seed, kSkeletons));
  const auto motion1 = gaussian_matrix(width, latent, kMotionScale, skel_rng);
  const auto motion2 = gaussian_matrix(width, latent, kMotionScale, skel_rng);
  std::vector<double> theta(width);
  for (double& t : theta) t = skel_rng.uniform(0.0, kTwoPi);
  const auto posture_map = gaussian_matrix(width, latent, kPostureScale, skel_rng);
  std::vector<SkeletonSequence> skeletons;
  for (std::size_t c = 0; c < n_classes; ++c) {
    const std::vector<double> a1 = apply(motion1, world.prototypes[c]);
    const std::vector<double> a2 = apply(motion2, world.prototypes[c]);
    const std::vector<double> posture = apply(posture_map, world.prototypes[c]);
    for (std::size_t v = 0; v < config.videos_per_class; ++v) {
      const std::size_t frames = config.frames + 4 * (v % 3);
      const double psi = skel_rng.uniform(-0.3, 0.3);
      const double gain = 1.0 + 0.1 * skel_rng.normal();
      SkeletonSequence seq(frames, joints, 2, world.class_names[c]);
      for (std::size_t t = 0; t < frames; ++t) {
        const double u = static_cast<double>(t) / static_cast<double>(frames - 1);
        auto frame = seq.frame(t);
        for (std::size_t i = 0; i < width; ++i) {
          const double rest = kRestPose[i / 2][i % 2] + posture[i];
          const double motion = a1[i] * std::sin(kTwoPi * u + theta[i] + psi) +
                                a2[i] * std::sin(2.0 * kTwoPi * u + theta[i] + 2.0 * psi);
          const double value = rest + gain * motion + kJitter * skel_rng.normal();
          frame[i] = std::clamp(value, -1.0, 1.0);
        }
      }
      skeletons.push_back(std::move(seq));
    }
  }

  // Semantic vectors: per-video embedding = Q proto + noise; the class vector is their mean.
  nn::Rng sem_rng(nn::derive_seed(config.seed, kSemantics));
  const double inv_sqrt_dim = 1.0 / std::sqrt(static_cast<double>(config.embedding_dim));
  const auto embed = gaussian_matrix(config.embedding_dim, latent, inv_sqrt_dim, sem_rng);
  std::map<std::string, std::vector<std::vector<double>>> per_video;
  for (std::size_t c = 0; c < n_classes; ++c) {
    const std::vector<double> base = apply(embed, world.prototypes[c]);
    auto& videos = per_video[world.class_names[c]];
    for (std::size_t v = 0; v < config.videos_per_class; ++v) {
      std::vector<double> e = base;
      for (double& x : e) x += 0.15 * inv_sqrt_dim * sem_rng.normal();
      videos.push_back(std::move(e));
    }
  }

  SuperClassMap superclasses;
  for (std::size_t c = 0; c < n_classes; ++c) {
    superclasses[world.class_names[c]] = world.superclass_names[world.superclass_of[c]];
  }

  fs::create_directories(dir);
  DatasetManifest manifest;
  manifest.name = "synthetic-seed" + std::to_string(config.seed);
  manifest.imu_path = dir / "imu.csv";
  manifest.semantics_path = dir / "semantics.json";
  manifest.skeleton_dir = dir / "skeletons";
  manifest.superclass_path = dir / "superclasses.json";
  manifest.steps = config.steps;
  manifest.features = config.features;
  manifest.folds = config.folds;
  manifest.joints = joints;
  manifest.dims = 2;
  manifest.frames = config.frames;

  write_imu_csv(manifest.imu_path, windows);
  ClassSemanticSet set;
  set.embedding_dim = config.embedding_dim;
  for (const auto& [name, videos] : per_video) set.vectors[name] = videos.front();
  write_semantics_json(manifest.semantics_path, set, &per_video);
  if (fs::exists(manifest.skeleton_dir)) fs::remove_all(manifest.skeleton_dir);
  fs::create_directories(manifest.skeleton_dir);
  std::map<std::string, std::size_t> video_index;
  for (const SkeletonSequence& s : skeletons) {
    write_skeleton_csv(manifest.skeleton_dir / skeleton_file_name(s.class_name, video_index[s.class_name]++), s);
  }
  write_superclass_json(manifest.superclass_path, superclasses);
  const fs::path manifest_path = dir / "manifest.json";
  write_manifest_json(manifest_path, manifest);
  return manifest_path;
}

}  // namespace zshar::data
