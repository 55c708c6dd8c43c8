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

// Slow reference implementations used to freeze expected values in tests.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "zshar/data/types.hpp"
#include "zshar/nn/rng.hpp"

namespace zshar::testing {

using Matrix = std::vector<std::vector<double>>;

inline data::SkeletonSequence make_sequence(const std::vector<std::vector<double>>& frames,
                                            std::size_t joints, std::size_t dims,
                                            std::string cls = "c") {
  data::SkeletonSequence s;
  s.frames = frames.size();
  s.joints = joints;
  s.dims = dims;
  s.class_name = std::move(cls);
  for (const auto& f : frames) s.coords.insert(s.coords.end(), f.begin(), f.end());
  return s;
}

inline data::SkeletonSequence random_sequence(nn::Rng& rng, std::size_t frames, std::size_t joints,
                                              std::size_t dims, std::string cls = "c") {
  data::SkeletonSequence s;
  s.frames = frames;
  s.joints = joints;
  s.dims = dims;
  s.class_name = std::move(cls);
  s.coords.resize(frames * joints * dims);
  for (double& v : s.coords) v = rng.uniform(-1.0, 1.0);
  return s;
}

/// Gauss-Jordan inverse with partial pivoting.
inline Matrix gauss_jordan_inverse(Matrix a) {
  const std::size_t n = a.size();
  Matrix inv(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    }
    std::swap(a[col], a[pivot]);
    std::swap(inv[col], inv[pivot]);
    const double p = a[col][col];
    for (std::size_t c = 0; c < n; ++c) {
      a[col][c] /= p;
      inv[col][c] /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double factor = a[r][col];
      for (std::size_t c = 0; c < n; ++c) {
        a[r][c] -= factor * a[col][c];
        inv[r][c] -= factor * inv[col][c];
      }
    }
  }
  return inv;
}

inline double quadratic_form_cost(const std::vector<double>& a, const std::vector<double>& b,
                                  const Matrix& precision) {
  double q = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      q += (a[i] - b[i]) * precision[i][j] * (a[j] - b[j]);
    }
  }
  return std::sqrt(std::max(q, 0.0));
}

inline std::vector<double> frame_of(const data::SkeletonSequence& s, std::size_t t) {
  const auto f = s.frame(t);
  return {f.begin(), f.end()};
}

/// Visits every monotone warping path from (0,0) to (n-1,m-1) and folds link costs.
inline void enumerate_paths(std::size_t n, std::size_t m,
                            const std::function<void(const std::vector<std::pair<std::size_t,
                                                                               std::size_t>>&)>& visit) {
  std::vector<std::pair<std::size_t, std::size_t>> path{{0, 0}};
  std::function<void()> walk = [&]() {
    const auto [i, j] = path.back();
    if (i == n - 1 && j == m - 1) {
      visit(path);
      return;
    }
    const std::pair<std::size_t, std::size_t> steps[] = {{1, 0}, {0, 1}, {1, 1}};
    for (const auto& [di, dj] : steps) {
      if (i + di < n && j + dj < m) {
        path.emplace_back(i + di, j + dj);
        walk();
        path.pop_back();
      }
    }
  };
  walk();
}

inline double brute_force_dtw(const data::SkeletonSequence& x, const data::SkeletonSequence& y,
                              const Matrix& precision) {
  double best = std::numeric_limits<double>::infinity();
  enumerate_paths(x.frames, y.frames, [&](const auto& path) {
    double total = 0.0;
    for (const auto& [i, j] : path) total += quadratic_form_cost(frame_of(x, i), frame_of(y, j), precision);
    best = std::min(best, total);
  });
  return best;
}

inline double euclid(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

inline double brute_force_dfd(const data::SkeletonSequence& p, const data::SkeletonSequence& q) {
  double best = std::numeric_limits<double>::infinity();
  enumerate_paths(p.frames, q.frames, [&](const auto& path) {
    double worst = 0.0;
    for (const auto& [i, j] : path) worst = std::max(worst, euclid(frame_of(p, i), frame_of(q, j)));
    best = std::min(best, worst);
  });
  return best;
}

/// Random symmetric positive-definite matrix A A^T + 0.5 I.
inline Matrix random_spd(nn::Rng& rng, std::size_t n) {
  Matrix a(n, std::vector<double>(n));
  for (auto& row : a) for (double& v : row) v = rng.normal();
  Matrix s(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) s[i][j] += a[i][k] * a[j][k];
    }
    s[i][i] += 0.5;
  }
  return s;
}

}  // namespace zshar::testing
