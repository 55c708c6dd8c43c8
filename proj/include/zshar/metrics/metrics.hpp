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
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "zshar/data/types.hpp"

namespace zshar::metrics {

// ---------------------------------------------------------------------------
// Accuracy

struct ClassAccuracy {
  std::size_t correct = 0;
  std::size_t total = 0;
};

struct AccuracyReport {
  double average_per_class = 0.0;  // macro average of per-class recall
  std::map<std::string, ClassAccuracy> per_class;
};

/// Macro-averaged accuracy over the true classes present in `predictions`
/// (pairs of true class, predicted class). Throws DataError on empty input.
AccuracyReport avg_accuracy_per_class(
    std::span<const std::pair<std::string, std::string>> predictions);

// ---------------------------------------------------------------------------
// Mahalanobis local cost

/// Frame covariance with its regularized inverse (S + eps I)^-1.
class CostModel {
 public:
  /// Throws ConfigError for eps <= 0, DataError for a non-square or asymmetric S and
  /// NumericError when S + eps I is not positive definite.
  CostModel(Eigen::MatrixXd covariance, double epsilon);

  std::size_t dim() const { return static_cast<std::size_t>(covariance_.rows()); }
  double epsilon() const { return epsilon_; }
  const Eigen::MatrixXd& covariance() const { return covariance_; }
  const Eigen::MatrixXd& precision() const { return precision_; }

  static CostModel identity(std::size_t dim, double epsilon = 1e-300);

 private:
  Eigen::MatrixXd covariance_;
  Eigen::MatrixXd precision_;
  double epsilon_;
};

/// 1e-6 * trace(S) / dim, floored at 1e-12 so a degenerate S still gets a usable inverse.
double default_regularization(const Eigen::MatrixXd& covariance);

/// Unbiased sample covariance of every frame of every reference sequence.
Eigen::MatrixXd frame_covariance(std::span<const data::SkeletonSequence> references);

CostModel estimate_cost_model(std::span<const data::SkeletonSequence> references, double epsilon);
/// Same, with default_regularization.
CostModel estimate_cost_model(std::span<const data::SkeletonSequence> references);

/// sqrt((a - b)^T (S + eps I)^-1 (a - b)).
double mahalanobis_cost(std::span<const double> a, std::span<const double> b,
                        const CostModel& model);

// ---------------------------------------------------------------------------
// Sequence distances

/// Cumulative-cost DTW over the full grid with D(0,0) = 0 and infinite borders, using the
/// Mahalanobis local cost between frames. O(nm) time, O(m) memory.
double dtw_distance(const data::SkeletonSequence& x, const data::SkeletonSequence& y,
                    const CostModel& model);

/// Discrete Frechet distance with Euclidean frame distance on flattened coordinates.
double dfd(const data::SkeletonSequence& p, const data::SkeletonSequence& q);

struct Match {
  std::string class_name;
  double distance = 0.0;
  std::size_t reference_index = 0;
};

/// Reference with the smallest DTW distance; ties go to the smaller class name, then to the
/// earlier reference. Throws DataError on an empty reference set.
Match matching_seen_class(const data::SkeletonSequence& generated,
                          std::span<const data::SkeletonSequence> references,
                          const CostModel& model);

// ---------------------------------------------------------------------------
// Explanation alignment and realism

struct AlignmentRecord {
  std::string sample_id;
  std::string true_class;
  std::string predicted_class;
  std::string matching_class;
  double distance = 0.0;

  bool correct() const { return true_class == predicted_class; }
};

struct AlignmentReport {
  // Percentages in [0, 100]; nullopt when the denominator is zero.
  std::optional<double> tsa;
  std::optional<double> psa;
  std::optional<double> oa;
  double add = 0.0;  // mean DTW distance to the matching reference
  std::size_t tsa_count = 0;  // correct predictions
  std::size_t psa_count = 0;  // incorrect predictions
  std::size_t oa_count = 0;
  std::vector<AlignmentRecord> records;
};

/// TSA: correct predictions whose match shares the target's super-class.
/// PSA: incorrect predictions whose match shares the predicted class's super-class.
/// OA: all predictions whose match shares the predicted class's super-class.
AlignmentReport alignment_metrics(std::vector<AlignmentRecord> records,
                                  const data::SuperClassMap& superclasses);

struct RealismReport {
  double dfd_mean = 0.0;
  double dfd_std = 0.0;  // population standard deviation
  std::vector<double> values;
};

RealismReport realism_from_values(std::vector<double> values);

struct SkeletonPair {
  const data::SkeletonSequence* generated;
  const data::SkeletonSequence* reference;
};

RealismReport realism_report(std::span<const SkeletonPair> pairs);

}  // namespace zshar::metrics
