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

#include "zshar/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zshar/error.hpp"

namespace zshar::metrics {

AccuracyReport avg_accuracy_per_class(
    std::span<const std::pair<std::string, std::string>> predictions) {
  if (predictions.empty()) throw DataError("accuracy: no predictions");
  AccuracyReport report;
  for (const auto& [truth, predicted] : predictions) {
    ClassAccuracy& acc = report.per_class[truth];
    ++acc.total;
    if (truth == predicted) ++acc.correct;
  }
  double sum = 0.0;
  for (const auto& [_, acc] : report.per_class) {
    sum += static_cast<double>(acc.correct) / static_cast<double>(acc.total);
  }
  report.average_per_class = sum / static_cast<double>(report.per_class.size());
  return report;
}

CostModel::CostModel(Eigen::MatrixXd covariance, double epsilon)
    : covariance_(std::move(covariance)), epsilon_(epsilon) {
  if (!(epsilon_ > 0.0) || !std::isfinite(epsilon_)) {
    throw ConfigError("cost model: regularization epsilon must be positive, got " +
                      std::to_string(epsilon_));
  }
  if (covariance_.rows() != covariance_.cols() || covariance_.rows() == 0) {
    throw DataError("cost model: covariance must be a non-empty square matrix");
  }
  if (!covariance_.allFinite()) throw DataError("cost model: covariance has non-finite entries");
  if ((covariance_ - covariance_.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
    throw DataError("cost model: covariance is not symmetric");
  }
  const auto n = covariance_.rows();
  const Eigen::MatrixXd regularized =
      covariance_ + epsilon_ * Eigen::MatrixXd::Identity(n, n);
  const Eigen::LLT<Eigen::MatrixXd> llt(regularized);
  if (llt.info() != Eigen::Success) {
    throw NumericError("cost model: S + eps I is not positive definite");
  }
  precision_ = llt.solve(Eigen::MatrixXd::Identity(n, n));
  precision_ = 0.5 * (precision_ + precision_.transpose()).eval();
}

CostModel CostModel::identity(std::size_t dim, double epsilon) {
  const auto n = static_cast<Eigen::Index>(dim);
  return CostModel(Eigen::MatrixXd::Identity(n, n), epsilon);
}

double default_regularization(const Eigen::MatrixXd& covariance) {
  const double scaled = 1e-6 * covariance.trace() / static_cast<double>(covariance.rows());
  return std::max(scaled, 1e-12);
}

Eigen::MatrixXd frame_covariance(std::span<const data::SkeletonSequence> references) {
  if (references.empty()) throw DataError("cost model: no reference sequences");
  const std::size_t dim = references.front().frame_width();
  std::size_t frames = 0;
  // The mean is accumulated as an offset from the first frame so identical frames center to
  // exactly zero.
  const auto first = references.front().frames > 0 ? references.front().frame(0)
                                                   : std::span<const double>{};
  if (first.empty()) throw DataError("cost model: empty reference sequence");
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  for (const auto& seq : references) {
    if (seq.frame_width() != dim) {
      throw DimensionError("cost model: reference frame widths differ (" + std::to_string(dim) +
                           " vs " + std::to_string(seq.frame_width()) + ")");
    }
    for (std::size_t t = 0; t < seq.frames; ++t) {
      const auto f = seq.frame(t);
      for (std::size_t i = 0; i < dim; ++i) {
        if (!std::isfinite(f[i])) throw DataError("cost model: non-finite reference coordinate");
        mean[static_cast<Eigen::Index>(i)] += f[i] - first[i];
      }
      ++frames;
    }
  }
  mean /= static_cast<double>(frames);
  mean += Eigen::Map<const Eigen::VectorXd>(first.data(), mean.size());
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(mean.size(), mean.size());
  if (frames < 2) return cov;
  for (const auto& seq : references) {
    for (std::size_t t = 0; t < seq.frames; ++t) {
      const Eigen::Map<const Eigen::VectorXd> f(seq.frame(t).data(), mean.size());
      const Eigen::VectorXd centered = f - mean;
      cov.noalias() += centered * centered.transpose();
    }
  }
  cov /= static_cast<double>(frames - 1);
  return cov;
}

CostModel estimate_cost_model(std::span<const data::SkeletonSequence> references, double epsilon) {
  return CostModel(frame_covariance(references), epsilon);
}

CostModel estimate_cost_model(std::span<const data::SkeletonSequence> references) {
  Eigen::MatrixXd cov = frame_covariance(references);
  const double eps = default_regularization(cov);
  return CostModel(std::move(cov), eps);
}

double mahalanobis_cost(std::span<const double> a, std::span<const double> b,
                        const CostModel& model) {
  if (a.size() != model.dim() || b.size() != model.dim()) {
    throw DimensionError("mahalanobis: frame lengths " + std::to_string(a.size()) + " and " +
                         std::to_string(b.size()) + " for a " + std::to_string(model.dim()) +
                         "-dimensional cost model");
  }
  const auto n = static_cast<Eigen::Index>(a.size());
  const Eigen::VectorXd diff = Eigen::Map<const Eigen::VectorXd>(a.data(), n) -
                               Eigen::Map<const Eigen::VectorXd>(b.data(), n);
  const double q = diff.dot(model.precision() * diff);
  return std::sqrt(std::max(q, 0.0));
}

namespace {

void check_pair(const data::SkeletonSequence& x, const data::SkeletonSequence& y, const char* op) {
  if (x.frames == 0 || y.frames == 0) throw DataError(std::string(op) + ": empty sequence");
  if (x.frame_width() != y.frame_width()) {
    throw DimensionError(std::string(op) + ": frame widths " + std::to_string(x.frame_width()) +
                         " and " + std::to_string(y.frame_width()));
  }
}

double euclidean(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

double dtw_distance(const data::SkeletonSequence& x, const data::SkeletonSequence& y,
                    const CostModel& model) {
  check_pair(x, y, "dtw");
  if (x.frame_width() != model.dim()) {
    throw DimensionError("dtw: frame width " + std::to_string(x.frame_width()) +
                         " does not match cost model dimension " + std::to_string(model.dim()));
  }
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const std::size_t m = y.frames;
  // prev[j] = D(i-1, j), cur[j] = D(i, j); column 0 is the infinite border.
  std::vector<double> prev(m + 1, kInf);
  std::vector<double> cur(m + 1, kInf);
  prev[0] = 0.0;
  for (std::size_t i = 1; i <= x.frames; ++i) {
    cur[0] = kInf;
    for (std::size_t j = 1; j <= m; ++j) {
      const double best = std::min({prev[j], cur[j - 1], prev[j - 1]});
      cur[j] = mahalanobis_cost(x.frame(i - 1), y.frame(j - 1), model) + best;
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

double dfd(const data::SkeletonSequence& p, const data::SkeletonSequence& q) {
  check_pair(p, q, "dfd");
  const std::size_t n = p.frames;
  const std::size_t m = q.frames;
  std::vector<double> prev(m);
  std::vector<double> cur(m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double d = euclidean(p.frame(i), q.frame(j));
      if (i == 0 && j == 0) {
        cur[j] = d;
      } else if (i == 0) {
        cur[j] = std::max(d, cur[j - 1]);
      } else if (j == 0) {
        cur[j] = std::max(d, prev[j]);
      } else {
        cur[j] = std::max(d, std::min({prev[j], cur[j - 1], prev[j - 1]}));
      }
    }
    std::swap(prev, cur);
  }
  return prev[m - 1];
}

Match matching_seen_class(const data::SkeletonSequence& generated,
                          std::span<const data::SkeletonSequence> references,
                          const CostModel& model) {
  if (references.empty()) throw DataError("matching seen class: no reference sequences");
  Match best;
  bool have = false;
  for (std::size_t i = 0; i < references.size(); ++i) {
    const double d = dtw_distance(generated, references[i], model);
    const bool better = !have || d < best.distance ||
                        (d == best.distance && references[i].class_name < best.class_name);
    if (better) {
      best = {references[i].class_name, d, i};
      have = true;
    }
  }
  return best;
}

AlignmentReport alignment_metrics(std::vector<AlignmentRecord> records,
                                  const data::SuperClassMap& superclasses) {
  const auto super_of = [&](const std::string& cls) -> const std::string& {
    const auto it = superclasses.find(cls);
    if (it == superclasses.end()) throw DataError("alignment: unknown class '" + cls + "'");
    return it->second;
  };
  AlignmentReport report;
  std::size_t tsa_hits = 0, psa_hits = 0, oa_hits = 0;
  double distance_sum = 0.0;
  for (const AlignmentRecord& r : records) {
    const std::string& match_super = super_of(r.matching_class);
    const bool predicted_aligned = match_super == super_of(r.predicted_class);
    if (r.correct()) {
      ++report.tsa_count;
      if (match_super == super_of(r.true_class)) ++tsa_hits;
    } else {
      ++report.psa_count;
      if (predicted_aligned) ++psa_hits;
    }
    ++report.oa_count;
    if (predicted_aligned) ++oa_hits;
    distance_sum += r.distance;
  }
  const auto percent = [](std::size_t hits, std::size_t total) -> std::optional<double> {
    if (total == 0) return std::nullopt;
    return 100.0 * static_cast<double>(hits) / static_cast<double>(total);
  };
  report.tsa = percent(tsa_hits, report.tsa_count);
  report.psa = percent(psa_hits, report.psa_count);
  report.oa = percent(oa_hits, report.oa_count);
  report.add = records.empty() ? 0.0 : distance_sum / static_cast<double>(records.size());
  report.records = std::move(records);
  return report;
}

RealismReport realism_from_values(std::vector<double> values) {
  if (values.empty()) throw DataError("realism: no sequence pairs");
  RealismReport report;
  double sum = 0.0;
  for (double v : values) sum += v;
  report.dfd_mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - report.dfd_mean) * (v - report.dfd_mean);
  report.dfd_std = std::sqrt(sq / static_cast<double>(values.size()));
  report.values = std::move(values);
  return report;
}

RealismReport realism_report(std::span<const SkeletonPair> pairs) {
  std::vector<double> values;
  values.reserve(pairs.size());
  for (const SkeletonPair& p : pairs) values.push_back(dfd(*p.generated, *p.reference));
  return realism_from_values(std::move(values));
}

}  // namespace zshar::metrics
