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

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "zshar/error.hpp"
#include "zshar/metrics/metrics.hpp"
#include "zshar/nn/rng.hpp"

using namespace zshar;
using namespace zshar::metrics;
using zshar::testing::make_sequence;
using zshar::testing::random_sequence;

namespace {

Eigen::MatrixXd to_eigen(const zshar::testing::Matrix& m) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(m.size()), static_cast<Eigen::Index>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m[i][j];
  }
  return out;
}

using Pairs = std::vector<std::pair<std::string, std::string>>;

data::SuperClassMap two_group_map() {
  return {{"jog", "move"}, {"walk", "move"}, {"sit", "rest"}, {"lie", "rest"}};
}

}  // namespace

TEST_CASE("average accuracy per class") {
  const Pairs all_correct = {{"a", "a"}, {"b", "b"}, {"b", "b"}};
  CHECK(avg_accuracy_per_class(all_correct).average_per_class == 1.0);

  const Pairs mixed = {{"a", "a"}, {"a", "a"}, {"a", "a"}, {"a", "b"},
                       {"b", "b"}, {"b", "a"}};
  CHECK(avg_accuracy_per_class(mixed).average_per_class == doctest::Approx(0.625).epsilon(1e-15));

  Pairs imbalanced;
  for (int i = 0; i < 99; ++i) imbalanced.emplace_back("big", "big");
  imbalanced.emplace_back("small", "big");
  const auto report = avg_accuracy_per_class(imbalanced);
  CHECK(report.average_per_class == 0.5);
  CHECK(report.per_class.at("big").correct == 99);
  CHECK(report.per_class.at("small").total == 1);

  CHECK_THROWS_AS(avg_accuracy_per_class(Pairs{}), DataError);
}

TEST_CASE("average accuracy is invariant to duplicating every instance") {
  nn::Rng rng(5);
  Pairs base;
  const char* names[] = {"a", "b", "c"};
  for (int i = 0; i < 30; ++i) base.emplace_back(names[rng.index(3)], names[rng.index(3)]);
  Pairs tripled;
  for (int k = 0; k < 3; ++k) tripled.insert(tripled.end(), base.begin(), base.end());
  CHECK(avg_accuracy_per_class(base).average_per_class ==
        doctest::Approx(avg_accuracy_per_class(tripled).average_per_class).epsilon(1e-15));
}

TEST_CASE("mahalanobis cost closed forms") {
  const CostModel identity = CostModel::identity(2);
  const std::vector<double> a{1.0, 0.0}, b{0.0, 0.0};
  CHECK(mahalanobis_cost(a, a, identity) == 0.0);
  CHECK(mahalanobis_cost(a, b, identity) == 1.0);

  Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(2, 2);
  diag(0, 0) = 4.0;
  diag(1, 1) = 1.0;
  const CostModel scaled(diag, 1e-300);
  const std::vector<double> c{2.0, 0.0};
  CHECK(mahalanobis_cost(c, b, scaled) == doctest::Approx(1.0).epsilon(1e-14));

  const std::vector<double> wrong{1.0, 2.0, 3.0};
  CHECK_THROWS_AS(mahalanobis_cost(wrong, b, identity), DimensionError);
}

TEST_CASE("mahalanobis cost with identity covariance equals euclidean distance") {
  nn::Rng rng(11);
  const CostModel identity = CostModel::identity(6);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a(6), b(6);
    for (double& v : a) v = rng.uniform(-2.0, 2.0);
    for (double& v : b) v = rng.uniform(-2.0, 2.0);
    CHECK(std::fabs(mahalanobis_cost(a, b, identity) - zshar::testing::euclid(a, b)) <= 1e-10);
  }
}

TEST_CASE("mahalanobis cost matches a Gauss-Jordan oracle for random SPD covariances") {
  nn::Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = zshar::testing::random_spd(rng, 4);
    const double eps = 1e-3;
    auto reg = s;
    for (std::size_t i = 0; i < 4; ++i) reg[i][i] += eps;
    const auto precision = zshar::testing::gauss_jordan_inverse(reg);
    const CostModel model(to_eigen(s), eps);
    std::vector<double> a(4), b(4);
    for (double& v : a) v = rng.normal();
    for (double& v : b) v = rng.normal();
    const double expected = zshar::testing::quadratic_form_cost(a, b, precision);
    CHECK(mahalanobis_cost(a, b, model) == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("cost model invariants and errors") {
  nn::Rng rng(13);
  const auto s = to_eigen(zshar::testing::random_spd(rng, 5));
  const CostModel model(s, 1e-4);
  const Eigen::MatrixXd reg = s + 1e-4 * Eigen::MatrixXd::Identity(5, 5);
  CHECK((model.precision() * reg - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() <= 1e-8);

  CHECK_THROWS_AS(CostModel(s, 0.0), ConfigError);
  CHECK_THROWS_AS(CostModel(s, -1.0), ConfigError);
  Eigen::MatrixXd asym = s;
  asym(0, 1) += 1e-6;
  CHECK_THROWS_AS(CostModel(asym, 1e-3), DataError);
  Eigen::MatrixXd negative = -Eigen::MatrixXd::Identity(3, 3);
  CHECK_THROWS_AS(CostModel(negative, 1e-3), NumericError);
}

TEST_CASE("estimate_cost_model recovers identity covariance from 10^4 frames") {
  nn::Rng rng(21);
  std::vector<data::SkeletonSequence> refs;
  for (int s = 0; s < 100; ++s) {
    std::vector<std::vector<double>> frames(100, std::vector<double>(4));
    for (auto& f : frames) for (double& v : f) v = rng.normal();
    refs.push_back(make_sequence(frames, 2, 2));
  }
  const CostModel model = estimate_cost_model(refs, 1e-6);
  const Eigen::MatrixXd diff = model.covariance() - Eigen::MatrixXd::Identity(4, 4);
  CHECK(diff.cwiseAbs().maxCoeff() < 0.1);
}

TEST_CASE("estimate_cost_model on a repeated frame gives S = 0 and a 1/eps inverse") {
  const auto seq = make_sequence({{0.1, 0.2}, {0.1, 0.2}, {0.1, 0.2}}, 1, 2);
  const std::vector<data::SkeletonSequence> refs{seq, seq};
  const CostModel model = estimate_cost_model(refs, 0.5);
  CHECK(model.covariance().cwiseAbs().maxCoeff() == 0.0);
  CHECK(model.precision()(0, 0) == doctest::Approx(2.0));
  CHECK(model.precision()(1, 1) == doctest::Approx(2.0));
  CHECK(model.precision()(0, 1) == 0.0);

  const CostModel floored = estimate_cost_model(refs);
  CHECK(floored.epsilon() == 1e-12);
  CHECK_THROWS_AS(estimate_cost_model(refs, 0.0), ConfigError);

  auto bad = seq;
  bad.coords[3] = std::numeric_limits<double>::quiet_NaN();
  const std::vector<data::SkeletonSequence> bad_refs{bad};
  CHECK_THROWS_AS(estimate_cost_model(bad_refs, 1e-3), DataError);
}

TEST_CASE("dtw hand example and identity") {
  const CostModel euclidean = CostModel::identity(1);
  const auto x = make_sequence({{0.0}, {1.0}, {2.0}}, 1, 1);
  const auto y = make_sequence({{0.0}, {2.0}}, 1, 1);
  CHECK(dtw_distance(x, y, euclidean) == 1.0);
  CHECK(dtw_distance(y, x, euclidean) == 1.0);
  CHECK(dtw_distance(x, x, euclidean) == 0.0);

  const auto z = make_sequence({{0.0, 1.0}}, 1, 2);
  CHECK_THROWS_AS(dtw_distance(x, z, euclidean), DimensionError);
  data::SkeletonSequence empty;
  empty.joints = 1;
  empty.dims = 1;
  CHECK_THROWS_AS(dtw_distance(x, empty, euclidean), DataError);
}

TEST_CASE("dtw equals the exhaustive monotone-path minimum on 200 random pairs") {
  nn::Rng rng(31);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = zshar::testing::random_spd(rng, 4);
    const double eps = 1e-4;
    auto reg = s;
    for (std::size_t i = 0; i < 4; ++i) reg[i][i] += eps;
    const auto precision = zshar::testing::gauss_jordan_inverse(reg);
    const CostModel model(to_eigen(s), eps);
    const auto x = random_sequence(rng, 1 + rng.index(6), 2, 2);
    const auto y = random_sequence(rng, 1 + rng.index(6), 2, 2);
    const double fast = dtw_distance(x, y, model);
    const double slow = zshar::testing::brute_force_dtw(x, y, precision);
    worst = std::max(worst, std::fabs(fast - slow));
    CHECK(dtw_distance(y, x, model) == doctest::Approx(fast).epsilon(1e-12));
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("matching_seen_class picks the nearest reference with deterministic ties") {
  const CostModel euclidean = CostModel::identity(1);
  const auto gen = make_sequence({{0.0}, {0.0}}, 1, 1);
  const std::vector<data::SkeletonSequence> refs{
      make_sequence({{0.5}, {0.5}}, 1, 1, "near"),
      make_sequence({{1.0}, {1.0}}, 1, 1, "far"),
  };
  const Match m = matching_seen_class(gen, refs, euclidean);
  CHECK(m.class_name == "near");
  CHECK(m.distance == 1.0);
  CHECK(m.reference_index == 0);

  std::vector<data::SkeletonSequence> with_self = refs;
  with_self.push_back(make_sequence({{0.0}, {0.0}}, 1, 1, "self"));
  const Match exact = matching_seen_class(gen, with_self, euclidean);
  CHECK(exact.class_name == "self");
  CHECK(exact.distance == 0.0);

  const std::vector<data::SkeletonSequence> tied{
      make_sequence({{1.0}, {1.0}}, 1, 1, "zeta"),
      make_sequence({{1.0}, {1.0}}, 1, 1, "alpha"),
      make_sequence({{1.0}, {1.0}}, 1, 1, "alpha"),
  };
  const Match tie = matching_seen_class(gen, tied, euclidean);
  CHECK(tie.class_name == "alpha");
  CHECK(tie.reference_index == 1);

  CHECK_THROWS_AS(matching_seen_class(gen, std::vector<data::SkeletonSequence>{}, euclidean),
                  DataError);
}

TEST_CASE("alignment metrics on small record sets") {
  const auto map = two_group_map();
  const auto all_good = alignment_metrics(
      {{"s0", "jog", "jog", "walk", 1.0}, {"s1", "sit", "sit", "lie", 3.0}}, map);
  CHECK(all_good.tsa == 100.0);
  CHECK_FALSE(all_good.psa.has_value());
  CHECK(all_good.oa == 100.0);
  CHECK(all_good.add == 2.0);

  const auto mixed = alignment_metrics(
      {{"s0", "jog", "jog", "walk", 1.0}, {"s1", "sit", "jog", "lie", 2.0}}, map);
  CHECK(mixed.tsa == 100.0);
  CHECK(mixed.psa == 0.0);
  CHECK(mixed.oa == 50.0);
  CHECK(mixed.oa_count == mixed.tsa_count + mixed.psa_count);

  const auto none = alignment_metrics({}, map);
  CHECK_FALSE(none.tsa.has_value());
  CHECK_FALSE(none.oa.has_value());

  CHECK_THROWS_AS(alignment_metrics({{"s0", "jog", "jog", "swim", 1.0}}, map), DataError);
}

TEST_CASE("alignment metrics reproduce a hand tally over random records") {
  const auto map = two_group_map();
  const std::vector<std::string> classes{"jog", "walk", "sit", "lie"};
  nn::Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<AlignmentRecord> records;
    int correct = 0, correct_aligned = 0, wrong = 0, wrong_aligned = 0;
    for (int i = 0; i < 40; ++i) {
      AlignmentRecord r{"s" + std::to_string(i), classes[rng.index(4)], classes[rng.index(4)],
                        classes[rng.index(4)], rng.uniform(0.0, 5.0)};
      if (r.true_class == r.predicted_class) {
        ++correct;
        if (map.at(r.matching_class) == map.at(r.true_class)) ++correct_aligned;
      } else {
        ++wrong;
        if (map.at(r.matching_class) == map.at(r.predicted_class)) ++wrong_aligned;
      }
      records.push_back(r);
    }
    const auto report = alignment_metrics(records, map);
    REQUIRE(correct > 0);
    REQUIRE(wrong > 0);
    CHECK(*report.tsa == doctest::Approx(100.0 * correct_aligned / correct));
    CHECK(*report.psa == doctest::Approx(100.0 * wrong_aligned / wrong));
    CHECK(*report.oa == doctest::Approx(100.0 * (correct_aligned + wrong_aligned) / 40.0));
    CHECK(*report.tsa >= 0.0);
    CHECK(*report.oa <= 100.0);
  }
}

TEST_CASE("dfd hand example and properties") {
  const auto p = make_sequence({{0.0, 0.0}, {1.0, 0.0}}, 1, 2);
  const auto q = make_sequence({{0.0, 1.0}, {1.0, 1.0}}, 1, 2);
  CHECK(dfd(p, q) == 1.0);
  CHECK(dfd(p, p) == 0.0);
  data::SkeletonSequence empty;
  empty.joints = 1;
  empty.dims = 2;
  CHECK_THROWS_AS(dfd(p, empty), DataError);
}

TEST_CASE("dfd equals the exhaustive coupling minimum on 200 random pairs") {
  nn::Rng rng(51);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = random_sequence(rng, 1 + rng.index(6), 2, 2);
    const auto q = random_sequence(rng, 1 + rng.index(6), 2, 2);
    const double fast = dfd(p, q);
    worst = std::max(worst, std::fabs(fast - zshar::testing::brute_force_dfd(p, q)));
    CHECK(dfd(q, p) == fast);
    using zshar::testing::euclid;
    using zshar::testing::frame_of;
    CHECK(fast >= euclid(frame_of(p, 0), frame_of(q, 0)));
    CHECK(fast >= euclid(frame_of(p, p.frames - 1), frame_of(q, q.frames - 1)));
    double hausdorff = 0.0;
    for (std::size_t i = 0; i < p.frames; ++i) {
      double nearest = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < q.frames; ++j) nearest = std::min(nearest, euclid(frame_of(p, i), frame_of(q, j)));
      hausdorff = std::max(hausdorff, nearest);
    }
    CHECK(fast >= hausdorff);
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("realism report statistics") {
  const auto r = realism_from_values({1.0, 3.0});
  CHECK(r.dfd_mean == 2.0);
  CHECK(r.dfd_std == 1.0);
  CHECK_THROWS_AS(realism_from_values({}), DataError);

  nn::Rng rng(61);
  std::vector<data::SkeletonSequence> gens, refs;
  for (int i = 0; i < 25; ++i) {
    gens.push_back(random_sequence(rng, 4, 2, 2));
    refs.push_back(random_sequence(rng, 5, 2, 2));
  }
  std::vector<SkeletonPair> pairs, same;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    pairs.push_back({&gens[i], &refs[i]});
    same.push_back({&gens[i], &gens[i]});
  }
  const auto zero = realism_report(same);
  CHECK(zero.dfd_mean == 0.0);
  CHECK(zero.dfd_std == 0.0);

  const auto report = realism_report(pairs);
  double mean = 0.0;
  for (double v : report.values) mean += v;
  mean /= 25.0;
  double var = 0.0;
  for (double v : report.values) var += (v - mean) * (v - mean);
  CHECK(std::fabs(report.dfd_mean - mean) <= 1e-12);
  CHECK(std::fabs(report.dfd_std - std::sqrt(var / 25.0)) <= 1e-12);
  const auto [lo, hi] = std::minmax_element(report.values.begin(), report.values.end());
  CHECK(report.dfd_mean >= *lo);
  CHECK(report.dfd_mean <= *hi);
}
