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
#include <numbers>
#include <set>

#include "doctest.h"
#include "json.hpp"
#include "test_util.hpp"
#include "zshar/data/io.hpp"
#include "zshar/data/ops.hpp"
#include "zshar/data/split.hpp"
#include "zshar/data/synth.hpp"
#include "zshar/error.hpp"

using namespace zshar;
using namespace zshar::data;
using zshar::testing::read_file;
using zshar::testing::read_tree;
using zshar::testing::TempDir;
using zshar::testing::write_file;

namespace {

const std::vector<std::string> kEightClasses = {"a0", "a1", "a2", "a3", "a4", "a5", "a6", "a7"};

SuperClassMap eight_class_map() {
  SuperClassMap m;
  for (std::size_t i = 0; i < kEightClasses.size(); ++i) m[kEightClasses[i]] = "g" + std::to_string(i % 3);
  return m;
}

}  // namespace

TEST_CASE("load_manifest accepts a generated fixture") {
  TempDir dir("fixture");
  const auto manifest = synth_generate(SynthConfig{}, dir.path());
  const Dataset ds = load_manifest(manifest);
  CHECK(ds.classes().size() == 8);
  std::set<std::string> supers;
  for (const auto& [_, s] : ds.superclasses) supers.insert(s);
  CHECK(supers.size() == 3);
  CHECK(ds.windows.size() == 8 * 40);
  CHECK(ds.windows.front().steps() == 64);
  CHECK(ds.windows.front().features() == 6);
  CHECK(ds.semantics.embedding_dim == 32);
  CHECK(ds.semantics.source_videos.at("activity_00") == 5);
  CHECK(ds.skeletons.size() == 8 * 5);
  CHECK(ds.manifest.folds == 4);
}

TEST_CASE("load_manifest names the class with a wrong-length semantic vector") {
  TempDir dir("badsem");
  const auto manifest = synth_generate(SynthConfig{}, dir.path());
  auto doc = nlohmann::json::parse(read_file(dir / "semantics.json"));
  doc["activity_03"] = std::vector<double>{1.0, 2.0};
  write_file(dir / "semantics.json", doc.dump());
  try {
    load_manifest(manifest);
    FAIL("expected DimensionError");
  } catch (const DimensionError& e) {
    CHECK(std::string(e.what()).find("activity_03") != std::string::npos);
    CHECK(std::string(e.what()).find("semantics.json") != std::string::npos);
  }
}

TEST_CASE("load_manifest rejects an IMU label absent from the super-class map") {
  TempDir dir("badlabel");
  const auto manifest = synth_generate(SynthConfig{}, dir.path());
  auto windows = read_imu_csv(dir / "imu.csv");
  windows[5].label = "juggling";
  write_imu_csv(dir / "imu.csv", windows);
  try {
    load_manifest(manifest);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("juggling") != std::string::npos);
  }
}

TEST_CASE("load_manifest reports a missing skeleton directory by path") {
  TempDir dir("noskel");
  const auto manifest = synth_generate(SynthConfig{}, dir.path());
  std::filesystem::remove_all(dir / "skeletons");
  try {
    load_manifest(manifest);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("skeletons") != std::string::npos);
  }
}

TEST_CASE("load_manifest rejects declared dimensions that disagree with the IMU file") {
  TempDir dir("baddim");
  const auto manifest = synth_generate(SynthConfig{}, dir.path());
  auto doc = nlohmann::json::parse(read_file(manifest));
  doc["d"] = 7;
  write_file(manifest, doc.dump());
  CHECK_THROWS_AS(load_manifest(manifest), DimensionError);
}

TEST_CASE("kfold_split on eight classes in three super-classes") {
  const SuperClassMap map = eight_class_map();
  const auto folds = kfold_split(kEightClasses, map, 4, 3, 7);
  REQUIRE(folds.size() == 4);
  std::set<std::string> ever_unseen;
  for (const FoldSpec& f : folds) {
    CHECK(fold_satisfies_invariants(f, kEightClasses, map));
    CHECK(f.unseen.size() == 3);
    ever_unseen.insert(f.unseen.begin(), f.unseen.end());
  }
  // Cursor rotation spreads the unseen role over the classes.
  CHECK(ever_unseen.size() >= 6);
  CHECK(kfold_split(kEightClasses, map, 4, 3, 7) == folds);
}

TEST_CASE("kfold_split with one two-member super-class") {
  const std::vector<std::string> classes{"a", "b"};
  const SuperClassMap map{{"a", "g"}, {"b", "g"}};
  const auto folds = kfold_split(classes, map, 1, 1, 3);
  REQUIRE(folds.size() == 1);
  const bool a_unseen = folds[0].seen == std::vector<std::string>{"b"} &&
                        folds[0].unseen == std::vector<std::string>{"a"};
  const bool b_unseen = folds[0].seen == std::vector<std::string>{"a"} &&
                        folds[0].unseen == std::vector<std::string>{"b"};
  CHECK((a_unseen || b_unseen));
}

TEST_CASE("kfold_split rejects a single-class super-class and over-large quotas") {
  const std::vector<std::string> classes{"a", "b", "c"};
  const SuperClassMap map{{"a", "g"}, {"b", "g"}, {"c", "h"}};
  CHECK_THROWS_AS(kfold_split(classes, map, 2, 1, 0), SplitError);
  const SuperClassMap ok{{"a", "g"}, {"b", "g"}, {"c", "g"}};
  CHECK_THROWS_AS(kfold_split(classes, ok, 2, 3, 0), SplitError);
}

TEST_CASE("kfold_split raises the unseen count to the number of super-classes") {
  const auto folds = kfold_split(kEightClasses, eight_class_map(), 5, 1, 11);
  for (const FoldSpec& f : folds) {
    CHECK(f.unseen.size() == 3);
    CHECK(fold_satisfies_invariants(f, kEightClasses, eight_class_map()));
  }
}

TEST_CASE("kfold_split invariants hold across seeds and quotas") {
  const SuperClassMap map = eight_class_map();
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    for (std::size_t unseen : {1, 3, 4, 5}) {
      for (const FoldSpec& f : kfold_split(kEightClasses, map, 5, unseen, seed)) {
        CHECK(fold_satisfies_invariants(f, kEightClasses, map));
        CHECK(f.unseen.size() == std::max<std::size_t>(unseen, 3));
      }
    }
  }
}

TEST_CASE("train_val_split proportions") {
  const std::vector<std::string> one_class(100, "x");
  const std::vector<std::string> classes{"x"};
  const auto s = train_val_split(one_class, classes, 0.9, 1);
  CHECK(s.train.size() == 90);
  CHECK(s.validation.size() == 10);

  std::vector<std::string> labels;
  for (int i = 0; i < 5; ++i) labels.push_back("p");
  for (int i = 0; i < 5; ++i) labels.push_back("q");
  const std::vector<std::string> pq{"p", "q"};
  const auto s2 = train_val_split(labels, pq, 0.9, 2);
  // floor(5 * 0.1) = 0, raised to one validation sample per class.
  CHECK(s2.train.size() == 8);
  CHECK(s2.validation.size() == 2);
  std::set<std::string> val_classes;
  for (std::size_t i : s2.validation) val_classes.insert(labels[i]);
  CHECK(val_classes.size() == 2);
}

TEST_CASE("train_val_split is disjoint and complete") {
  std::vector<std::string> labels;
  for (int i = 0; i < 37; ++i) labels.push_back(i % 3 == 0 ? "a" : (i % 3 == 1 ? "b" : "c"));
  const std::vector<std::string> classes{"a", "b", "c"};
  const auto s = train_val_split(labels, classes, 0.9, 5);
  std::set<std::size_t> all(s.train.begin(), s.train.end());
  for (std::size_t i : s.validation) CHECK(all.insert(i).second);
  CHECK(all.size() == labels.size());
}

TEST_CASE("train_val_split errors") {
  const std::vector<std::string> labels{"a", "a"};
  const std::vector<std::string> a{"a"};
  CHECK_THROWS_AS(train_val_split(labels, a, 1.0, 0), ConfigError);
  const std::vector<std::string> ab{"a", "b"};
  CHECK_THROWS_AS(train_val_split(labels, ab, 0.9, 0), DataError);
}

TEST_CASE("build_semantic_set averages embeddings") {
  const auto one = build_semantic_set({{"a", {{1.0, -2.0, 3.0}}}});
  CHECK(one.at("a") == std::vector<double>{1.0, -2.0, 3.0});
  const auto two = build_semantic_set({{"a", {{1.0, 0.0}, {0.0, 1.0}}}});
  CHECK(two.at("a") == std::vector<double>{0.5, 0.5});
  CHECK(two.source_videos.at("a") == 2);

  nn::Rng rng(4);
  std::vector<std::vector<double>> vs(10, std::vector<double>(6));
  for (auto& v : vs)
    for (double& x : v) x = rng.uniform(-3.0, 3.0);
  const auto set = build_semantic_set({{"c", vs}});
  for (std::size_t i = 0; i < 6; ++i) {
    double sum = 0.0;
    for (const auto& v : vs) sum += v[i];
    CHECK(std::abs(set.at("c")[i] - sum / 10.0) <= 1e-12);
  }

  CHECK_THROWS_AS(build_semantic_set({{"a", {}}}), DataError);
  CHECK_THROWS_AS(build_semantic_set({{"a", {{1.0, 2.0}, {1.0}}}}), DimensionError);
}

TEST_CASE("resample_skeleton") {
  SkeletonSequence seq(2, 1, 2, "c");
  seq.coords = {0.0, 1.0, 1.0, -1.0};
  CHECK(resample_skeleton(seq, 2) == seq);
  const auto three = resample_skeleton(seq, 3);
  CHECK(three.at(1, 0, 0) == 0.5);
  CHECK(three.at(1, 0, 1) == 0.0);
  CHECK(three.at(0, 0, 0) == 0.0);
  CHECK(three.at(2, 0, 1) == -1.0);

  SkeletonSequence sine(100, 1, 1, "s");
  for (std::size_t t = 0; t < 100; ++t) sine.coords[t] = std::sin(2.0 * std::numbers::pi * t / 99.0);
  const auto down = resample_skeleton(sine, 50);
  double max_dev = 0.0;
  for (std::size_t t = 0; t < 50; ++t) {
    max_dev = std::max(max_dev, std::abs(down.coords[t] - std::sin(2.0 * std::numbers::pi * t / 49.0)));
  }
  CHECK(max_dev < 0.01);
  CHECK(down.coords.front() == sine.coords.front());
  CHECK(down.coords.back() == sine.coords.back());
}

TEST_CASE("select_keypoints") {
  nn::Tensor2 raw(3, 25 * 2);
  for (std::size_t t = 0; t < 3; ++t)
    for (std::size_t c = 0; c < 50; ++c) raw(t, c) = 100.0 * t + c;

  std::vector<std::size_t> first12(12);
  for (std::size_t i = 0; i < 12; ++i) first12[i] = i;
  const auto head = select_keypoints(raw, 2, first12);
  for (std::size_t t = 0; t < 3; ++t)
    for (std::size_t i = 0; i < 24; ++i) CHECK(head.frame(t)[i] == raw(t, i));

  const auto def = select_keypoints(raw, 2, kDefaultKeypoints, "walk");
  CHECK(def.joints == 12);
  for (std::size_t j = 0; j < 12; ++j) {
    CHECK(def.at(1, j, 0) == raw(1, 2 * kDefaultKeypoints[j]));
    CHECK(def.at(1, j, 1) == raw(1, 2 * kDefaultKeypoints[j] + 1));
  }

  std::vector<std::size_t> dup = first12;
  dup[3] = dup[2];
  CHECK_THROWS_AS(select_keypoints(raw, 2, dup), ConfigError);
  std::vector<std::size_t> out_of_range = first12;
  out_of_range[0] = 25;
  CHECK_THROWS_AS(select_keypoints(raw, 2, out_of_range), ConfigError);
}

TEST_CASE("synth_generate is deterministic and seed-sensitive") {
  TempDir a("synth_a");
  TempDir b("synth_b");
  TempDir c("synth_c");
  SynthConfig cfg;
  cfg.samples_per_class = 6;
  synth_generate(cfg, a.path());
  synth_generate(cfg, b.path());
  cfg.seed = 2;
  synth_generate(cfg, c.path());
  CHECK(read_tree(a.path()) == read_tree(b.path()));
  CHECK(read_tree(a.path()) != read_tree(c.path()));
}

TEST_CASE("synthetic prototypes cluster by super-class") {
  const SynthWorld world = make_synth_world(SynthConfig{});
  double within = 0.0, cross = 0.0;
  std::size_t n_within = 0, n_cross = 0;
  double min_within = 1.0;
  for (std::size_t i = 0; i < world.prototypes.size(); ++i) {
    for (std::size_t j = i + 1; j < world.prototypes.size(); ++j) {
      double cos = 0.0;
      for (std::size_t k = 0; k < world.prototypes[i].size(); ++k)
        cos += world.prototypes[i][k] * world.prototypes[j][k];
      if (world.superclass_of[i] == world.superclass_of[j]) {
        within += cos;
        ++n_within;
        min_within = std::min(min_within, cos);
      } else {
        cross += cos;
        ++n_cross;
      }
    }
  }
  CHECK(min_within > cross / n_cross);
  CHECK(within / n_within > cross / n_cross);
}

TEST_CASE("synth rejects infeasible configs") {
  SynthConfig cfg;
  cfg.superclasses = 1;
  CHECK_THROWS_AS(synth_generate(cfg, "/nonexistent"), ConfigError);
  cfg.superclasses = 5;
  CHECK_THROWS_AS(make_synth_world(cfg), ConfigError);
}

TEST_CASE("IMU and skeleton files round-trip value-identically") {
  TempDir dir("roundtrip");
  nn::Rng rng(3);
  std::vector<ImuWindow> windows;
  for (int i = 0; i < 4; ++i) {
    nn::Tensor2 v(5, 3);
    for (double& x : v.values()) x = rng.normal() * std::pow(10.0, rng.uniform(-8.0, 8.0));
    windows.push_back({"w" + std::to_string(i), v, i == 2 ? std::nullopt : std::optional<std::string>("k")});
  }
  write_imu_csv(dir / "imu.csv", windows);
  const auto back = read_imu_csv(dir / "imu.csv");
  REQUIRE(back.size() == windows.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].id == windows[i].id);
    CHECK(back[i].label == windows[i].label);
    CHECK(back[i].values == windows[i].values);
  }

  SkeletonSequence seq(7, 12, 2, "walk");
  for (double& x : seq.coords) x = rng.uniform(-1.0, 1.0);
  write_skeleton_csv(dir / "walk__0.csv", seq);
  CHECK(read_skeleton_csv(dir / "walk__0.csv", 12, 2, "walk") == seq);
}

TEST_CASE("skeleton directory ordering and validation") {
  TempDir dir("skeldir");
  SkeletonSequence s(3, 1, 2, "b");
  write_skeleton_csv(dir / "b__10.csv", s);
  write_skeleton_csv(dir / "b__2.csv", s);
  s.class_name = "a";
  write_skeleton_csv(dir / "a__0.csv", s);
  const auto all = read_skeleton_dir(dir.path(), 1, 2);
  REQUIRE(all.size() == 3);
  CHECK(all[0].class_name == "a");
  CHECK(all[1].class_name == "b");

  write_file(dir / "b__3.csv", "0,0\n2.5,0\n");
  CHECK_THROWS_AS(read_skeleton_dir(dir.path(), 1, 2), DataError);
  write_file(dir / "b__3.csv", "0,0\n");
  CHECK_THROWS_AS(read_skeleton_dir(dir.path(), 1, 2), DataError);
}

TEST_CASE("folds file round-trips") {
  TempDir dir("folds");
  FoldsFile f{7, 3, kfold_split(kEightClasses, eight_class_map(), 4, 3, 7)};
  write_folds_json(dir / "folds.json", f);
  const FoldsFile back = read_folds_json(dir / "folds.json");
  CHECK(back.seed == 7);
  CHECK(back.unseen_per_fold == 3);
  CHECK(back.folds == f.folds);
}

TEST_CASE("malformed IMU blocks report file and line") {
  TempDir dir("badimu");
  write_file(dir / "imu.csv", "s1,a,2,2\n1,2\n3\n");
  try {
    read_imu_csv(dir / "imu.csv");
    FAIL("expected DimensionError");
  } catch (const DimensionError& e) {
    CHECK(std::string(e.what()).find("imu.csv:3") != std::string::npos);
  }
  write_file(dir / "imu.csv", "s1,a,3,2\n1,2\n");
  CHECK_THROWS_AS(read_imu_csv(dir / "imu.csv"), DataError);
  CHECK_THROWS_AS(read_imu_csv(dir / "missing.csv"), DataError);
}
