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
#include <set>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "test_util.hpp"
#include "zshar/cli/cli.hpp"
#include "zshar/data/io.hpp"
#include "zshar/data/split.hpp"
#include "zshar/error.hpp"
#include "zshar/model/checkpoint.hpp"

using namespace zshar;
using nlohmann::json;
using zshar::testing::read_file;
using zshar::testing::read_tree;
using zshar::testing::TempDir;
using zshar::testing::write_file;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> tiny_synth_args(const std::filesystem::path& dir) {
  return {"synth",       "--classes",       "6", "--superclasses", "2", "--samples-per-class",
          "8",           "--steps",         "8", "--features",     "3", "--frames",
          "6",           "--embedding-dim", "6", "--videos-per-class", "2", "--latent-dim",
          "4",           "--folds",         "2", "--seed",         "5", "--out", dir.string()};
}

std::vector<std::string> tiny_train_args(const std::filesystem::path& manifest,
                                         const std::filesystem::path& out) {
  return {"train",    "--manifest", manifest.string(), "--fold", "0", "--epochs", "2",
          "--batch-size", "8",      "--hidden",  "4",  "--stacks", "1", "--decoder-hidden",
          "4",        "--frames",   "5",         "--seed", "3", "--out", out.string()};
}

json read_json(const std::filesystem::path& path) { return json::parse(read_file(path)); }

// Runs synth and train once per process; later cases reuse the outputs.
struct Fixture {
  TempDir dir{"cli_fixture"};
  std::filesystem::path data = dir / "data";
  std::filesystem::path manifest = data / "manifest.json";
  std::filesystem::path run = dir / "run";
  Fixture() {
    REQUIRE(invoke(tiny_synth_args(data)).code == cli::kExitOk);
    const auto trained = invoke(tiny_train_args(manifest, run));
    REQUIRE_MESSAGE(trained.code == cli::kExitOk, trained.err);
  }
};

Fixture& fixture() {
  static Fixture f;
  return f;
}

}  // namespace

TEST_CASE("synth output is a pure function of the seed and records it") {
  TempDir a("cli_synth_a"), b("cli_synth_b");
  REQUIRE(invoke(tiny_synth_args(a / "d")).code == cli::kExitOk);
  REQUIRE(invoke(tiny_synth_args(b / "d")).code == cli::kExitOk);
  CHECK(read_tree(a / "d") == read_tree(b / "d"));
  CHECK(read_json(a / "d/synth_config.json").at("seed") == 5);

  const auto ds = data::load_manifest(a / "d/manifest.json");
  CHECK(ds.windows.size() == 48);
  CHECK(ds.classes().size() == 6);
  CHECK(ds.skeletons.size() == 12);
}

TEST_CASE("usage errors exit with code 2") {
  TempDir dir("cli_usage");
  CHECK(invoke({}).code == cli::kExitUsage);
  CHECK(invoke({"frobnicate"}).code == cli::kExitUsage);
  CHECK(invoke({"synth", "--classes", "many"}).code == cli::kExitUsage);
  CHECK(invoke({"synth", "--no-such-flag", "1"}).code == cli::kExitUsage);
  CHECK(invoke({"synth", "--classes", "3", "--superclasses", "2", "--out",
                (dir / "x").string()})
            .code == cli::kExitUsage);
  CHECK(invoke({"train"}).code == cli::kExitUsage);
  CHECK(invoke({"--help"}).code == cli::kExitOk);

  write_file(dir / "bad.json", "{\"classes\": 6, \"colour\": 1}");
  const auto r = invoke({"synth", "--config", (dir / "bad.json").string(), "--out",
                         (dir / "y").string()});
  CHECK(r.code == cli::kExitUsage);
  CHECK(r.err.find("colour") != std::string::npos);
}

TEST_CASE("split writes folds that satisfy the invariant and rejects infeasible requests") {
  auto& f = fixture();
  TempDir dir("cli_split");
  const auto r = invoke({"split", "--manifest", f.manifest.string(), "--unseen", "2", "--seed",
                         "9", "--out", dir.path().string()});
  REQUIRE_MESSAGE(r.code == cli::kExitOk, r.err);
  const auto folds = data::read_folds_json(dir / "folds.json");
  CHECK(folds.seed == 9);
  CHECK(folds.folds.size() == 2);
  const auto ds = data::load_manifest(f.manifest);
  const auto classes = ds.classes();
  for (const auto& fold : folds.folds) {
    CHECK(data::fold_satisfies_invariants(fold, classes, ds.superclasses));
  }

  // Two super-classes of three classes each cannot leave one seen class per super-class
  // when five classes are unseen.
  const auto bad = invoke({"split", "--manifest", f.manifest.string(), "--unseen", "5", "--out",
                           dir.path().string()});
  CHECK(bad.code == cli::kExitUsage);
}

TEST_CASE("train writes checkpoint, jsonl log and summary") {
  auto& f = fixture();
  const auto log = read_file(f.run / "train_log.jsonl");
  std::istringstream lines(log);
  std::string line;
  std::size_t count = 0;
  while (std::getline(lines, line)) {
    const auto entry = json::parse(line);
    ++count;
    CHECK(entry.at("epoch") == count);
    const double total = entry.at("loss_total");
    const double expected = entry.at("loss_matching").get<double>() +
                            0.01 * entry.at("loss_classification").get<double>() +
                            0.6 * entry.at("loss_reconstruction").get<double>();
    CHECK(std::isfinite(total));
    CHECK(total == doctest::Approx(expected).epsilon(1e-12));
  }
  CHECK(count == 2);

  const auto summary = read_json(f.run / "train_summary.json");
  CHECK(summary.at("seed") == 3);
  CHECK(summary.at("fold") == 0);
  CHECK(summary.at("config").at("epochs") == 2);
  const auto ckpt = model::load_checkpoint(f.run / "checkpoint.json");
  CHECK(ckpt.fold == std::optional<std::size_t>(0));
  CHECK(ckpt.config.seed == 3);
  CHECK(ckpt.params.arch.frames == 5);
}

TEST_CASE("train with lambda = alpha = 0 logs the matching loss as the total") {
  auto& f = fixture();
  TempDir dir("cli_ablation");
  write_file(dir / "cfg.json", "{\"lambda\": 0.0, \"alpha\": 0.0}");
  auto args = tiny_train_args(f.manifest, dir / "run");
  args.insert(args.end(), {"--lambda", "0.5", "--config", (dir / "cfg.json").string()});
  const auto r = invoke(args);
  REQUIRE_MESSAGE(r.code == cli::kExitOk, r.err);
  std::istringstream lines(read_file(dir / "run/train_log.jsonl"));
  std::string line;
  while (std::getline(lines, line)) {
    const auto entry = json::parse(line);
    CHECK(entry.at("loss_total").get<double>() == entry.at("loss_matching").get<double>());
  }
}

TEST_CASE("train is deterministic for a fixed seed") {
  auto& f = fixture();
  TempDir dir("cli_det");
  REQUIRE(invoke(tiny_train_args(f.manifest, dir / "run")).code == cli::kExitOk);
  CHECK(read_tree(dir / "run") == read_tree(f.run));
}

TEST_CASE("train reports missing inputs and bad options with code 2") {
  auto& f = fixture();
  TempDir dir("cli_missing");
  std::filesystem::copy(f.data, dir / "data", std::filesystem::copy_options::recursive);
  std::filesystem::remove_all(dir / "data/skeletons");
  const auto r = invoke(tiny_train_args(dir / "data/manifest.json", dir / "run"));
  CHECK(r.code == cli::kExitUsage);
  CHECK(r.err.find("skeletons") != std::string::npos);

  auto args = tiny_train_args(f.manifest, dir / "run2");
  args.insert(args.end(), {"--fold", "7"});
  CHECK(invoke(args).code == cli::kExitUsage);
  args = tiny_train_args(f.manifest, dir / "run3");
  args.insert(args.end(), {"--dropout", "1.5"});
  CHECK(invoke(args).code == cli::kExitUsage);
  args = tiny_train_args(f.manifest, dir / "run4");
  args.insert(args.end(), {"--pooling", "max"});
  CHECK(invoke(args).code == cli::kExitUsage);
}

TEST_CASE("eval is deterministic and reports finite metrics for every unseen sample") {
  auto& f = fixture();
  TempDir a("cli_eval_a"), b("cli_eval_b");
  const std::string ckpt = (f.run / "checkpoint.json").string();
  const auto ra = invoke({"eval", "--checkpoint", ckpt, "--manifest", f.manifest.string(),
                          "--out", a.path().string()});
  REQUIRE_MESSAGE(ra.code == cli::kExitOk, ra.err);
  REQUIRE(invoke({"eval", "--checkpoint", ckpt, "--manifest", f.manifest.string(), "--out",
                  b.path().string()})
              .code == cli::kExitOk);
  CHECK(read_tree(a.path()) == read_tree(b.path()));

  const auto doc = read_json(a / "report.json");
  REQUIRE(doc.at("reports").size() == 1);
  const auto& report = doc.at("reports")[0];
  const auto ckpt_data = model::load_checkpoint(ckpt);
  const std::set<std::string> unseen(ckpt_data.unseen_classes.begin(),
                                     ckpt_data.unseen_classes.end());
  CHECK(report.at("samples").size() == 8 * unseen.size());
  for (const auto& s : report.at("samples")) {
    CHECK(unseen.count(s.at("true_class").get<std::string>()) == 1);
    CHECK(unseen.count(s.at("predicted_class").get<std::string>()) == 1);
    CHECK(unseen.count(s.at("matching_seen_class").get<std::string>()) == 0);
    CHECK(std::isfinite(s.at("dtw_distance").get<double>()));
    CHECK(std::isfinite(s.at("dfd").get<double>()));
  }
  const double acc = report.at("accuracy").at("average_per_class");
  CHECK(acc >= 0.0);
  CHECK(acc <= 1.0);
  const auto tables = read_file(a / "report.txt");
  CHECK(tables.find("Average accuracy per class") != std::string::npos);
  CHECK(tables.find("Explanation realism") != std::string::npos);
}

TEST_CASE("eval rejects a checkpoint whose unseen classes have no samples") {
  auto& f = fixture();
  TempDir dir("cli_eval_empty");
  auto ckpt = model::load_checkpoint(f.run / "checkpoint.json");
  // Keep only windows of seen classes.
  const auto ds = data::load_manifest(f.manifest);
  std::filesystem::copy(f.data, dir / "data", std::filesystem::copy_options::recursive);
  std::vector<data::ImuWindow> kept;
  for (const auto& w : ds.windows) {
    if (std::find(ckpt.unseen_classes.begin(), ckpt.unseen_classes.end(), *w.label) ==
        ckpt.unseen_classes.end()) {
      kept.push_back(w);
    }
  }
  data::write_imu_csv(dir / "data" / ds.manifest.imu_path.filename(), kept);
  const auto r = invoke({"eval", "--checkpoint", (f.run / "checkpoint.json").string(),
                         "--manifest", (dir / "data/manifest.json").string(), "--out",
                         (dir / "out").string()});
  CHECK(r.code == cli::kExitUsage);
  CHECK(r.err.find("unseen") != std::string::npos);

  const auto corrupt = dir / "corrupt.json";
  write_file(corrupt, "{\"format\": \"zshar-checkpoint\"");
  CHECK(invoke({"eval", "--checkpoint", corrupt.string(), "--manifest", f.manifest.string(),
                "--out", (dir / "out2").string()})
            .code == cli::kExitUsage);
}

TEST_CASE("explain writes T frames and a csv that reads back to the same values") {
  auto& f = fixture();
  TempDir dir("cli_explain");
  const auto ckpt = model::load_checkpoint(f.run / "checkpoint.json");
  const auto ds = data::load_manifest(f.manifest);
  std::string sample;
  for (const auto& w : ds.windows) {
    if (*w.label == ckpt.unseen_classes.front()) {
      sample = w.id;
      break;
    }
  }
  REQUIRE(!sample.empty());
  const auto r = invoke({"explain", "--checkpoint", (f.run / "checkpoint.json").string(),
                         "--manifest", f.manifest.string(), "--sample", sample, "--out",
                         dir.path().string()});
  REQUIRE_MESSAGE(r.code == cli::kExitOk, r.err);

  std::size_t svgs = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir / "frames")) {
    CHECK(e.path().extension() == ".svg");
    CHECK(read_file(e.path()).rfind("<svg", 0) == 0);
    ++svgs;
  }
  CHECK(svgs == ckpt.params.arch.frames);
  CHECK(std::filesystem::exists(dir / "frames/frame_000.svg"));

  const auto doc = read_json(dir / "explanation.json");
  CHECK(doc.at("sample_id") == sample);
  CHECK(doc.at("seed") == 3);
  const std::string predicted = doc.at("predicted_class");
  const auto generated = data::read_skeleton_csv(dir / "generated.csv", 12, 2, predicted);
  CHECK(generated.frames == ckpt.params.arch.frames);
  const auto decoded_again = data::read_skeleton_csv(dir / "generated.csv", 12, 2, predicted);
  CHECK(generated.coords == decoded_again.coords);
  data::write_skeleton_csv(dir / "again.csv", generated);
  CHECK(read_file(dir / "again.csv") == read_file(dir / "generated.csv"));

  const auto missing = invoke({"explain", "--checkpoint", (f.run / "checkpoint.json").string(),
                               "--manifest", f.manifest.string(), "--sample", "no_such_id",
                               "--out", (dir / "x").string()});
  CHECK(missing.code == cli::kExitUsage);
  CHECK(missing.err.find("no_such_id") != std::string::npos);
}

TEST_CASE("svg frames map joint coordinates onto the 200 px canvas") {
  data::SkeletonSequence s(1, 12, 2, "c");
  s.at(0, 0, 0) = 0.5;
  s.at(0, 0, 1) = -0.5;
  const auto svg = cli::render_svg_frame(s, 0);
  CHECK(svg.find("cx=\"145\" cy=\"145\"") != std::string::npos);
  CHECK(svg.find("cx=\"100\" cy=\"100\"") != std::string::npos);
  std::size_t lines = 0;
  for (std::size_t pos = 0; (pos = svg.find("<line", pos)) != std::string::npos; ++pos) ++lines;
  CHECK(lines == cli::kBones.size());
  CHECK_THROWS_AS(cli::render_svg_frame(s, 1), DimensionError);
}
