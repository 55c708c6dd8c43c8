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

#include "zshar/cli/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "zshar/data/io.hpp"
#include "zshar/data/ops.hpp"
#include "zshar/data/split.hpp"
#include "zshar/data/synth.hpp"
#include "zshar/error.hpp"
#include "zshar/metrics/metrics.hpp"
#include "zshar/metrics/report.hpp"
#include "zshar/model/checkpoint.hpp"
#include "zshar/model/config.hpp"
#include "zshar/model/inference.hpp"
#include "zshar/model/train.hpp"

namespace zshar::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

json read_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  try {
    json doc = json::parse(in);
    if (!doc.is_object()) throw ConfigError("config file " + path.string() + " is not an object");
    return doc;
  } catch (const json::exception& e) {
    throw ConfigError("config file " + path.string() + ": " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
  if (!out) throw ConfigError("write failed for " + path.string());
}

void write_json(const fs::path& path, const json& doc) { write_text(path, doc.dump(2) + "\n"); }

// ---------------------------------------------------------------------------
// synth

json synth_to_json(const data::SynthConfig& c) {
  return json{{"classes", c.classes},
              {"superclasses", c.superclasses},
              {"samples_per_class", c.samples_per_class},
              {"steps", c.steps},
              {"features", c.features},
              {"frames", c.frames},
              {"embedding_dim", c.embedding_dim},
              {"videos_per_class", c.videos_per_class},
              {"latent_dim", c.latent_dim},
              {"folds", c.folds},
              {"seed", c.seed}};
}

data::SynthConfig synth_from_json(const json& doc, data::SynthConfig c) {
  const std::map<std::string, std::uint64_t*> wide = {{"seed", &c.seed}};
  const std::map<std::string, std::size_t*> sizes = {
      {"classes", &c.classes},         {"superclasses", &c.superclasses},
      {"samples_per_class", &c.samples_per_class}, {"steps", &c.steps},
      {"features", &c.features},       {"frames", &c.frames},
      {"embedding_dim", &c.embedding_dim}, {"videos_per_class", &c.videos_per_class},
      {"latent_dim", &c.latent_dim},   {"folds", &c.folds}};
  for (const auto& [key, value] : doc.items()) {
    if (!value.is_number_unsigned()) {
      throw ConfigError("synth config key '" + key + "' must be a non-negative integer");
    }
    if (auto it = sizes.find(key); it != sizes.end()) {
      *it->second = value.get<std::size_t>();
    } else if (auto jt = wide.find(key); jt != wide.end()) {
      *jt->second = value.get<std::uint64_t>();
    } else {
      throw ConfigError("unknown synth config key '" + key + "'");
    }
  }
  c.validate();
  return c;
}

struct SynthOptions {
  data::SynthConfig config;
  std::string config_path;
  std::string out = "synth_data";
};

int cmd_synth(const SynthOptions& opt, std::ostream& out) {
  data::SynthConfig config = opt.config;
  if (!opt.config_path.empty()) config = synth_from_json(read_config_file(opt.config_path), config);
  config.validate();
  const fs::path manifest = data::synth_generate(config, opt.out);
  write_json(fs::path(opt.out) / "synth_config.json", synth_to_json(config));
  out << "synth: wrote " << manifest.string() << " (" << config.classes << " classes, "
      << config.classes * config.samples_per_class << " windows, seed " << config.seed << ")\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// split

struct SplitOptions {
  std::string manifest;
  std::optional<std::size_t> folds;
  std::size_t unseen = 3;
  std::uint64_t seed = 1;
  std::string config_path;
  std::string out = ".";
};

int cmd_split(SplitOptions opt, std::ostream& out) {
  if (!opt.config_path.empty()) {
    for (const auto& [key, value] : read_config_file(opt.config_path).items()) {
      if (!value.is_number_unsigned()) {
        throw ConfigError("split config key '" + key + "' must be a non-negative integer");
      }
      if (key == "folds") opt.folds = value.get<std::size_t>();
      else if (key == "unseen_per_fold") opt.unseen = value.get<std::size_t>();
      else if (key == "seed") opt.seed = value.get<std::uint64_t>();
      else throw ConfigError("unknown split config key '" + key + "'");
    }
  }
  const data::DatasetManifest manifest = data::read_manifest_json(opt.manifest);
  const data::SuperClassMap map = data::read_superclass_json(manifest.superclass_path);
  std::vector<std::string> classes;
  for (const auto& [name, group] : map) classes.push_back(name);

  data::FoldsFile file;
  file.seed = opt.seed;
  file.unseen_per_fold = opt.unseen;
  file.folds = data::kfold_split(classes, map, opt.folds.value_or(manifest.folds), opt.unseen,
                                 opt.seed);
  const fs::path path = fs::path(opt.out) / "folds.json";
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  data::write_folds_json(path, file);
  out << "split: wrote " << file.folds.size() << " folds to " << path.string() << "\n";
  for (const auto& fold : file.folds) {
    out << "  fold " << fold.index << " unseen:";
    for (const auto& c : fold.unseen) out << ' ' << c;
    out << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// train

struct TrainOptions {
  std::string manifest;
  std::string folds_file;
  std::string fold = "0";
  std::string config_path;
  std::string out = "run";
  std::optional<std::uint64_t> seed;
  std::optional<double> lambda, alpha, lr, dropout, clip_norm, train_fraction;
  std::optional<std::size_t> epochs, batch_size, hidden, stacks, frames, decoder_hidden;
  std::optional<std::string> pooling;
  bool normalize_features = false;
};

model::TrainConfig resolve_train_config(const TrainOptions& opt,
                                        const data::DatasetManifest& manifest) {
  model::TrainConfig c;
  c.joints = manifest.joints;
  c.dims = manifest.dims;
  c.frames = manifest.frames;
  if (opt.seed) c.seed = *opt.seed;
  if (opt.lambda) c.lambda = *opt.lambda;
  if (opt.alpha) c.alpha = *opt.alpha;
  if (opt.lr) c.learning_rate = *opt.lr;
  if (opt.dropout) c.dropout = *opt.dropout;
  if (opt.clip_norm) c.clip_norm = *opt.clip_norm;
  if (opt.train_fraction) c.train_fraction = *opt.train_fraction;
  if (opt.epochs) c.epochs = *opt.epochs;
  if (opt.batch_size) c.batch_size = *opt.batch_size;
  if (opt.hidden) c.hidden = *opt.hidden;
  if (opt.stacks) c.stacks = *opt.stacks;
  if (opt.frames) c.frames = *opt.frames;
  if (opt.decoder_hidden) c.decoder_hidden = *opt.decoder_hidden;
  if (opt.pooling) c.pooling = model::parse_pooling(*opt.pooling);
  if (opt.normalize_features) c.normalize_features = true;
  if (!opt.config_path.empty()) c = model::config_from_json(read_config_file(opt.config_path), c);
  c.validate();
  return c;
}

std::vector<data::FoldSpec> load_folds(const std::string& folds_file, const data::Dataset& ds,
                                       std::uint64_t seed) {
  if (!folds_file.empty()) return data::read_folds_json(folds_file).folds;
  const auto classes = ds.classes();
  return data::kfold_split(classes, ds.superclasses, ds.manifest.folds, 3, seed);
}

std::vector<std::size_t> select_folds(const std::string& which, std::size_t count) {
  std::vector<std::size_t> picked;
  if (which == "all") {
    for (std::size_t k = 0; k < count; ++k) picked.push_back(k);
    return picked;
  }
  std::size_t pos = 0;
  unsigned long long index = 0;
  try {
    index = std::stoull(which, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != which.size() || which.front() == '-') {
    throw ConfigError("--fold must be a fold index or 'all', got '" + which + "'");
  }
  if (index >= count) {
    throw ConfigError("--fold " + which + " is out of range (" + std::to_string(count) +
                      " folds)");
  }
  picked.push_back(static_cast<std::size_t>(index));
  return picked;
}

int cmd_train(const TrainOptions& opt, std::ostream& out) {
  const data::Dataset ds = data::load_manifest(opt.manifest);
  const model::TrainConfig config = resolve_train_config(opt, ds.manifest);
  const auto folds = load_folds(opt.folds_file, ds, config.seed);
  const auto picked = select_folds(opt.fold, folds.size());

  for (const std::size_t k : picked) {
    const data::FoldSpec& fold = folds[k];
    const fs::path dir = picked.size() == 1 ? fs::path(opt.out)
                                            : fs::path(opt.out) / ("fold_" + std::to_string(k));
    fs::create_directories(dir);
    out << "train: fold " << k << " (" << fold.seen.size() << " seen, " << fold.unseen.size()
        << " unseen), seed " << config.seed << "\n";

    std::ostringstream log_lines;
    const auto result = model::train(ds, fold, config, [&](const model::EpochLog& e) {
      log_lines << model::to_json(e).dump() << "\n";
      out << "  epoch " << e.epoch << "  L " << data::format_double(e.total)
          << "  L_M " << data::format_double(e.matching)
          << "  L_C " << data::format_double(e.classification)
          << "  L_R " << data::format_double(e.reconstruction);
      if (e.validation_accuracy) out << "  val " << data::format_double(*e.validation_accuracy);
      out << "\n";
    });
    write_text(dir / "train_log.jsonl", log_lines.str());

    model::Checkpoint ckpt;
    ckpt.params = result.params;
    ckpt.config = config;
    ckpt.dataset = ds.manifest.name;
    ckpt.fold = k;
    ckpt.seen_classes = result.seen_classes;
    ckpt.unseen_classes = fold.unseen;
    std::sort(ckpt.unseen_classes.begin(), ckpt.unseen_classes.end());
    ckpt.best_epoch = result.best_epoch;
    model::save_checkpoint(dir / "checkpoint.json", ckpt);

    json summary = {{"command", "train"},
                    {"dataset", ds.manifest.name},
                    {"fold", k},
                    {"seed", config.seed},
                    {"config", model::to_json(config)},
                    {"seen_classes", ckpt.seen_classes},
                    {"unseen_classes", ckpt.unseen_classes},
                    {"train_samples", result.train_samples},
                    {"validation_samples", result.validation_samples},
                    {"parameter_count", result.params.parameter_count()},
                    {"best_epoch", result.best_epoch},
                    {"epochs", json::array()}};
    for (const auto& e : result.log) summary["epochs"].push_back(model::to_json(e));
    write_json(dir / "train_summary.json", summary);
    out << "  best epoch " << result.best_epoch << ", checkpoint " << (dir / "checkpoint.json").string()
        << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// eval and explain

// Windows labelled with one of the checkpoint's unseen classes, in file order.
std::vector<const data::ImuWindow*> unseen_windows(const data::Dataset& ds,
                                                   const std::vector<std::string>& unseen) {
  const std::set<std::string> wanted(unseen.begin(), unseen.end());
  std::vector<const data::ImuWindow*> picked;
  for (const auto& w : ds.windows) {
    if (w.label && wanted.count(*w.label)) picked.push_back(&w);
  }
  return picked;
}

std::vector<data::SkeletonSequence> seen_references(const data::Dataset& ds,
                                                    const std::vector<std::string>& seen) {
  const std::set<std::string> wanted(seen.begin(), seen.end());
  std::vector<data::SkeletonSequence> refs;
  for (const auto& s : ds.skeletons) {
    if (wanted.count(s.class_name)) refs.push_back(s);
  }
  if (refs.empty()) throw DataError("no reference skeletons for the checkpoint's seen classes");
  return refs;
}

void check_compatible(const model::Checkpoint& ckpt, const data::Dataset& ds) {
  const auto& arch = ckpt.params.arch;
  if (arch.features != ds.manifest.features) {
    throw DataError("checkpoint expects " + std::to_string(arch.features) +
                    " IMU features, dataset has " + std::to_string(ds.manifest.features));
  }
  if (arch.embedding_dim != ds.semantics.embedding_dim) {
    throw DataError("checkpoint expects embedding dimension " +
                    std::to_string(arch.embedding_dim) + ", dataset has " +
                    std::to_string(ds.semantics.embedding_dim));
  }
  if (arch.joints != ds.manifest.joints || arch.dims != ds.manifest.dims) {
    throw DataError("checkpoint skeleton geometry does not match the dataset");
  }
  for (const auto& c : ckpt.unseen_classes) {
    if (!ds.semantics.contains(c)) throw DataError("unseen class '" + c + "' has no semantics");
  }
}

metrics::EvalReport evaluate(const model::Checkpoint& ckpt, const data::Dataset& ds,
                             std::optional<std::uint64_t> seed) {
  check_compatible(ckpt, ds);
  const auto windows = unseen_windows(ds, ckpt.unseen_classes);
  if (windows.empty()) throw DataError("no IMU samples belong to the unseen classes");
  const auto refs = seen_references(ds, ckpt.seen_classes);
  const auto cost = metrics::estimate_cost_model(refs);
  const auto unseen = ds.semantics.subset(ckpt.unseen_classes);
  auto predictions = model::predict_unseen_batch(windows, ckpt.params, unseen);

  metrics::EvalReport report;
  report.dataset = ds.manifest.name;
  report.fold = ckpt.fold;
  report.seed = seed.value_or(ckpt.config.seed);
  report.unseen_classes = ckpt.unseen_classes;
  report.cost_epsilon = cost.epsilon();

  std::vector<std::pair<std::string, std::string>> pairs;
  std::vector<metrics::AlignmentRecord> records;
  std::vector<double> realism;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    pairs.emplace_back(*windows[i]->label, predictions[i].predicted_class);
    auto e = model::explain_prediction(std::move(predictions[i]), ckpt.params, refs, cost);
    records.push_back({windows[i]->id, *windows[i]->label, e.prediction.predicted_class,
                       e.matching_seen_class, e.dtw_to_match});
    realism.push_back(metrics::dfd(e.generated, refs[e.reference_index]));
  }
  report.accuracy = metrics::avg_accuracy_per_class(pairs);
  report.alignment = metrics::alignment_metrics(std::move(records), ds.superclasses);
  report.realism = metrics::realism_from_values(std::move(realism));
  if (!report.all_finite()) throw NumericError("eval: report contains non-finite values");
  return report;
}

struct EvalOptions {
  std::vector<std::string> checkpoints;
  std::string manifest;
  std::optional<std::uint64_t> seed;
  std::string out = "eval";
};

json mean_summary(std::span<const metrics::EvalReport> reports) {
  auto mean_of = [&](auto get) -> json {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& r : reports) {
      if (const std::optional<double> v = get(r)) {
        sum += *v;
        ++n;
      }
    }
    return n == 0 ? json(nullptr) : json(sum / static_cast<double>(n));
  };
  using R = metrics::EvalReport;
  return json{
      {"accuracy", mean_of([](const R& r) { return std::optional(r.accuracy.average_per_class); })},
      {"tsa", mean_of([](const R& r) { return r.alignment.tsa; })},
      {"psa", mean_of([](const R& r) { return r.alignment.psa; })},
      {"oa", mean_of([](const R& r) { return r.alignment.oa; })},
      {"add", mean_of([](const R& r) { return std::optional(r.alignment.add); })},
      {"dfd_mean", mean_of([](const R& r) { return std::optional(r.realism.dfd_mean); })},
      {"dfd_std", mean_of([](const R& r) { return std::optional(r.realism.dfd_std); })}};
}

int cmd_eval(const EvalOptions& opt, std::ostream& out) {
  const data::Dataset ds = data::load_manifest(opt.manifest);
  std::vector<metrics::EvalReport> reports;
  for (const auto& path : opt.checkpoints) {
    const auto ckpt = model::load_checkpoint(path);
    reports.push_back(evaluate(ckpt, ds, opt.seed));
    const auto& r = reports.back();
    out << "eval: " << path << "  accuracy " << data::format_double(r.accuracy.average_per_class)
        << "  OA " << (r.alignment.oa ? data::format_double(*r.alignment.oa) : "n/a") << "\n";
  }
  json doc = {{"command", "eval"}, {"reports", json::array()}, {"mean", mean_summary(reports)}};
  for (const auto& r : reports) doc["reports"].push_back(metrics::to_json(r));
  fs::create_directories(opt.out);
  write_json(fs::path(opt.out) / "report.json", doc);
  const std::string tables = metrics::render_tables(reports);
  write_text(fs::path(opt.out) / "report.txt", tables);
  out << tables;
  return kExitOk;
}

struct ExplainOptions {
  std::string checkpoint;
  std::string manifest;
  std::string sample;
  std::optional<std::uint64_t> seed;
  std::string out = "explain";
};

int cmd_explain(const ExplainOptions& opt, std::ostream& out) {
  const data::Dataset ds = data::load_manifest(opt.manifest);
  const auto ckpt = model::load_checkpoint(opt.checkpoint);
  check_compatible(ckpt, ds);
  const data::ImuWindow& window = ds.window(opt.sample);
  const auto refs = seen_references(ds, ckpt.seen_classes);
  const auto cost = metrics::estimate_cost_model(refs);
  const auto unseen = ds.semantics.subset(ckpt.unseen_classes);
  const auto e = model::explain(window, ckpt.params, unseen, refs, cost);
  const double realism = metrics::dfd(e.generated, refs[e.reference_index]);

  const fs::path dir(opt.out);
  fs::create_directories(dir / "frames");
  data::write_skeleton_csv(dir / "generated.csv", e.generated);
  for (std::size_t t = 0; t < e.generated.frames; ++t) {
    char name[32];
    std::snprintf(name, sizeof(name), "frame_%03zu.svg", t);
    write_text(dir / "frames" / name, render_svg_frame(e.generated, t));
  }

  const auto group_of = [&](const std::string& c) -> json {
    const auto it = ds.superclasses.find(c);
    return it == ds.superclasses.end() ? json(nullptr) : json(it->second);
  };
  json doc = {{"command", "explain"},
              {"dataset", ds.manifest.name},
              {"fold", ckpt.fold ? json(*ckpt.fold) : json(nullptr)},
              {"seed", opt.seed.value_or(ckpt.config.seed)},
              {"sample_id", window.id},
              {"true_class", window.label ? json(*window.label) : json(nullptr)},
              {"predicted_class", e.prediction.predicted_class},
              {"predicted_superclass", group_of(e.prediction.predicted_class)},
              {"scores", e.prediction.scores},
              {"probabilities", e.prediction.probabilities},
              {"matching_seen_class", e.matching_seen_class},
              {"matching_superclass", group_of(e.matching_seen_class)},
              {"matching_reference_index", e.reference_index},
              {"dtw_distance", e.dtw_to_match},
              {"dfd", realism},
              {"cost_model_epsilon", cost.epsilon()},
              {"frames", e.generated.frames},
              {"generated_csv", "generated.csv"}};
  write_json(dir / "explanation.json", doc);
  out << "explain: " << window.id << " predicted " << e.prediction.predicted_class
      << ", closest seen class " << e.matching_seen_class << " (DTW "
      << data::format_double(e.dtw_to_match) << ")\n";
  return kExitOk;
}

}  // namespace

std::string render_svg_frame(const data::SkeletonSequence& sequence, std::size_t t) {
  if (sequence.dims != 2) throw DimensionError("SVG rendering needs 2-D joints");
  if (t >= sequence.frames) throw DimensionError("SVG frame index out of range");
  const auto px = [&](std::size_t j) { return 100.0 + 90.0 * sequence.at(t, j, 0); };
  const auto py = [&](std::size_t j) { return 100.0 - 90.0 * sequence.at(t, j, 1); };
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"200\" height=\"200\" "
         "viewBox=\"0 0 200 200\">\n"
      << "<rect width=\"200\" height=\"200\" fill=\"white\"/>\n";
  for (const auto& [a, b] : kBones) {
    if (a >= sequence.joints || b >= sequence.joints) continue;
    svg << "<line x1=\"" << data::format_double(px(a)) << "\" y1=\"" << data::format_double(py(a))
        << "\" x2=\"" << data::format_double(px(b)) << "\" y2=\"" << data::format_double(py(b))
        << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
  }
  for (std::size_t j = 0; j < sequence.joints; ++j) {
    svg << "<circle cx=\"" << data::format_double(px(j)) << "\" cy=\""
        << data::format_double(py(j)) << "\" r=\"3\" fill=\"steelblue\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Zero-shot IMU activity recognition with skeleton explanations", "zshar"};
  app.require_subcommand(1);

  SynthOptions synth;
  auto* s = app.add_subcommand("synth", "Generate a synthetic dataset");
  s->add_option("--classes", synth.config.classes, "Number of activity classes");
  s->add_option("--superclasses", synth.config.superclasses, "Number of super-classes");
  s->add_option("--samples-per-class", synth.config.samples_per_class, "IMU windows per class");
  s->add_option("--steps", synth.config.steps, "Time steps per IMU window");
  s->add_option("--features", synth.config.features, "IMU channels");
  s->add_option("--frames", synth.config.frames, "Frames per reference skeleton");
  s->add_option("--embedding-dim", synth.config.embedding_dim, "Semantic vector length");
  s->add_option("--videos-per-class", synth.config.videos_per_class, "Skeletons per class");
  s->add_option("--latent-dim", synth.config.latent_dim, "Latent prototype size");
  s->add_option("--folds", synth.config.folds, "Folds declared in the manifest");
  s->add_option("--seed", synth.config.seed, "Generator seed");
  s->add_option("--config", synth.config_path, "JSON overrides")->check(CLI::ExistingFile);
  s->add_option("--out", synth.out, "Output directory");

  SplitOptions split;
  auto* p = app.add_subcommand("split", "Partition classes into seen/unseen folds");
  p->add_option("--manifest", split.manifest, "Dataset manifest")->required();
  p->add_option("--folds", split.folds, "Number of folds (default: manifest)");
  p->add_option("--unseen", split.unseen, "Unseen classes per fold");
  p->add_option("--seed", split.seed, "Split seed");
  p->add_option("--config", split.config_path, "JSON overrides")->check(CLI::ExistingFile);
  p->add_option("--out", split.out, "Output directory");

  TrainOptions tr;
  auto* t = app.add_subcommand("train", "Train on the seen classes of a fold");
  t->add_option("--manifest", tr.manifest, "Dataset manifest")->required();
  t->add_option("--folds-file", tr.folds_file, "folds.json from split");
  t->add_option("--fold", tr.fold, "Fold index or 'all'");
  t->add_option("--seed", tr.seed, "Training seed");
  t->add_option("--lambda", tr.lambda, "Classification loss weight");
  t->add_option("--alpha", tr.alpha, "Reconstruction loss weight");
  t->add_option("--lr", tr.lr, "Adam learning rate");
  t->add_option("--epochs", tr.epochs, "Training epochs");
  t->add_option("--batch-size", tr.batch_size, "Mini-batch size");
  t->add_option("--hidden", tr.hidden, "LSTM hidden size per direction");
  t->add_option("--stacks", tr.stacks, "Bi-LSTM layers");
  t->add_option("--dropout", tr.dropout, "Encoder dropout rate");
  t->add_option("--frames", tr.frames, "Generated skeleton length");
  t->add_option("--decoder-hidden", tr.decoder_hidden, "Decoder LSTM hidden size");
  t->add_option("--pooling", tr.pooling, "Sequence pooling: last or mean");
  t->add_flag("--normalize-features", tr.normalize_features, "Score with f / |f|");
  t->add_option("--clip-norm", tr.clip_norm, "Global gradient norm clip (0 disables)");
  t->add_option("--train-fraction", tr.train_fraction, "Per-class training fraction");
  t->add_option("--config", tr.config_path, "JSON overrides")->check(CLI::ExistingFile);
  t->add_option("--out", tr.out, "Output directory");

  EvalOptions ev;
  auto* e = app.add_subcommand("eval", "Score checkpoints on their unseen classes");
  e->add_option("--checkpoint", ev.checkpoints, "Checkpoint files")->required();
  e->add_option("--manifest", ev.manifest, "Dataset manifest")->required();
  e->add_option("--seed", ev.seed, "Seed recorded in the report (default: training seed)");
  e->add_option("--out", ev.out, "Output directory");

  ExplainOptions ex;
  auto* x = app.add_subcommand("explain", "Generate and render the explanation of one sample");
  x->add_option("--checkpoint", ex.checkpoint, "Checkpoint file")->required();
  x->add_option("--manifest", ex.manifest, "Dataset manifest")->required();
  x->add_option("--sample", ex.sample, "IMU window id")->required();
  x->add_option("--seed", ex.seed, "Seed recorded in the output (default: training seed)");
  x->add_option("--out", ex.out, "Output directory");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    if (s->parsed()) return cmd_synth(synth, out);
    if (p->parsed()) return cmd_split(split, out);
    if (t->parsed()) return cmd_train(tr, out);
    if (e->parsed()) return cmd_eval(ev, out);
    if (x->parsed()) return cmd_explain(ex, out);
    return kExitUsage;
  } catch (const CLI::ParseError& error) {
    const int code = app.exit(error, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const NumericError& error) {
    err << "error: " << error.what() << "\n";
    return kExitInternal;
  } catch (const ConfigError& error) {
    err << "error: " << error.what() << "\n";
    return kExitUsage;
  } catch (const DataError& error) {
    err << "error: " << error.what() << "\n";
    return kExitUsage;
  } catch (const DimensionError& error) {
    err << "error: " << error.what() << "\n";
    return kExitUsage;
  } catch (const SplitError& error) {
    err << "error: " << error.what() << "\n";
    return kExitUsage;
  } catch (const CheckpointError& error) {
    err << "error: " << error.what() << "\n";
    return kExitUsage;
  } catch (const fs::filesystem_error& error) {
    err << "error: " << error.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& error) {
    err << "internal error: " << error.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace zshar::cli
