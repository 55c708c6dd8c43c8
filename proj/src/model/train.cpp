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

#include "zshar/model/train.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "zshar/data/ops.hpp"
#include "zshar/data/split.hpp"
#include "zshar/error.hpp"
#include "zshar/metrics/metrics.hpp"
#include "zshar/model/network.hpp"
#include "zshar/nn/adam.hpp"

namespace zshar::model {

using nn::Tensor2;

nlohmann::json to_json(const EpochLog& e) {
  nlohmann::json j = {
      {"epoch", e.epoch},
      {"loss_matching", e.matching},
      {"loss_classification", e.classification},
      {"loss_reconstruction", e.reconstruction},
      {"loss_total", e.total},
  };
  j["validation_accuracy"] =
      e.validation_accuracy ? nlohmann::json(*e.validation_accuracy) : nlohmann::json(nullptr);
  return j;
}

namespace {

struct SeenClasses {
  std::vector<std::string> names;
  std::map<std::string, std::size_t> index;
  Tensor2 vectors;
  Tensor2 units;
  std::vector<std::vector<data::SkeletonSequence>> skeletons;  // resampled to T, per class
};

SeenClasses prepare_classes(const data::Dataset& ds, const data::FoldSpec& fold,
                            const TrainConfig& config) {
  SeenClasses seen;
  seen.names = fold.seen;
  std::sort(seen.names.begin(), seen.names.end());
  if (seen.names.empty()) throw DataError("train: fold " + std::to_string(fold.index) + " has no seen classes");
  const std::size_t e = ds.semantics.embedding_dim;
  seen.vectors = Tensor2(seen.names.size(), e);
  seen.skeletons.resize(seen.names.size());
  for (std::size_t k = 0; k < seen.names.size(); ++k) {
    const std::string& name = seen.names[k];
    if (!ds.superclasses.contains(name)) {
      throw DataError("train: seen class '" + name + "' is not in the dataset");
    }
    const std::vector<double>& v = ds.semantics.at(name);
    std::copy(v.begin(), v.end(), seen.vectors.row(k).begin());
    seen.index[name] = k;
  }
  for (const data::SkeletonSequence& s : ds.skeletons) {
    const auto it = seen.index.find(s.class_name);
    if (it == seen.index.end()) continue;
    if (s.joints != config.joints || s.dims != config.dims) {
      throw ConfigError("train: skeletons have " + std::to_string(s.joints) + " joints x " +
                        std::to_string(s.dims) + " dims but the config asks for " +
                        std::to_string(config.joints) + " x " + std::to_string(config.dims));
    }
    seen.skeletons[it->second].push_back(data::resample_skeleton(s, config.frames));
  }
  for (std::size_t k = 0; k < seen.names.size(); ++k) {
    if (seen.skeletons[k].empty()) {
      throw DataError("train: seen class '" + seen.names[k] + "' has no skeleton sequence");
    }
  }
  seen.units = unit_rows(seen.vectors, seen.names);
  return seen;
}

/// Seen-class predictions for `windows` in eval mode, batched.
std::vector<std::size_t> classify_seen(std::span<const data::ImuWindow* const> windows,
                                       const ModelParams& params, const Tensor2& units) {
  constexpr std::size_t kChunk = 64;
  std::vector<std::size_t> out;
  nn::Rng unused(0);
  for (std::size_t begin = 0; begin < windows.size(); begin += kChunk) {
    const auto chunk = windows.subspan(begin, std::min(kChunk, windows.size() - begin));
    const auto steps = stack_windows(chunk, params.normalization);
    const EncoderOutput enc = encode_batch(steps, params, nn::Mode::kEval, unused);
    const Tensor2 scores = score_matrix(enc.features, units, params.arch.normalize_features);
    for (std::size_t b = 0; b < scores.rows(); ++b) {
      const auto row = scores.row(b);
      out.push_back(static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin()));
    }
  }
  return out;
}

}  // namespace

TrainingResult train(const data::Dataset& ds, const data::FoldSpec& fold, const TrainConfig& config,
                     const EpochCallback& on_epoch) {
  config.validate();
  const SeenClasses seen = prepare_classes(ds, fold, config);

  std::vector<const data::ImuWindow*> windows;
  std::vector<std::string> labels;
  for (const data::ImuWindow& w : ds.windows) {
    if (w.label && seen.index.contains(*w.label)) {
      windows.push_back(&w);
      labels.push_back(*w.label);
    }
  }
  if (windows.empty()) throw DataError("train: no IMU windows belong to the seen classes");
  const data::TrainValSplit split = data::train_val_split(
      labels, seen.names, config.train_fraction, nn::derive_seed(config.seed, 1));

  std::vector<const data::ImuWindow*> train_windows;
  for (std::size_t i : split.train) train_windows.push_back(windows[i]);
  std::vector<const data::ImuWindow*> val_windows;
  std::vector<std::string> val_labels;
  for (std::size_t i : split.validation) {
    val_windows.push_back(windows[i]);
    val_labels.push_back(labels[i]);
  }

  const Architecture arch = Architecture::from_config(config, windows.front()->features(),
                                                      ds.semantics.embedding_dim);
  nn::Rng init_rng(nn::derive_seed(config.seed, 2));
  ModelParams params = ModelParams::random(arch, init_rng);
  params.normalization = FeatureNormalization::fit(train_windows);
  ModelParams grads = params.zeros_like();
  const auto param_refs = nn::collect_tensors(params);
  const auto grad_refs = nn::collect_tensors(grads);
  nn::AdamConfig adam_config;
  adam_config.learning_rate = config.learning_rate;
  nn::AdamState adam = nn::make_adam_state(param_refs, adam_config);

  nn::Rng order_rng(nn::derive_seed(config.seed, 3));
  nn::Rng dropout_rng(nn::derive_seed(config.seed, 4));
  const LossWeights weights{config.lambda, config.alpha};
  const std::size_t target_width = arch.frames * arch.frame_width();

  TrainingResult result;
  result.seen_classes = seen.names;
  result.train_samples = train_windows.size();
  result.validation_samples = val_windows.size();
  double best_accuracy = -1.0;

  std::vector<std::size_t> order(train_windows.size());
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    order_rng.shuffle(order);
    // One skeleton target per sample per epoch.
    std::vector<const data::SkeletonSequence*> targets(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      const auto& pool = seen.skeletons[seen.index.at(*train_windows[order[i]]->label)];
      targets[i] = &pool[order_rng.index(pool.size())];
    }

    EpochLog entry;
    entry.epoch = epoch;
    std::size_t batch_number = 0;
    for (std::size_t begin = 0; begin < order.size(); begin += config.batch_size) {
      ++batch_number;
      const std::size_t count = std::min(config.batch_size, order.size() - begin);
      std::vector<const data::ImuWindow*> batch(count);
      BatchInputs in;
      in.skeletons = Tensor2(count, target_width);
      for (std::size_t b = 0; b < count; ++b) {
        batch[b] = train_windows[order[begin + b]];
        in.labels.push_back(seen.index.at(*batch[b]->label));
        std::copy(targets[begin + b]->coords.begin(), targets[begin + b]->coords.end(),
                  in.skeletons.row(b).begin());
      }
      in.steps = stack_windows(batch, params.normalization);
      in.class_vectors = seen.vectors;
      in.class_units = seen.units;

      nn::zero_tensors(grad_refs);
      const LossBreakdown loss = batch_loss(in, params, weights, nn::Mode::kTrain, dropout_rng, &grads);
      if (!std::isfinite(loss.total)) {
        throw NumericError("train: non-finite loss at epoch " + std::to_string(epoch) + ", batch " +
                           std::to_string(batch_number));
      }
      if (config.clip_norm > 0.0) nn::clip_global_norm(grad_refs, config.clip_norm);
      try {
        nn::adam_step(param_refs, grad_refs, adam);
      } catch (const NumericError& e) {
        throw NumericError("train: epoch " + std::to_string(epoch) + ", batch " +
                           std::to_string(batch_number) + ": " + e.what());
      }
      const double w = static_cast<double>(count);
      entry.matching += w * loss.matching;
      entry.classification += w * loss.classification;
      entry.reconstruction += w * loss.reconstruction;
      entry.total += w * loss.total;
    }
    const double n = static_cast<double>(order.size());
    entry.matching /= n;
    entry.classification /= n;
    entry.reconstruction /= n;
    entry.total /= n;

    if (!val_windows.empty()) {
      const std::vector<std::size_t> predicted = classify_seen(val_windows, params, seen.units);
      std::vector<std::pair<std::string, std::string>> pairs;
      for (std::size_t i = 0; i < predicted.size(); ++i) {
        pairs.emplace_back(val_labels[i], seen.names[predicted[i]]);
      }
      entry.validation_accuracy = metrics::avg_accuracy_per_class(pairs).average_per_class;
    }
    const double score = entry.validation_accuracy.value_or(0.0);
    if (score >= best_accuracy) {
      best_accuracy = score;
      result.best_epoch = epoch;
      result.params = params;
    }
    result.log.push_back(entry);
    if (on_epoch) on_epoch(entry);
  }
  return result;
}

}  // namespace zshar::model
