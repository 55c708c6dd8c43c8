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

#include "zshar/model/config.hpp"

#include <cmath>
#include <set>

#include "zshar/error.hpp"

namespace zshar::model {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError("config: " + message);
}

template <typename T>
T get_value(const nlohmann::json& doc, const std::string& key) {
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("config: field '" + key + "' has the wrong type");
  }
}

std::size_t get_count(const nlohmann::json& doc, const std::string& key) {
  const auto& v = doc.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError("config: field '" + key + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

}  // namespace

void TrainConfig::validate() const {
  require(std::isfinite(lambda) && lambda >= 0.0, "lambda must be >= 0");
  require(std::isfinite(alpha) && alpha >= 0.0, "alpha must be >= 0");
  require(std::isfinite(learning_rate) && learning_rate > 0.0, "learning_rate must be > 0");
  require(epochs >= 1, "epochs must be >= 1");
  require(batch_size >= 1, "batch_size must be >= 1");
  require(hidden >= 1, "hidden must be >= 1");
  require(stacks >= 1, "stacks must be >= 1");
  require(dropout >= 0.0 && dropout < 1.0, "dropout must lie in [0, 1)");
  require(frames >= 2, "frames must be >= 2");
  require(joints >= 1 && dims >= 1, "joints and dims must be >= 1");
  require(decoder_hidden >= 1, "decoder_hidden must be >= 1");
  require(std::isfinite(clip_norm) && clip_norm >= 0.0, "clip_norm must be >= 0");
  require(train_fraction > 0.0 && train_fraction < 1.0, "train_fraction must lie in (0, 1)");
}

std::string pooling_name(nn::Pooling pooling) {
  return pooling == nn::Pooling::kLastConcat ? "last" : "mean";
}

nn::Pooling parse_pooling(const std::string& name) {
  if (name == "last") return nn::Pooling::kLastConcat;
  if (name == "mean") return nn::Pooling::kMeanPool;
  throw ConfigError("config: pooling must be 'last' or 'mean', got '" + name + "'");
}

nlohmann::json to_json(const TrainConfig& c) {
  return {
      {"lambda", c.lambda},
      {"alpha", c.alpha},
      {"learning_rate", c.learning_rate},
      {"epochs", c.epochs},
      {"batch_size", c.batch_size},
      {"hidden", c.hidden},
      {"stacks", c.stacks},
      {"dropout", c.dropout},
      {"seed", c.seed},
      {"frames", c.frames},
      {"joints", c.joints},
      {"dims", c.dims},
      {"decoder_hidden", c.decoder_hidden},
      {"pooling", pooling_name(c.pooling)},
      {"normalize_features", c.normalize_features},
      {"clip_norm", c.clip_norm},
      {"train_fraction", c.train_fraction},
  };
}

TrainConfig config_from_json(const nlohmann::json& doc, const TrainConfig& base) {
  if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
  static const std::set<std::string> known = {
      "lambda", "alpha",  "learning_rate", "epochs", "batch_size",     "hidden",
      "stacks", "dropout", "seed",         "frames", "joints",         "dims",
      "decoder_hidden", "pooling", "normalize_features", "clip_norm", "train_fraction"};
  for (const auto& [key, _] : doc.items()) {
    if (!known.contains(key)) throw ConfigError("config: unknown field '" + key + "'");
  }
  TrainConfig c = base;
  const auto real = [&](const char* key, double& out) {
    if (doc.contains(key)) {
      if (!doc.at(key).is_number()) throw ConfigError(std::string("config: field '") + key + "' must be a number");
      out = doc.at(key).get<double>();
    }
  };
  const auto count = [&](const char* key, std::size_t& out) {
    if (doc.contains(key)) out = get_count(doc, key);
  };
  real("lambda", c.lambda);
  real("alpha", c.alpha);
  real("learning_rate", c.learning_rate);
  count("epochs", c.epochs);
  count("batch_size", c.batch_size);
  count("hidden", c.hidden);
  count("stacks", c.stacks);
  real("dropout", c.dropout);
  if (doc.contains("seed")) c.seed = get_count(doc, "seed");
  count("frames", c.frames);
  count("joints", c.joints);
  count("dims", c.dims);
  count("decoder_hidden", c.decoder_hidden);
  if (doc.contains("pooling")) c.pooling = parse_pooling(get_value<std::string>(doc, "pooling"));
  if (doc.contains("normalize_features")) {
    c.normalize_features = get_value<bool>(doc, "normalize_features");
  }
  real("clip_norm", c.clip_norm);
  real("train_fraction", c.train_fraction);
  c.validate();
  return c;
}

}  // namespace zshar::model
