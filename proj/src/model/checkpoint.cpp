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

#include "zshar/model/checkpoint.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "zshar/error.hpp"

namespace zshar::model {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "zshar-checkpoint";

json architecture_json(const Architecture& a) {
  return {
      {"features", a.features},
      {"hidden", a.hidden},
      {"stacks", a.stacks},
      {"embedding_dim", a.embedding_dim},
      {"decoder_hidden", a.decoder_hidden},
      {"frames", a.frames},
      {"joints", a.joints},
      {"dims", a.dims},
      {"dropout", a.dropout},
      {"pooling", pooling_name(a.pooling)},
      {"normalize_features", a.normalize_features},
  };
}

Architecture architecture_from_json(const json& j) {
  Architecture a;
  a.features = j.at("features").get<std::size_t>();
  a.hidden = j.at("hidden").get<std::size_t>();
  a.stacks = j.at("stacks").get<std::size_t>();
  a.embedding_dim = j.at("embedding_dim").get<std::size_t>();
  a.decoder_hidden = j.at("decoder_hidden").get<std::size_t>();
  a.frames = j.at("frames").get<std::size_t>();
  a.joints = j.at("joints").get<std::size_t>();
  a.dims = j.at("dims").get<std::size_t>();
  a.dropout = j.at("dropout").get<double>();
  a.pooling = parse_pooling(j.at("pooling").get<std::string>());
  a.normalize_features = j.at("normalize_features").get<bool>();
  return a;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& c) {
  json doc;
  doc["format"] = kFormat;
  doc["version"] = kCheckpointVersion;
  doc["dataset"] = c.dataset;
  doc["fold"] = c.fold ? json(*c.fold) : json(nullptr);
  doc["best_epoch"] = c.best_epoch;
  doc["seen_classes"] = c.seen_classes;
  doc["unseen_classes"] = c.unseen_classes;
  doc["config"] = to_json(c.config);
  doc["architecture"] = architecture_json(c.params.arch);
  doc["normalization"] = {{"mean", c.params.normalization.mean},
                          {"scale", c.params.normalization.scale}};
  json tensors = json::array();
  c.params.for_each([&](const std::string& name, const nn::Tensor2& t) {
    tensors.push_back({{"name", name}, {"rows", t.rows()}, {"cols", t.cols()}, {"values", t.storage()}});
  });
  doc["tensors"] = std::move(tensors);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw CheckpointError("checkpoint: cannot write " + path.string());
  out << doc.dump(1) << '\n';
  if (!out) throw CheckpointError("checkpoint: write failed for " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("checkpoint: cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buffer.str());
  } catch (const json::exception& e) {
    throw CheckpointError("checkpoint: " + path.string() + " is corrupt (" + e.what() + ")");
  }
  try {
    if (!doc.is_object() || doc.value("format", "") != kFormat) {
      throw CheckpointError("checkpoint: " + path.string() + " is not a zshar checkpoint");
    }
    const int version = doc.at("version").get<int>();
    if (version != kCheckpointVersion) {
      throw CheckpointError("checkpoint: " + path.string() + " has version " +
                            std::to_string(version) + ", this build reads version " +
                            std::to_string(kCheckpointVersion));
    }
    Checkpoint c;
    c.dataset = doc.at("dataset").get<std::string>();
    if (!doc.at("fold").is_null()) c.fold = doc.at("fold").get<std::size_t>();
    c.best_epoch = doc.at("best_epoch").get<std::size_t>();
    c.seen_classes = doc.at("seen_classes").get<std::vector<std::string>>();
    c.unseen_classes = doc.at("unseen_classes").get<std::vector<std::string>>();
    c.config = config_from_json(doc.at("config"));
    c.params = ModelParams::zeros(architecture_from_json(doc.at("architecture")));
    c.params.normalization.mean = doc.at("normalization").at("mean").get<std::vector<double>>();
    c.params.normalization.scale = doc.at("normalization").at("scale").get<std::vector<double>>();

    const json& tensors = doc.at("tensors");
    std::size_t i = 0;
    c.params.for_each([&](const std::string& name, nn::Tensor2& t) {
      if (i >= tensors.size()) throw CheckpointError("checkpoint: missing tensor '" + name + "'");
      const json& entry = tensors.at(i++);
      if (entry.at("name").get<std::string>() != name) {
        throw CheckpointError("checkpoint: expected tensor '" + name + "', found '" +
                              entry.at("name").get<std::string>() + "'");
      }
      const auto rows = entry.at("rows").get<std::size_t>();
      const auto cols = entry.at("cols").get<std::size_t>();
      auto values = entry.at("values").get<std::vector<double>>();
      if (rows != t.rows() || cols != t.cols() || values.size() != rows * cols) {
        throw CheckpointError("checkpoint: tensor '" + name + "' has a shape that does not match the architecture");
      }
      t = nn::Tensor2(rows, cols, std::move(values));
    });
    if (i != tensors.size()) throw CheckpointError("checkpoint: unexpected extra tensors");
    c.params.check_shapes();
    if (!c.params.all_finite()) throw CheckpointError("checkpoint: non-finite parameter values");
    return c;
  } catch (const CheckpointError&) {
    throw;
  } catch (const std::exception& e) {
    throw CheckpointError("checkpoint: " + path.string() + " is malformed (" + e.what() + ")");
  }
}

}  // namespace zshar::model
