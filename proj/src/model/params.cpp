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

#include "zshar/model/params.hpp"

#include <cmath>

#include "zshar/error.hpp"

namespace zshar::model {

using nn::Tensor2;

Architecture Architecture::from_config(const TrainConfig& config, std::size_t features,
                                       std::size_t embedding_dim) {
  Architecture a;
  a.features = features;
  a.hidden = config.hidden;
  a.stacks = config.stacks;
  a.embedding_dim = embedding_dim;
  a.decoder_hidden = config.decoder_hidden;
  a.frames = config.frames;
  a.joints = config.joints;
  a.dims = config.dims;
  a.dropout = config.dropout;
  a.pooling = config.pooling;
  a.normalize_features = config.normalize_features;
  return a;
}

FeatureNormalization FeatureNormalization::identity(std::size_t features) {
  return {std::vector<double>(features, 0.0), std::vector<double>(features, 1.0)};
}

FeatureNormalization FeatureNormalization::fit(std::span<const data::ImuWindow* const> windows) {
  if (windows.empty()) throw DataError("normalization: no training windows");
  const std::size_t d = windows.front()->features();
  std::vector<double> sum(d, 0.0);
  std::size_t count = 0;
  for (const data::ImuWindow* w : windows) {
    if (w->features() != d) {
      throw DimensionError("normalization: window '" + w->id + "' has " +
                           std::to_string(w->features()) + " features, expected " +
                           std::to_string(d));
    }
    for (std::size_t t = 0; t < w->steps(); ++t) {
      for (std::size_t j = 0; j < d; ++j) sum[j] += w->values(t, j);
    }
    count += w->steps();
  }
  if (count == 0) throw DataError("normalization: training windows hold no time steps");
  FeatureNormalization n;
  n.mean.resize(d);
  for (std::size_t j = 0; j < d; ++j) n.mean[j] = sum[j] / static_cast<double>(count);
  std::vector<double> sq(d, 0.0);
  for (const data::ImuWindow* w : windows) {
    for (std::size_t t = 0; t < w->steps(); ++t) {
      for (std::size_t j = 0; j < d; ++j) {
        const double c = w->values(t, j) - n.mean[j];
        sq[j] += c * c;
      }
    }
  }
  n.scale.resize(d);
  for (std::size_t j = 0; j < d; ++j) {
    const double sd = std::sqrt(sq[j] / static_cast<double>(count));
    n.scale[j] = sd < 1e-8 ? 1.0 : sd;
  }
  return n;
}

Tensor2 FeatureNormalization::apply(const Tensor2& values) const {
  if (values.cols() != mean.size()) {
    throw DimensionError("normalization: input has " + std::to_string(values.cols()) +
                         " features, model expects " + std::to_string(mean.size()));
  }
  Tensor2 out(values.rows(), values.cols());
  for (std::size_t t = 0; t < values.rows(); ++t) {
    for (std::size_t j = 0; j < values.cols(); ++j) {
      out(t, j) = (values(t, j) - mean[j]) / scale[j];
    }
  }
  return out;
}

namespace {

Tensor2 uniform_tensor(std::size_t rows, std::size_t cols, double bound, nn::Rng& rng) {
  Tensor2 t(rows, cols);
  for (double& v : t.values()) v = rng.uniform(-bound, bound);
  return t;
}

void check_arch(const Architecture& a) {
  if (a.features == 0 || a.hidden == 0 || a.stacks == 0 || a.embedding_dim == 0 ||
      a.decoder_hidden == 0 || a.frames == 0 || a.frame_width() == 0) {
    throw ConfigError("model: every architecture size must be positive");
  }
  if (!(a.dropout >= 0.0 && a.dropout < 1.0)) throw ConfigError("model: dropout must lie in [0, 1)");
}

}  // namespace

ModelParams ModelParams::zeros(const Architecture& a) {
  check_arch(a);
  ModelParams p;
  p.arch = a;
  p.normalization = FeatureNormalization::identity(a.features);
  p.encoder = nn::BiLstmParams::zeros(a.features, a.hidden, a.stacks);
  p.head_weight = Tensor2(2 * a.hidden, a.embedding_dim);
  p.head_bias = Tensor2(1, a.embedding_dim);
  const std::size_t s = a.frame_width();
  DecoderParams& d = p.decoder;
  d.init_h_weight = Tensor2(a.embedding_dim, a.decoder_hidden);
  d.init_h_bias = Tensor2(1, a.decoder_hidden);
  d.init_c_weight = Tensor2(a.embedding_dim, a.decoder_hidden);
  d.init_c_bias = Tensor2(1, a.decoder_hidden);
  d.start_token = Tensor2(1, s);
  d.cell = nn::LstmParams::zeros(s, a.decoder_hidden);
  d.out_weight = Tensor2(a.decoder_hidden, s);
  d.out_bias = Tensor2(1, s);
  return p;
}

ModelParams ModelParams::random(const Architecture& a, nn::Rng& rng) {
  ModelParams p = zeros(a);
  p.encoder = nn::BiLstmParams::random(a.features, a.hidden, a.stacks, rng);
  const auto fan = [](std::size_t n) { return 1.0 / std::sqrt(static_cast<double>(n)); };
  p.head_weight = uniform_tensor(2 * a.hidden, a.embedding_dim, fan(2 * a.hidden), rng);
  const std::size_t s = a.frame_width();
  DecoderParams& d = p.decoder;
  d.init_h_weight = uniform_tensor(a.embedding_dim, a.decoder_hidden, fan(a.embedding_dim), rng);
  d.init_c_weight = uniform_tensor(a.embedding_dim, a.decoder_hidden, fan(a.embedding_dim), rng);
  d.start_token = uniform_tensor(1, s, 1.0, rng);
  d.cell = nn::LstmParams::random(s, a.decoder_hidden, rng);
  // Forget-gate bias starts at 1.
  for (std::size_t k = 0; k < a.decoder_hidden; ++k) d.cell.bias(0, a.decoder_hidden + k) = 1.0;
  d.out_weight = uniform_tensor(a.decoder_hidden, s, fan(a.decoder_hidden), rng);
  return p;
}

ModelParams ModelParams::zeros_like() const {
  ModelParams g = *this;
  g.for_each([](const std::string&, Tensor2& t) { t.fill(0.0); });
  return g;
}

std::size_t ModelParams::parameter_count() const {
  std::size_t n = 0;
  for_each([&](const std::string&, const Tensor2& t) { n += t.size(); });
  return n;
}

bool ModelParams::all_finite() const {
  bool ok = true;
  for_each([&](const std::string&, const Tensor2& t) { ok = ok && t.all_finite(); });
  for (double v : normalization.mean) ok = ok && std::isfinite(v);
  for (double v : normalization.scale) ok = ok && std::isfinite(v) && v != 0.0;
  return ok;
}

void ModelParams::check_shapes() const {
  const ModelParams expected = zeros(arch);
  std::vector<std::pair<std::string, std::string>> shapes;
  expected.for_each([&](const std::string& name, const Tensor2& t) {
    shapes.emplace_back(name, t.shape());
  });
  std::size_t i = 0;
  for_each([&](const std::string& name, const Tensor2& t) {
    if (i >= shapes.size() || shapes[i].first != name || shapes[i].second != t.shape()) {
      throw DimensionError("model: tensor '" + name + "' has shape " + t.shape() +
                           " which does not match the architecture");
    }
    ++i;
  });
  if (i != shapes.size()) throw DimensionError("model: tensor count does not match the architecture");
  if (normalization.mean.size() != arch.features || normalization.scale.size() != arch.features) {
    throw DimensionError("model: normalization statistics do not match the feature count");
  }
}

}  // namespace zshar::model
