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

#include "zshar/model/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zshar/error.hpp"

namespace zshar::model {

using nn::Tensor2;

namespace {

void add_column_sums(const Tensor2& src, Tensor2& bias_grad) {
  for (std::size_t r = 0; r < src.rows(); ++r) {
    for (std::size_t c = 0; c < src.cols(); ++c) bias_grad(0, c) += src(r, c);
  }
}

double row_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

/// Writes (a - b) / |a - b| scaled by `scale` into `out`; zero when a == b.
void unit_difference(std::span<const double> a, std::span<const double> b, double scale,
                     std::span<double> out) {
  const double norm = row_distance(a, b);
  if (norm == 0.0) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = scale * (a[i] - b[i]) / norm;
}

Tensor2 normalize_rows(const Tensor2& x, std::vector<double>& norms) {
  Tensor2 out(x.rows(), x.cols());
  norms.assign(x.rows(), 0.0);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    double s = 0.0;
    for (double v : x.row(r)) s += v * v;
    norms[r] = std::sqrt(s);
    if (norms[r] == 0.0) continue;
    for (std::size_t c = 0; c < x.cols(); ++c) out(r, c) = x(r, c) / norms[r];
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Encoder

EncoderOutput encode_batch(std::span<const Tensor2> steps, const ModelParams& params,
                           nn::Mode mode, nn::Rng& rng) {
  nn::BiLstmOutput lstm = nn::bilstm_forward(steps, params.encoder, params.arch.pooling);
  nn::DropoutResult drop = nn::dropout_forward(lstm.representation, params.arch.dropout, mode, rng);
  EncoderOutput out;
  out.cache.activated = nn::relu_forward(drop.output);
  out.features = nn::linear_forward(out.cache.activated, params.head_weight,
                                    params.head_bias.values());
  out.cache.lstm = std::move(lstm.cache);
  out.cache.dropout_mask = std::move(drop.mask);
  out.cache.dropped = std::move(drop.output);
  return out;
}

void encode_backward(const EncoderCache& cache, const Tensor2& d_features,
                     const ModelParams& params, ModelParams& grads) {
  const nn::LinearGrads head = nn::linear_backward(cache.activated, params.head_weight, d_features);
  nn::add_scaled(grads.head_weight, head.dweight);
  nn::add_scaled(grads.head_bias, head.dbias);
  const Tensor2 d_dropped = nn::relu_backward(cache.dropped, head.dx);
  const Tensor2 d_repr = nn::dropout_backward(cache.dropout_mask, d_dropped);
  nn::bilstm_backward(cache.lstm, d_repr, params.encoder, grads.encoder);
}

std::vector<Tensor2> stack_windows(std::span<const data::ImuWindow* const> windows,
                                   const FeatureNormalization& normalization) {
  if (windows.empty()) throw DataError("encoder: empty batch");
  const std::size_t n = windows.front()->steps();
  const std::size_t d = normalization.mean.size();
  std::vector<Tensor2> steps(n, Tensor2(windows.size(), d));
  for (std::size_t b = 0; b < windows.size(); ++b) {
    const data::ImuWindow& w = *windows[b];
    if (w.steps() != n) {
      throw DimensionError("encoder: window '" + w.id + "' has " + std::to_string(w.steps()) +
                           " steps, batch expects " + std::to_string(n));
    }
    const Tensor2 z = normalization.apply(w.values);
    for (std::size_t t = 0; t < n; ++t) {
      for (std::size_t j = 0; j < d; ++j) steps[t](b, j) = z(t, j);
    }
  }
  return steps;
}

std::vector<double> encode_imu(const data::ImuWindow& x, const ModelParams& params, nn::Mode mode,
                               nn::Rng& rng) {
  if (x.features() != params.arch.features) {
    throw DimensionError("encoder: window '" + x.id + "' has " + std::to_string(x.features()) +
                         " features, model expects " + std::to_string(params.arch.features));
  }
  const data::ImuWindow* one[] = {&x};
  const std::vector<Tensor2> steps = stack_windows(one, params.normalization);
  const EncoderOutput out = encode_batch(steps, params, mode, rng);
  const auto row = out.features.row(0);
  return {row.begin(), row.end()};
}

// ---------------------------------------------------------------------------
// Matching unit

std::map<std::string, double> similarity_scores(std::span<const double> f,
                                                const data::ClassSemanticSet& classes) {
  std::map<std::string, double> scores;
  for (const auto& [name, v] : classes.vectors) {
    if (v.size() != f.size()) {
      throw DimensionError("similarity: feature length " + std::to_string(f.size()) +
                           " but class '" + name + "' has length " + std::to_string(v.size()));
    }
    double dot = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      dot += f[i] * v[i];
      sq += v[i] * v[i];
    }
    if (sq == 0.0) throw DataError("similarity: class '" + name + "' has a zero semantic vector");
    scores[name] = dot / std::sqrt(sq);
  }
  return scores;
}

std::map<std::string, double> class_probabilities(const std::map<std::string, double>& scores) {
  if (scores.empty()) throw DataError("softmax: no classes");
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& [_, s] : scores) top = std::max(top, s);
  double total = 0.0;
  std::map<std::string, double> probs;
  for (const auto& [name, s] : scores) total += probs[name] = std::exp(s - top);
  for (auto& [_, p] : probs) p /= total;
  return probs;
}

double matching_loss(std::span<const double> f, std::span<const double> v) {
  if (f.size() != v.size()) {
    throw DimensionError("matching loss: lengths " + std::to_string(f.size()) + " and " +
                         std::to_string(v.size()));
  }
  return row_distance(f, v);
}

double classification_loss(const std::map<std::string, double>& scores,
                           const std::string& true_class) {
  const auto it = scores.find(true_class);
  if (it == scores.end()) {
    throw DataError("classification loss: class '" + true_class + "' has no score");
  }
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& [_, s] : scores) top = std::max(top, s);
  double total = 0.0;
  for (const auto& [_, s] : scores) total += std::exp(s - top);
  return top + std::log(total) - it->second;
}

Tensor2 unit_rows(const Tensor2& vectors, std::span<const std::string> names) {
  std::vector<double> norms;
  Tensor2 out = normalize_rows(vectors, norms);
  for (std::size_t r = 0; r < norms.size(); ++r) {
    if (norms[r] == 0.0) {
      const std::string name = r < names.size() ? names[r] : std::to_string(r);
      throw DataError("similarity: class '" + name + "' has a zero semantic vector");
    }
  }
  return out;
}

Tensor2 score_matrix(const Tensor2& features, const Tensor2& class_units, bool normalize_features) {
  std::vector<double> norms;
  const Tensor2 g = normalize_features ? normalize_rows(features, norms) : features;
  Tensor2 scores(g.rows(), class_units.rows());
  const Tensor2 ut = nn::transpose(class_units);
  nn::matmul_acc(g, ut, scores);
  return scores;
}

// ---------------------------------------------------------------------------
// Decoder

Tensor2 decode_batch(const Tensor2& condition, const ModelParams& params, DecoderCache* cache) {
  const Architecture& a = params.arch;
  const DecoderParams& d = params.decoder;
  if (condition.cols() != a.embedding_dim) {
    throw DimensionError("decoder: condition length " + std::to_string(condition.cols()) +
                         ", model expects " + std::to_string(a.embedding_dim));
  }
  const std::size_t batch = condition.rows();
  const std::size_t s = a.frame_width();
  Tensor2 h = nn::linear_forward(condition, d.init_h_weight, d.init_h_bias.values());
  Tensor2 c = nn::linear_forward(condition, d.init_c_weight, d.init_c_bias.values());
  Tensor2 token(batch, s);
  for (std::size_t b = 0; b < batch; ++b) {
    std::copy(d.start_token.values().begin(), d.start_token.values().end(), token.row(b).begin());
  }
  Tensor2 out(batch, a.frames * s);
  if (cache) {
    cache->condition = condition;
    cache->steps.clear();
    cache->hidden.clear();
    cache->outputs.clear();
  }
  for (std::size_t t = 0; t < a.frames; ++t) {
    nn::LstmStep step = nn::lstm_cell_forward(token, h, c, d.cell);
    Tensor2 y = nn::linear_forward(step.h, d.out_weight, d.out_bias.values());
    for (double& v : y.values()) v = std::tanh(v);
    for (std::size_t b = 0; b < batch; ++b) {
      std::copy(y.row(b).begin(), y.row(b).end(), out.row(b).begin() + static_cast<std::ptrdiff_t>(t * s));
    }
    h = std::move(step.h);
    c = std::move(step.c);
    if (cache) {
      cache->steps.push_back(std::move(step.cache));
      cache->hidden.push_back(h);
      cache->outputs.push_back(std::move(y));
    }
  }
  return out;
}

Tensor2 decode_backward(const DecoderCache& cache, const Tensor2& d_output,
                        const ModelParams& params, ModelParams& grads) {
  const Architecture& a = params.arch;
  const DecoderParams& d = params.decoder;
  DecoderParams& g = grads.decoder;
  const std::size_t batch = cache.condition.rows();
  const std::size_t s = a.frame_width();
  const std::size_t hd = a.decoder_hidden;
  if (d_output.rows() != batch || d_output.cols() != a.frames * s) {
    throw DimensionError("decoder backward: gradient shape " + d_output.shape());
  }
  const Tensor2 out_wt = nn::transpose(d.out_weight);
  Tensor2 dh_next(batch, hd);
  Tensor2 dc_next(batch, hd);
  for (std::size_t step = a.frames; step-- > 0;) {
    const Tensor2& y = cache.outputs[step];
    Tensor2 d_pre(batch, s);
    for (std::size_t b = 0; b < batch; ++b) {
      for (std::size_t k = 0; k < s; ++k) {
        const double yv = y(b, k);
        d_pre(b, k) = d_output(b, step * s + k) * (1.0 - yv * yv);
      }
    }
    nn::matmul_tn_acc(cache.hidden[step], d_pre, g.out_weight);
    add_column_sums(d_pre, g.out_bias);
    Tensor2 dh = dh_next;
    nn::matmul_acc(d_pre, out_wt, dh);
    nn::LstmStepGrads sg = nn::lstm_cell_backward(cache.steps[step], dh, dc_next, d.cell, g.cell);
    add_column_sums(sg.dx, g.start_token);
    dh_next = std::move(sg.dh_prev);
    dc_next = std::move(sg.dc_prev);
  }
  nn::matmul_tn_acc(cache.condition, dh_next, g.init_h_weight);
  add_column_sums(dh_next, g.init_h_bias);
  nn::matmul_tn_acc(cache.condition, dc_next, g.init_c_weight);
  add_column_sums(dc_next, g.init_c_bias);
  Tensor2 d_condition(batch, a.embedding_dim);
  nn::matmul_acc(dh_next, nn::transpose(d.init_h_weight), d_condition);
  nn::matmul_acc(dc_next, nn::transpose(d.init_c_weight), d_condition);
  return d_condition;
}

data::SkeletonSequence decode_skeleton(std::span<const double> condition,
                                       const ModelParams& params) {
  const Tensor2 out = decode_batch(Tensor2::row_vector(condition), params, nullptr);
  data::SkeletonSequence seq;
  seq.frames = params.arch.frames;
  seq.joints = params.arch.joints;
  seq.dims = params.arch.dims;
  seq.coords.assign(out.storage().begin(), out.storage().end());
  return seq;
}

double reconstruction_loss(const data::SkeletonSequence& generated_from_f,
                           const data::SkeletonSequence& generated_from_v,
                           const data::SkeletonSequence& target) {
  const auto same_shape = [&](const data::SkeletonSequence& s) {
    return s.frames == target.frames && s.joints == target.joints && s.dims == target.dims &&
           s.coords.size() == target.coords.size();
  };
  if (!same_shape(generated_from_f) || !same_shape(generated_from_v)) {
    throw DimensionError("reconstruction loss: sequence shapes differ");
  }
  return row_distance(generated_from_f.coords, target.coords) +
         row_distance(generated_from_v.coords, target.coords);
}

// ---------------------------------------------------------------------------
// Combined objective

LossBreakdown batch_loss(const BatchInputs& in, const ModelParams& params,
                         const LossWeights& weights, nn::Mode mode, nn::Rng& rng,
                         ModelParams* grads) {
  const Architecture& a = params.arch;
  const std::size_t batch = in.labels.size();
  const std::size_t e = a.embedding_dim;
  const std::size_t classes = in.class_vectors.rows();
  if (batch == 0) throw DataError("batch loss: empty batch");
  if (in.steps.empty() || in.steps.front().rows() != batch) {
    throw DimensionError("batch loss: IMU batch does not match the label count");
  }
  if (in.class_vectors.cols() != e || in.class_units.rows() != classes ||
      in.class_units.cols() != e) {
    throw DimensionError("batch loss: class vectors must be C x " + std::to_string(e));
  }
  if (in.skeletons.rows() != batch || in.skeletons.cols() != a.frames * a.frame_width()) {
    throw DimensionError("batch loss: skeleton targets have shape " + in.skeletons.shape());
  }
  for (std::size_t y : in.labels) {
    if (y >= classes) throw DataError("batch loss: label index out of range");
  }

  EncoderOutput enc = encode_batch(in.steps, params, mode, rng);
  const Tensor2& f = enc.features;

  // Matching unit and classification loss.
  std::vector<double> f_norms;
  const Tensor2 g = a.normalize_features ? normalize_rows(f, f_norms) : f;
  Tensor2 scores(batch, classes);
  nn::matmul_acc(g, nn::transpose(in.class_units), scores);
  Tensor2 d_scores(batch, classes);
  LossBreakdown loss;
  for (std::size_t b = 0; b < batch; ++b) {
    const auto row = scores.row(b);
    const double top = *std::max_element(row.begin(), row.end());
    double total = 0.0;
    for (double s : row) total += std::exp(s - top);
    const double lse = top + std::log(total);
    loss.classification += lse - row[in.labels[b]];
    for (std::size_t k = 0; k < classes; ++k) d_scores(b, k) = std::exp(row[k] - lse);
    d_scores(b, in.labels[b]) -= 1.0;
  }

  // Decoder runs on [f; v_y] so both reconstructions share one pass.
  Tensor2 condition(2 * batch, e);
  for (std::size_t b = 0; b < batch; ++b) {
    std::copy(f.row(b).begin(), f.row(b).end(), condition.row(b).begin());
    const auto v = in.class_vectors.row(in.labels[b]);
    std::copy(v.begin(), v.end(), condition.row(batch + b).begin());
    loss.matching += row_distance(f.row(b), v);
  }
  DecoderCache dec_cache;
  const Tensor2 decoded = decode_batch(condition, params, grads ? &dec_cache : nullptr);
  for (std::size_t b = 0; b < batch; ++b) {
    loss.reconstruction += row_distance(decoded.row(b), in.skeletons.row(b)) +
                           row_distance(decoded.row(batch + b), in.skeletons.row(b));
  }

  const double inv_b = 1.0 / static_cast<double>(batch);
  loss.matching *= inv_b;
  loss.classification *= inv_b;
  loss.reconstruction *= inv_b;
  loss.total = total_loss(loss.matching, loss.classification, loss.reconstruction, weights.lambda,
                          weights.alpha);
  if (!grads) return loss;

  Tensor2 d_decoded(2 * batch, decoded.cols());
  for (std::size_t b = 0; b < 2 * batch; ++b) {
    unit_difference(decoded.row(b), in.skeletons.row(b % batch), weights.alpha * inv_b,
                    d_decoded.row(b));
  }
  const Tensor2 d_condition = decode_backward(dec_cache, d_decoded, params, *grads);

  Tensor2 dg(batch, e);
  nn::matmul_acc(d_scores, in.class_units, dg);
  Tensor2 df(batch, e);
  for (std::size_t b = 0; b < batch; ++b) {
    auto df_row = df.row(b);
    if (a.normalize_features) {
      if (f_norms[b] > 0.0) {
        double proj = 0.0;
        for (std::size_t i = 0; i < e; ++i) proj += g(b, i) * dg(b, i);
        for (std::size_t i = 0; i < e; ++i) {
          df_row[i] = weights.lambda * inv_b * (dg(b, i) - g(b, i) * proj) / f_norms[b];
        }
      }
    } else {
      for (std::size_t i = 0; i < e; ++i) df_row[i] = weights.lambda * inv_b * dg(b, i);
    }
    std::vector<double> dm(e);
    unit_difference(f.row(b), in.class_vectors.row(in.labels[b]), inv_b, dm);
    for (std::size_t i = 0; i < e; ++i) df_row[i] += dm[i] + d_condition(b, i);
  }
  encode_backward(enc.cache, df, params, *grads);
  return loss;
}

}  // namespace zshar::model
