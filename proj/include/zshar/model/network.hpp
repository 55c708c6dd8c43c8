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

#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "zshar/data/types.hpp"
#include "zshar/model/params.hpp"
#include "zshar/nn/layers.hpp"
#include "zshar/nn/rng.hpp"
#include "zshar/nn/tensor.hpp"

namespace zshar::model {

// ---------------------------------------------------------------------------
// Encoder

struct EncoderCache {
  nn::BiLstmCache lstm;
  nn::Tensor2 dropout_mask;  // B x 2H
  nn::Tensor2 dropped;       // B x 2H, ReLU input
  nn::Tensor2 activated;     // B x 2H, head input
};

struct EncoderOutput {
  nn::Tensor2 features;  // B x E
  EncoderCache cache;
};

/// Batched encoder over already-normalized, time-major input (steps[t] is B x d).
EncoderOutput encode_batch(std::span<const nn::Tensor2> steps, const ModelParams& params,
                           nn::Mode mode, nn::Rng& rng);

/// Accumulates parameter gradients for dL/df into `grads`.
void encode_backward(const EncoderCache& cache, const nn::Tensor2& d_features,
                     const ModelParams& params, ModelParams& grads);

/// Normalizes and stacks equally long windows into time-major batch steps.
std::vector<nn::Tensor2> stack_windows(std::span<const data::ImuWindow* const> windows,
                                       const FeatureNormalization& normalization);

/// f for one window: normalize, encode. Throws DimensionError on a feature-count mismatch.
std::vector<double> encode_imu(const data::ImuWindow& x, const ModelParams& params, nn::Mode mode,
                               nn::Rng& rng);

// ---------------------------------------------------------------------------
// Matching unit

/// beta_k = f . v_k / |v_k|. Zero-norm vectors raise DataError naming the class.
std::map<std::string, double> similarity_scores(std::span<const double> f,
                                                const data::ClassSemanticSet& classes);

/// Softmax with max subtraction.
std::map<std::string, double> class_probabilities(const std::map<std::string, double>& scores);

/// |f - v|, unsquared.
double matching_loss(std::span<const double> f, std::span<const double> v);

/// -log softmax(scores)[true_class], evaluated as log-sum-exp minus the true score.
double classification_loss(const std::map<std::string, double>& scores,
                           const std::string& true_class);

/// Rows of `vectors` divided by their norms. DataError names the first zero row.
nn::Tensor2 unit_rows(const nn::Tensor2& vectors, std::span<const std::string> names);

// ---------------------------------------------------------------------------
// Decoder

struct DecoderCache {
  nn::Tensor2 condition;                    // B x E
  std::vector<nn::LstmStepCache> steps;     // T
  std::vector<nn::Tensor2> hidden;          // T, each B x Hd
  std::vector<nn::Tensor2> outputs;         // T, each B x S, post-tanh
};

/// Returns the decoded coordinates as B x (T*S), frame-major per row.
nn::Tensor2 decode_batch(const nn::Tensor2& condition, const ModelParams& params,
                         DecoderCache* cache);

/// Accumulates decoder gradients; returns dL/dcondition (B x E).
nn::Tensor2 decode_backward(const DecoderCache& cache, const nn::Tensor2& d_output,
                            const ModelParams& params, ModelParams& grads);

data::SkeletonSequence decode_skeleton(std::span<const double> condition,
                                       const ModelParams& params);

double reconstruction_loss(const data::SkeletonSequence& generated_from_f,
                           const data::SkeletonSequence& generated_from_v,
                           const data::SkeletonSequence& target);

inline double total_loss(double matching, double classification, double reconstruction,
                         double lambda, double alpha) {
  return matching + lambda * classification + alpha * reconstruction;
}

// ---------------------------------------------------------------------------
// Batched training objective

struct BatchInputs {
  std::vector<nn::Tensor2> steps;    // time-major normalized IMU, each B x d
  std::vector<std::size_t> labels;   // rows of class_vectors, one per sample
  nn::Tensor2 class_vectors;         // C x E seen semantic vectors
  nn::Tensor2 class_units;           // C x E, rows of class_vectors over their norms
  nn::Tensor2 skeletons;             // B x (T*S) targets
};

struct LossWeights {
  double lambda = 1e-2;
  double alpha = 0.6;
};

/// Batch means of each component.
struct LossBreakdown {
  double matching = 0.0;
  double classification = 0.0;
  double reconstruction = 0.0;
  double total = 0.0;
};

/// Forward pass of the combined objective. When `grads` is non-null the gradient of the
/// mean total loss is accumulated into it.
LossBreakdown batch_loss(const BatchInputs& inputs, const ModelParams& params,
                         const LossWeights& weights, nn::Mode mode, nn::Rng& rng,
                         ModelParams* grads);

/// Scores (B x C) for encoded features against unit class vectors, honoring
/// arch.normalize_features.
nn::Tensor2 score_matrix(const nn::Tensor2& features, const nn::Tensor2& class_units,
                         bool normalize_features);

}  // namespace zshar::model
