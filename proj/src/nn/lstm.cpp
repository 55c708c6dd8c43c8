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

#include "zshar/nn/lstm.hpp"

#include <cmath>

#include "zshar/error.hpp"

namespace zshar::nn {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Tensor2 uniform_tensor(std::size_t rows, std::size_t cols, double bound, Rng& rng) {
  Tensor2 t(rows, cols);
  for (double& v : t.values()) v = rng.uniform(-bound, bound);
  return t;
}

void check_step_shapes(const Tensor2& x, const Tensor2& h_prev, const Tensor2& c_prev,
                       const LstmParams& p) {
  const std::size_t hidden = p.hidden_size();
  if (p.w_input.cols() != 4 * hidden || p.w_hidden.cols() != 4 * hidden ||
      p.bias.rows() != 1 || p.bias.cols() != 4 * hidden) {
    throw DimensionError("lstm: inconsistent parameter shapes w_input " + p.w_input.shape() +
                         ", w_hidden " + p.w_hidden.shape() + ", bias " + p.bias.shape());
  }
  if (x.cols() != p.input_size()) {
    throw DimensionError("lstm: input " + x.shape() + " but cell expects " +
                         std::to_string(p.input_size()) + " features");
  }
  if (h_prev.rows() != x.rows() || h_prev.cols() != hidden || c_prev.rows() != x.rows() ||
      c_prev.cols() != hidden) {
    throw DimensionError("lstm: state shapes h " + h_prev.shape() + ", c " + c_prev.shape() +
                         " for input " + x.shape() + " and hidden " + std::to_string(hidden));
  }
}

LstmStepGrads cell_backward(const LstmStepCache& cache, const Tensor2& dh, const Tensor2& dc,
                            const Tensor2& w_input_t, const Tensor2& w_hidden_t,
                            LstmParams& grads) {
  const std::size_t batch = cache.gates.rows();
  const std::size_t hidden = cache.tanh_c.cols();
  Tensor2 dpre(batch, 4 * hidden);
  Tensor2 dc_prev(batch, hidden);
  for (std::size_t r = 0; r < batch; ++r) {
    const auto gate = cache.gates.row(r);
    const auto tc = cache.tanh_c.row(r);
    const auto cp = cache.c_prev.row(r);
    const auto dhr = dh.row(r);
    const auto dcr = dc.row(r);
    auto dp = dpre.row(r);
    auto dcp = dc_prev.row(r);
    for (std::size_t j = 0; j < hidden; ++j) {
      const double ig = gate[j];
      const double fg = gate[hidden + j];
      const double gg = gate[2 * hidden + j];
      const double og = gate[3 * hidden + j];
      const double d_out = dhr[j] * tc[j];
      const double d_cell = dcr[j] + dhr[j] * og * (1.0 - tc[j] * tc[j]);
      dp[j] = d_cell * gg * ig * (1.0 - ig);
      dp[hidden + j] = d_cell * cp[j] * fg * (1.0 - fg);
      dp[2 * hidden + j] = d_cell * ig * (1.0 - gg * gg);
      dp[3 * hidden + j] = d_out * og * (1.0 - og);
      dcp[j] = d_cell * fg;
    }
  }
  matmul_tn_acc(cache.x, dpre, grads.w_input);
  matmul_tn_acc(cache.h_prev, dpre, grads.w_hidden);
  auto db = grads.bias.row(0);
  for (std::size_t r = 0; r < batch; ++r) {
    const auto dp = dpre.row(r);
    for (std::size_t j = 0; j < db.size(); ++j) db[j] += dp[j];
  }
  LstmStepGrads out{Tensor2(batch, cache.x.cols()), Tensor2(batch, hidden), std::move(dc_prev)};
  matmul_acc(dpre, w_input_t, out.dx);
  matmul_acc(dpre, w_hidden_t, out.dh_prev);
  return out;
}

struct DirectionRun {
  std::vector<Tensor2> outputs;
  std::vector<LstmStepCache> caches;
};

DirectionRun run_direction(std::span<const Tensor2> inputs, const LstmParams& p, bool reverse) {
  const std::size_t n = inputs.size();
  const std::size_t batch = inputs.front().rows();
  DirectionRun run;
  run.outputs.resize(n);
  run.caches.resize(n);
  Tensor2 h(batch, p.hidden_size());
  Tensor2 c(batch, p.hidden_size());
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t t = reverse ? n - 1 - k : k;
    LstmStep step = lstm_cell_forward(inputs[t], h, c, p);
    h = step.h;
    c = std::move(step.c);
    run.outputs[t] = std::move(step.h);
    run.caches[t] = std::move(step.cache);
  }
  return run;
}

// BPTT for one direction; returns d(input) per position.
std::vector<Tensor2> backprop_direction(const std::vector<LstmStepCache>& caches,
                                        const std::vector<Tensor2>& d_outputs,
                                        const LstmParams& p, LstmParams& grads, bool reverse) {
  const std::size_t n = caches.size();
  const Tensor2 w_input_t = transpose(p.w_input);
  const Tensor2 w_hidden_t = transpose(p.w_hidden);
  const std::size_t batch = caches.front().gates.rows();
  Tensor2 dh_next(batch, p.hidden_size());
  Tensor2 dc_next(batch, p.hidden_size());
  std::vector<Tensor2> dx(n);
  for (std::size_t k = 0; k < n; ++k) {
    // Visit positions in the reverse of processing order.
    const std::size_t t = reverse ? k : n - 1 - k;
    Tensor2 dh = dh_next;
    if (!d_outputs[t].empty()) add_scaled(dh, d_outputs[t]);
    LstmStepGrads g = cell_backward(caches[t], dh, dc_next, w_input_t, w_hidden_t, grads);
    dx[t] = std::move(g.dx);
    dh_next = std::move(g.dh_prev);
    dc_next = std::move(g.dc_prev);
  }
  return dx;
}

}  // namespace

LstmParams LstmParams::zeros(std::size_t input_size, std::size_t hidden_size) {
  return {Tensor2(input_size, 4 * hidden_size), Tensor2(hidden_size, 4 * hidden_size),
          Tensor2(1, 4 * hidden_size)};
}

LstmParams LstmParams::random(std::size_t input_size, std::size_t hidden_size, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(hidden_size));
  LstmParams p;
  p.w_input = uniform_tensor(input_size, 4 * hidden_size, bound, rng);
  p.w_hidden = uniform_tensor(hidden_size, 4 * hidden_size, bound, rng);
  p.bias = uniform_tensor(1, 4 * hidden_size, bound, rng);
  return p;
}

LstmStep lstm_cell_forward(const Tensor2& x, const Tensor2& h_prev, const Tensor2& c_prev,
                           const LstmParams& params) {
  check_step_shapes(x, h_prev, c_prev, params);
  const std::size_t batch = x.rows();
  const std::size_t hidden = params.hidden_size();
  Tensor2 pre(batch, 4 * hidden);
  const auto bias = params.bias.row(0);
  for (std::size_t r = 0; r < batch; ++r) std::copy(bias.begin(), bias.end(), pre.row(r).begin());
  matmul_acc(x, params.w_input, pre);
  matmul_acc(h_prev, params.w_hidden, pre);

  LstmStep step{Tensor2(batch, hidden), Tensor2(batch, hidden),
                LstmStepCache{x, h_prev, c_prev, std::move(pre), Tensor2(batch, hidden)}};
  Tensor2& gates = step.cache.gates;
  for (std::size_t r = 0; r < batch; ++r) {
    auto gate = gates.row(r);
    const auto cp = c_prev.row(r);
    auto hr = step.h.row(r);
    auto cr = step.c.row(r);
    auto tc = step.cache.tanh_c.row(r);
    for (std::size_t j = 0; j < hidden; ++j) {
      const double ig = sigmoid(gate[j]);
      const double fg = sigmoid(gate[hidden + j]);
      const double gg = std::tanh(gate[2 * hidden + j]);
      const double og = sigmoid(gate[3 * hidden + j]);
      gate[j] = ig;
      gate[hidden + j] = fg;
      gate[2 * hidden + j] = gg;
      gate[3 * hidden + j] = og;
      cr[j] = fg * cp[j] + ig * gg;
      tc[j] = std::tanh(cr[j]);
      hr[j] = og * tc[j];
    }
  }
  return step;
}

LstmStepGrads lstm_cell_backward(const LstmStepCache& cache, const Tensor2& dh, const Tensor2& dc,
                                 const LstmParams& params, LstmParams& grads) {
  if (dh.rows() != cache.gates.rows() || dh.cols() != params.hidden_size() ||
      dc.rows() != dh.rows() || dc.cols() != dh.cols()) {
    throw DimensionError("lstm backward: dh " + dh.shape() + ", dc " + dc.shape());
  }
  return cell_backward(cache, dh, dc, transpose(params.w_input), transpose(params.w_hidden),
                       grads);
}

BiLstmParams BiLstmParams::zeros(std::size_t input_size, std::size_t hidden_size,
                                 std::size_t stacks) {
  BiLstmParams p;
  for (std::size_t l = 0; l < stacks; ++l) {
    const std::size_t in = l == 0 ? input_size : 2 * hidden_size;
    p.layers.push_back({LstmParams::zeros(in, hidden_size), LstmParams::zeros(in, hidden_size)});
  }
  return p;
}

BiLstmParams BiLstmParams::random(std::size_t input_size, std::size_t hidden_size,
                                  std::size_t stacks, Rng& rng) {
  BiLstmParams p;
  for (std::size_t l = 0; l < stacks; ++l) {
    const std::size_t in = l == 0 ? input_size : 2 * hidden_size;
    LstmParams fwd = LstmParams::random(in, hidden_size, rng);
    LstmParams bwd = LstmParams::random(in, hidden_size, rng);
    p.layers.push_back({std::move(fwd), std::move(bwd)});
  }
  return p;
}

BiLstmOutput bilstm_forward(std::span<const Tensor2> steps, const BiLstmParams& params,
                            Pooling pooling) {
  if (steps.empty()) throw DataError("bilstm: empty input sequence");
  if (params.layers.empty()) throw ConfigError("bilstm: at least one stack is required");
  const std::size_t n = steps.size();
  const std::size_t batch = steps.front().rows();
  for (const Tensor2& s : steps) {
    if (s.rows() != batch || s.cols() != params.input_size()) {
      throw DimensionError("bilstm: step " + s.shape() + " but expected " +
                           std::to_string(batch) + "x" + std::to_string(params.input_size()));
    }
  }

  BiLstmOutput out;
  out.cache.pooling = pooling;
  std::vector<Tensor2> inputs(steps.begin(), steps.end());
  std::vector<Tensor2> fwd_out;
  std::vector<Tensor2> bwd_out;
  for (const BiLstmLayer& layer : params.layers) {
    DirectionRun f = run_direction(inputs, layer.forward, false);
    DirectionRun b = run_direction(inputs, layer.backward, true);
    out.cache.forward.push_back(std::move(f.caches));
    out.cache.backward.push_back(std::move(b.caches));
    fwd_out = std::move(f.outputs);
    bwd_out = std::move(b.outputs);
    for (std::size_t t = 0; t < n; ++t) inputs[t] = hconcat(fwd_out[t], bwd_out[t]);
  }

  out.h_forward_last = fwd_out[n - 1];
  out.h_backward_last = bwd_out[0];
  if (pooling == Pooling::kLastConcat) {
    out.representation = hconcat(out.h_forward_last, out.h_backward_last);
  } else {
    Tensor2 sum(batch, 2 * params.hidden_size());
    for (std::size_t t = 0; t < n; ++t) add_scaled(sum, inputs[t]);
    for (double& v : sum.values()) v /= static_cast<double>(n);
    out.representation = std::move(sum);
  }
  return out;
}

std::vector<Tensor2> bilstm_backward(const BiLstmCache& cache, const Tensor2& d_representation,
                                     const BiLstmParams& params, BiLstmParams& grads) {
  const std::size_t stacks = params.layers.size();
  if (cache.forward.size() != stacks || grads.layers.size() != stacks) {
    throw DimensionError("bilstm backward: cache/grads do not match parameter stacks");
  }
  const std::size_t n = cache.forward.front().size();
  const std::size_t hidden = params.hidden_size();
  if (d_representation.cols() != 2 * hidden) {
    throw DimensionError("bilstm backward: gradient " + d_representation.shape() +
                         " for hidden " + std::to_string(hidden));
  }

  // Gradients w.r.t. the top layer outputs; empty tensors mean "no gradient".
  std::vector<Tensor2> d_fwd(n);
  std::vector<Tensor2> d_bwd(n);
  if (cache.pooling == Pooling::kLastConcat) {
    d_fwd[n - 1] = column_slice(d_representation, 0, hidden);
    d_bwd[0] = column_slice(d_representation, hidden, hidden);
  } else {
    Tensor2 scaled = d_representation;
    for (double& v : scaled.values()) v /= static_cast<double>(n);
    const Tensor2 df = column_slice(scaled, 0, hidden);
    const Tensor2 db = column_slice(scaled, hidden, hidden);
    for (std::size_t t = 0; t < n; ++t) {
      d_fwd[t] = df;
      d_bwd[t] = db;
    }
  }

  std::vector<Tensor2> d_inputs(n);
  for (std::size_t l = stacks; l-- > 0;) {
    std::vector<Tensor2> dx_f =
        backprop_direction(cache.forward[l], d_fwd, params.layers[l].forward,
                           grads.layers[l].forward, false);
    std::vector<Tensor2> dx_b =
        backprop_direction(cache.backward[l], d_bwd, params.layers[l].backward,
                           grads.layers[l].backward, true);
    for (std::size_t t = 0; t < n; ++t) {
      add_scaled(dx_f[t], dx_b[t]);
      d_inputs[t] = std::move(dx_f[t]);
    }
    if (l > 0) {
      for (std::size_t t = 0; t < n; ++t) {
        d_fwd[t] = column_slice(d_inputs[t], 0, hidden);
        d_bwd[t] = column_slice(d_inputs[t], hidden, hidden);
      }
    }
  }
  return d_inputs;
}

}  // namespace zshar::nn
