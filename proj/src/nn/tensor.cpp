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

#include "zshar/nn/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "zshar/error.hpp"

namespace zshar::nn {

Tensor2::Tensor2(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Tensor2::Tensor2(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    std::ostringstream msg;
    msg << "tensor data length " << data_.size() << " does not match shape " << rows_ << "x"
        << cols_;
    throw DimensionError(msg.str());
  }
}

Tensor2 Tensor2::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<double> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw DimensionError("ragged rows in tensor literal");
    data.insert(data.end(), row.begin(), row.end());
  }
  return Tensor2(r, c, std::move(data));
}

Tensor2 Tensor2::row_vector(std::span<const double> values) {
  return Tensor2(1, values.size(), std::vector<double>(values.begin(), values.end()));
}

void Tensor2::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

bool Tensor2::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

std::string Tensor2::shape() const {
  return std::to_string(rows_) + "x" + std::to_string(cols_);
}

namespace {

void require_same_shape(const Tensor2& a, const Tensor2& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(op) + ": shape " + a.shape() + " vs " + b.shape());
  }
}

}  // namespace

Tensor2 matmul(const Tensor2& a, const Tensor2& b) {
  Tensor2 out(a.rows(), b.cols());
  matmul_acc(a, b, out);
  return out;
}

void matmul_acc(const Tensor2& a, const Tensor2& b, Tensor2& out) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: inner dimensions differ, " + a.shape() + " * " + b.shape());
  }
  if (out.rows() != a.rows() || out.cols() != b.cols()) {
    throw DimensionError("matmul: output shape " + out.shape() + " for " + a.shape() + " * " +
                         b.shape());
  }
  const std::size_t m = a.rows();
  const std::size_t k_dim = a.cols();
  const std::size_t n = b.cols();
  const double* bp = b.values().data();
  double* op = out.values().data();
  const double* ap = a.values().data();

  // Four output rows at a time so each row of b is read once per block.
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    double* o0 = op + (i + 0) * n;
    double* o1 = op + (i + 1) * n;
    double* o2 = op + (i + 2) * n;
    double* o3 = op + (i + 3) * n;
    for (std::size_t k = 0; k < k_dim; ++k) {
      const double a0 = ap[(i + 0) * k_dim + k];
      const double a1 = ap[(i + 1) * k_dim + k];
      const double a2 = ap[(i + 2) * k_dim + k];
      const double a3 = ap[(i + 3) * k_dim + k];
      const double* br = bp + k * n;
      for (std::size_t j = 0; j < n; ++j) {
        const double bv = br[j];
        o0[j] += a0 * bv;
        o1[j] += a1 * bv;
        o2[j] += a2 * bv;
        o3[j] += a3 * bv;
      }
    }
  }
  for (; i < m; ++i) {
    double* o = op + i * n;
    for (std::size_t k = 0; k < k_dim; ++k) {
      const double av = ap[i * k_dim + k];
      const double* br = bp + k * n;
      for (std::size_t j = 0; j < n; ++j) o[j] += av * br[j];
    }
  }
}

void matmul_tn_acc(const Tensor2& a, const Tensor2& b, Tensor2& out) {
  if (a.rows() != b.rows()) {
    throw DimensionError("matmul_tn: row counts differ, " + a.shape() + " vs " + b.shape());
  }
  if (out.rows() != a.cols() || out.cols() != b.cols()) {
    throw DimensionError("matmul_tn: output shape " + out.shape());
  }
  const std::size_t n = b.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto arow = a.row(i);
    const double* br = b.row(i).data();
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double av = arow[k];
      if (av == 0.0) continue;
      double* o = out.row(k).data();
      for (std::size_t j = 0; j < n; ++j) o[j] += av * br[j];
    }
  }
}

Tensor2 transpose(const Tensor2& a) {
  Tensor2 out(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out(c, r) = a(r, c);
  }
  return out;
}

void add_scaled(Tensor2& out, const Tensor2& a, double scale) {
  require_same_shape(out, a, "add_scaled");
  auto o = out.values();
  const auto v = a.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] += scale * v[i];
}

Tensor2 hconcat(const Tensor2& a, const Tensor2& b) {
  if (a.rows() != b.rows()) {
    throw DimensionError("hconcat: row counts differ, " + a.shape() + " vs " + b.shape());
  }
  Tensor2 out(a.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto dst = out.row(r);
    std::copy(a.row(r).begin(), a.row(r).end(), dst.begin());
    std::copy(b.row(r).begin(), b.row(r).end(), dst.begin() + static_cast<std::ptrdiff_t>(a.cols()));
  }
  return out;
}

Tensor2 column_slice(const Tensor2& a, std::size_t begin, std::size_t count) {
  if (begin + count > a.cols()) {
    throw DimensionError("column_slice: range exceeds " + a.shape());
  }
  Tensor2 out(a.rows(), count);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto src = a.row(r).subspan(begin, count);
    std::copy(src.begin(), src.end(), out.row(r).begin());
  }
  return out;
}

double frobenius_norm(const Tensor2& a) {
  double sum = 0.0;
  for (double v : a.values()) sum += v * v;
  return std::sqrt(sum);
}

}  // namespace zshar::nn
