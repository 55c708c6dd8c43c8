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
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace zshar::nn {

/// Dense row-major matrix of doubles. Vectors are 1 x n tensors.
class Tensor2 {
 public:
  Tensor2() = default;
  Tensor2(std::size_t rows, std::size_t cols, double fill = 0.0);
  Tensor2(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Tensor2 from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static Tensor2 row_vector(std::span<const double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  const std::vector<double>& storage() const { return data_; }

  void fill(double value);
  bool all_finite() const;
  std::string shape() const;

  friend bool operator==(const Tensor2&, const Tensor2&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// a * b.
Tensor2 matmul(const Tensor2& a, const Tensor2& b);
/// out += a * b.
void matmul_acc(const Tensor2& a, const Tensor2& b, Tensor2& out);
/// out += transpose(a) * b.
void matmul_tn_acc(const Tensor2& a, const Tensor2& b, Tensor2& out);

Tensor2 transpose(const Tensor2& a);

/// out += scale * a, shapes must match.
void add_scaled(Tensor2& out, const Tensor2& a, double scale = 1.0);

/// Horizontal concatenation [a | b].
Tensor2 hconcat(const Tensor2& a, const Tensor2& b);
/// Columns [begin, begin + count) of a.
Tensor2 column_slice(const Tensor2& a, std::size_t begin, std::size_t count);

double frobenius_norm(const Tensor2& a);

}  // namespace zshar::nn
