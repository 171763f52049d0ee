/*
 * Copyright 2026 The shapreg Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cassert>
#include <span>
#include <vector>

namespace shapreg {

// Dense column-major matrix. Columns are contiguous so a regressor column can
// be handed out as a span.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(int r, int c) {
    assert(r >= 0 && r < rows_ && c >= 0 && c < cols_);
    return data_[static_cast<size_t>(c) * rows_ + r];
  }
  double operator()(int r, int c) const {
    assert(r >= 0 && r < rows_ && c >= 0 && c < cols_);
    return data_[static_cast<size_t>(c) * rows_ + r];
  }

  std::span<double> col(int c) {
    return {data_.data() + static_cast<size_t>(c) * rows_,
            static_cast<size_t>(rows_)};
  }
  std::span<const double> col(int c) const {
    return {data_.data() + static_cast<size_t>(c) * rows_,
            static_cast<size_t>(rows_)};
  }

  static Matrix FromRows(const std::vector<std::vector<double>>& rows) {
    Matrix m(static_cast<int>(rows.size()),
             rows.empty() ? 0 : static_cast<int>(rows.front().size()));
    for (int r = 0; r < m.rows(); ++r) {
      assert(static_cast<int>(rows[r].size()) == m.cols());
      for (int c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
    }
    return m;
  }

  static Matrix FromColumns(const std::vector<std::vector<double>>& cols) {
    Matrix m(cols.empty() ? 0 : static_cast<int>(cols.front().size()),
             static_cast<int>(cols.size()));
    for (int c = 0; c < m.cols(); ++c) {
      assert(static_cast<int>(cols[c].size()) == m.rows());
      for (int r = 0; r < m.rows(); ++r) m(r, c) = cols[c][r];
    }
    return m;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

}  // namespace shapreg
