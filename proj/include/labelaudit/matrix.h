// Copyright 2026 The labelaudit Authors.
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

#ifndef LABELAUDIT_MATRIX_H_
#define LABELAUDIT_MATRIX_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace labelaudit {

// Row-major dense matrix of doubles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<double> row(std::size_t r) {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  bool AllFinite() const;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// One-hot encoding of labels; negative labels (unlabelled nodes) give zero
// rows.
DenseMatrix OneHot(std::span<const int> labels, int num_classes);

// Index of the largest entry; ties go to the smallest index.
std::size_t ArgMax(std::span<const double> values);

// Square sparse matrix in compressed sparse row layout. Column indices are
// strictly increasing within each row.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t n, std::vector<std::size_t> row_offsets,
               std::vector<std::uint32_t> columns, std::vector<double> values,
               bool symmetric);

  std::size_t size() const { return n_; }
  std::size_t nnz() const { return values_.size(); }
  bool symmetric() const { return symmetric_; }

  std::span<const std::uint32_t> row_columns(std::size_t r) const {
    return {columns_.data() + offsets_[r], offsets_[r + 1] - offsets_[r]};
  }
  std::span<const double> row_values(std::size_t r) const {
    return {values_.data() + offsets_[r], offsets_[r + 1] - offsets_[r]};
  }

  // Entry lookup by binary search; zero when absent.
  double at(std::size_t r, std::size_t c) const;

  DenseMatrix ToDense() const;

  // this * dense, accumulating each output row in CSR order.
  DenseMatrix Multiply(const DenseMatrix& dense) const;

  // Exact transpose comparison.
  bool IsSymmetric() const;

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::uint32_t> columns_;
  std::vector<double> values_;
  bool symmetric_ = false;
};

}  // namespace labelaudit

#endif  // LABELAUDIT_MATRIX_H_
