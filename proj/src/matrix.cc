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

#include "labelaudit/matrix.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "labelaudit/error.h"

namespace labelaudit {

bool DenseMatrix::AllFinite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double x) { return std::isfinite(x); });
}

DenseMatrix OneHot(std::span<const int> labels, int num_classes) {
  DenseMatrix out(labels.size(), static_cast<std::size_t>(num_classes));
  for (std::size_t v = 0; v < labels.size(); ++v) {
    if (labels[v] < 0) continue;
    if (labels[v] >= num_classes) {
      throw Error(ErrorKind::kInternal, "graph_core",
                  "label " + std::to_string(labels[v]) + " out of range");
    }
    out(v, static_cast<std::size_t>(labels[v])) = 1.0;
  }
  return out;
}

std::size_t ArgMax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

SparseMatrix::SparseMatrix(std::size_t n, std::vector<std::size_t> row_offsets,
                           std::vector<std::uint32_t> columns,
                           std::vector<double> values, bool symmetric)
    : n_(n),
      offsets_(std::move(row_offsets)),
      columns_(std::move(columns)),
      values_(std::move(values)),
      symmetric_(symmetric) {
  if (offsets_.size() != n_ + 1 || offsets_.back() != columns_.size() ||
      columns_.size() != values_.size()) {
    throw Error(ErrorKind::kInternal, "graph_core", "malformed CSR arrays");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::kInternal, "graph_core",
                  "non-finite sparse entry");
    }
  }
}

double SparseMatrix::at(std::size_t r, std::size_t c) const {
  const auto cols = row_columns(r);
  const auto it = std::lower_bound(cols.begin(), cols.end(),
                                   static_cast<std::uint32_t>(c));
  if (it == cols.end() || *it != c) return 0.0;
  return row_values(r)[static_cast<std::size_t>(it - cols.begin())];
}

DenseMatrix SparseMatrix::ToDense() const {
  DenseMatrix out(n_, n_);
  for (std::size_t r = 0; r < n_; ++r) {
    const auto cols = row_columns(r);
    const auto vals = row_values(r);
    for (std::size_t i = 0; i < cols.size(); ++i) out(r, cols[i]) = vals[i];
  }
  return out;
}

DenseMatrix SparseMatrix::Multiply(const DenseMatrix& dense) const {
  if (dense.rows() != n_) {
    throw DataError("graph_core", "dimension mismatch: sparse is " +
                                      std::to_string(n_) + "x" +
                                      std::to_string(n_) + ", dense has " +
                                      std::to_string(dense.rows()) + " rows");
  }
  DenseMatrix out(n_, dense.cols());
  for (std::size_t r = 0; r < n_; ++r) {
    auto out_row = out.row(r);
    const auto cols = row_columns(r);
    const auto vals = row_values(r);
    for (std::size_t i = 0; i < cols.size(); ++i) {
      const auto in_row = dense.row(cols[i]);
      for (std::size_t j = 0; j < in_row.size(); ++j) {
        out_row[j] += vals[i] * in_row[j];
      }
    }
  }
  return out;
}

bool SparseMatrix::IsSymmetric() const {
  for (std::size_t r = 0; r < n_; ++r) {
    const auto cols = row_columns(r);
    const auto vals = row_values(r);
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (at(cols[i], r) != vals[i]) return false;
    }
  }
  return true;
}

}  // namespace labelaudit
