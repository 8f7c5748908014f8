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

#include "labelaudit/features.h"

#include "labelaudit/csv.h"
#include "labelaudit/error.h"

namespace labelaudit {
namespace {

constexpr char kModule[] = "agreement_features";

void CheckSameShape(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DataError(kModule, "matrix shapes differ: " + std::to_string(a.rows()) +
                                 "x" + std::to_string(a.cols()) + " vs " +
                                 std::to_string(b.rows()) + "x" +
                                 std::to_string(b.cols()));
  }
}

double RowDot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) sum += a[j] * b[j];
  return sum;
}

}  // namespace

std::vector<double> RowwiseDot(const DenseMatrix& u, const DenseMatrix& v) {
  CheckSameShape(u, v);
  std::vector<double> out(u.rows());
  for (std::size_t i = 0; i < u.rows(); ++i) out[i] = RowDot(u.row(i), v.row(i));
  return out;
}

PropagatedSignals PropagateSignals(const NormalizedAdjacency& a_norm,
                                   const DenseMatrix& y, const SoftmaxMatrix& p,
                                   int k_max) {
  if (k_max < 1) throw UsageError(kModule, "K must be at least 1");
  CheckSameShape(y, p.probs());
  if (y.rows() != a_norm.size()) {
    throw DataError(kModule, "label matrix rows do not match node count");
  }
  return {PropagateHops(a_norm, p.probs(), k_max),
          PropagateHops(a_norm, y, k_max)};
}

AgreementFeatures AssembleFeatures(const PropagatedSignals& signals,
                                   const DenseMatrix& y_c,
                                   const SoftmaxMatrix& p) {
  CheckSameShape(y_c, p.probs());
  const auto k = signals.p_hops.size();
  if (k == 0 || signals.y_hops.size() != k) {
    throw DataError(kModule, "propagated signals are incomplete");
  }
  for (std::size_t h = 0; h < k; ++h) {
    CheckSameShape(y_c, signals.p_hops[h]);
    CheckSameShape(y_c, signals.y_hops[h]);
  }
  AgreementFeatures out;
  out.k_hops = static_cast<int>(k);
  out.z = DenseMatrix(y_c.rows(), 2 * k + 1);
  for (std::size_t v = 0; v < y_c.rows(); ++v) {
    const auto self = y_c.row(v);
    auto row = out.z.row(v);
    row[0] = RowDot(self, p.row(v));
    for (std::size_t h = 0; h < k; ++h) {
      row[1 + h] = RowDot(self, signals.p_hops[h].row(v));
      row[1 + k + h] = RowDot(self, signals.y_hops[h].row(v));
    }
  }
  return out;
}

AgreementFeatures BuildFeatures(const NormalizedAdjacency& a_norm,
                                const DenseMatrix& y, const DenseMatrix& y_c,
                                const SoftmaxMatrix& p, int k_max) {
  return AssembleFeatures(PropagateSignals(a_norm, y, p, k_max), y_c, p);
}

std::string FormatAgreementFeatures(const AgreementFeatures& features) {
  std::string out = "node_id";
  for (std::size_t j = 0; j < features.z.cols(); ++j) out += ",z" + std::to_string(j);
  out += '\n';
  for (std::size_t v = 0; v < features.z.rows(); ++v) {
    out += std::to_string(v);
    for (double x : features.z.row(v)) out += ',' + csv::FormatDouble(x);
    out += '\n';
  }
  return out;
}

}  // namespace labelaudit
