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

// Neighborhood-agreement features.
//
// Column layout of Z for K hops (2K + 1 columns):
//   0           y_c . p
//   1 .. K      y_c . (S_k p)   for k = 1..K
//   K+1 .. 2K   y_c . (S_k y)   for k = 1..K
// where y is the one-hot observed label matrix, y_c the possibly corrupted
// one and p the base-classifier probabilities. Propagated label signals use
// y, never y_c, so corrupting one node's label only moves that node's row.

#ifndef LABELAUDIT_FEATURES_H_
#define LABELAUDIT_FEATURES_H_

#include <string>
#include <vector>

#include "labelaudit/base_classifier.h"
#include "labelaudit/graph.h"
#include "labelaudit/matrix.h"

namespace labelaudit {

// out[i] = sum_j u(i, j) * v(i, j).
std::vector<double> RowwiseDot(const DenseMatrix& u, const DenseMatrix& v);

struct AgreementFeatures {
  DenseMatrix z;
  int k_hops = 0;

  std::size_t num_columns() const { return z.cols(); }
};

// Hop-propagated predictions and labels, computed once per graph and reused
// across corrupted label matrices.
struct PropagatedSignals {
  std::vector<DenseMatrix> p_hops;  // S_k p for k = 1..K
  std::vector<DenseMatrix> y_hops;  // S_k y for k = 1..K
};

PropagatedSignals PropagateSignals(const NormalizedAdjacency& a_norm,
                                   const DenseMatrix& y, const SoftmaxMatrix& p,
                                   int k_max);

AgreementFeatures AssembleFeatures(const PropagatedSignals& signals,
                                   const DenseMatrix& y_c,
                                   const SoftmaxMatrix& p);

// PropagateSignals followed by AssembleFeatures. At inference y_c == y.
AgreementFeatures BuildFeatures(const NormalizedAdjacency& a_norm,
                                const DenseMatrix& y, const DenseMatrix& y_c,
                                const SoftmaxMatrix& p, int k_max);

// CSV: header node_id,z0,...,z{2K}, then one row per node.
std::string FormatAgreementFeatures(const AgreementFeatures& features);

}  // namespace labelaudit

#endif  // LABELAUDIT_FEATURES_H_
