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

// Binary detection metrics against ground-truth flip flags.

#ifndef LABELAUDIT_METRICS_H_
#define LABELAUDIT_METRICS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "labelaudit/base_classifier.h"

namespace labelaudit {

struct Confusion {
  std::int64_t tp = 0, fp = 0, tn = 0, fn = 0;
};

// Counts over the positions in `nodes`, or over every position when `nodes`
// is empty.
Confusion Confuse(const std::vector<bool>& flags, const std::vector<bool>& truth,
                  std::span<const std::size_t> nodes = {});

// A metric value; `degenerate` marks an undefined denominator, in which case
// value is 0.
struct Metric {
  double value = 0.0;
  bool degenerate = false;
};

Metric F1(const Confusion& c);
Metric Mcc(const Confusion& c);

// Fraction of truly flipped nodes among the t highest scores over `nodes`
// (all positions when empty). Ties rank the smaller node id first.
Metric PrecisionAtT(std::span<const double> scores, const std::vector<bool>& truth,
                    std::size_t t, std::span<const std::size_t> nodes = {});

// Flags v when the argmax of its prediction row differs from its label.
// Unlabelled nodes are never flagged.
std::vector<bool> BaselineArgmax(const SoftmaxMatrix& p, std::span<const int> labels);

// Ranking score for the argmax baseline: 1 - p(v, label). Unlabelled nodes
// score 0.
std::vector<double> BaselineScores(const SoftmaxMatrix& p, std::span<const int> labels);

}  // namespace labelaudit

#endif  // LABELAUDIT_METRICS_H_
