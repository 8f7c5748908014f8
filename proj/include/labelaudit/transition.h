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

// Confident-learning estimate of the label noise process.
//
// Given base-classifier probabilities on a node set, each node with observed
// label i is attributed to a latent class j when p(j) clears the class-j
// self-confidence threshold and j is the most probable class among those
// that do. The resulting count matrix is calibrated into a joint
// distribution of (observed, latent) labels and then into the column-
// stochastic transition matrix P(observed = i | latent = j).

#ifndef LABELAUDIT_TRANSITION_H_
#define LABELAUDIT_TRANSITION_H_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "labelaudit/base_classifier.h"
#include "labelaudit/matrix.h"

namespace labelaudit {

// Threshold for classes with no members; no probability can reach it.
inline constexpr double kUnreachableThreshold =
    std::numeric_limits<double>::infinity();

// c x c counts; rows are observed labels, columns latent labels.
using CountMatrix = std::vector<std::vector<std::int64_t>>;

// t_j = mean of p(x, j) over nodes observed as j.
std::vector<double> ClassThresholds(const SoftmaxMatrix& p,
                                    std::span<const int> labels,
                                    std::span<const std::size_t> nodes);

struct ConfidentJoint {
  CountMatrix counts;
  // Nodes whose probabilities clear no class threshold.
  std::size_t uncounted = 0;
};

// Ties in the qualifying argmax go to the smallest class id.
ConfidentJoint CountConfidentJoint(const SoftmaxMatrix& p,
                                   std::span<const int> labels,
                                   std::span<const double> thresholds,
                                   std::span<const std::size_t> nodes);

// Row-normalizes the counts, scales row i by observed_counts[i] and
// normalizes the whole matrix to sum 1. All-zero rows stay zero.
DenseMatrix JointDistribution(const CountMatrix& counts,
                              std::span<const std::int64_t> observed_counts);

struct ConditionalTransition {
  DenseMatrix matrix;  // column j is the distribution of observed | latent j
  // Columns with no joint mass, replaced by the uniform column.
  std::vector<bool> fallback;
};

ConditionalTransition ConditionalFromJoint(const DenseMatrix& joint);

struct TransitionModel {
  std::vector<double> thresholds;
  CountMatrix confident_joint;
  DenseMatrix joint;
  DenseMatrix conditional;
  std::size_t uncounted = 0;
  std::vector<bool> fallback;

  int num_classes() const { return static_cast<int>(thresholds.size()); }
};

// The full estimate on `nodes` (the validation split in the pipeline).
TransitionModel EstimateTransition(const SoftmaxMatrix& p,
                                   std::span<const int> labels,
                                   std::span<const std::size_t> nodes);

// JSON document for inspection and reuse. Unreachable thresholds are
// written as null.
std::string TransitionToJson(const TransitionModel& model);
TransitionModel TransitionFromJson(const std::string& text);

}  // namespace labelaudit

#endif  // LABELAUDIT_TRANSITION_H_
