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

// Base classifier predictions.
//
// The audit only needs a row-stochastic prediction matrix. It can be read
// from a file produced by any external model, or computed by the built-in
// classifier: multinomial logistic regression on features smoothed over
// k_base hops of the normalized adjacency, fit on training nodes only.

#ifndef LABELAUDIT_BASE_CLASSIFIER_H_
#define LABELAUDIT_BASE_CLASSIFIER_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "labelaudit/graph.h"
#include "labelaudit/matrix.h"

namespace labelaudit {

// n x c matrix whose rows are probability vectors.
class SoftmaxMatrix {
 public:
  SoftmaxMatrix() = default;

  // Checks entries lie in [0, 1] and rows sum to 1 within `tolerance`.
  // Rows off by more than 1e-12 (but inside the tolerance) are rescaled.
  static SoftmaxMatrix FromProbabilities(DenseMatrix probs,
                                         double tolerance = 1e-4);

  const DenseMatrix& probs() const { return probs_; }
  std::size_t num_nodes() const { return probs_.rows(); }
  int num_classes() const { return static_cast<int>(probs_.cols()); }
  std::span<const double> row(std::size_t v) const { return probs_.row(v); }

  friend bool operator==(const SoftmaxMatrix&, const SoftmaxMatrix&) = default;

 private:
  explicit SoftmaxMatrix(DenseMatrix probs) : probs_(std::move(probs)) {}
  DenseMatrix probs_;
};

// Reads the CSV softmax file: c comma-separated columns, one row per node.
SoftmaxMatrix LoadSoftmax(const std::string& path, std::size_t n, int c);
std::string FormatSoftmax(const SoftmaxMatrix& p);

// Row-wise softmax of logits; subtracts the row max first.
DenseMatrix RowSoftmax(const DenseMatrix& logits);

struct BaseTrainConfig {
  int k_base = 2;
  int epochs = 300;
  double step = 0.1;
  double momentum = 0.9;
  std::uint64_t seed = 0;

  friend bool operator==(const BaseTrainConfig&,
                         const BaseTrainConfig&) = default;
};

struct LinearModel {
  DenseMatrix weights;       // d x c
  std::vector<double> bias;  // c
  BaseTrainConfig config;

  std::size_t input_dim() const { return weights.rows(); }
  int num_classes() const { return static_cast<int>(bias.size()); }
  friend bool operator==(const LinearModel&, const LinearModel&) = default;
};

// Mean cross-entropy of the model over `nodes`, and its gradient with
// respect to weights and bias (written into `grad` when non-null; grad is
// resized to the model's shape).
double CrossEntropy(const LinearModel& model, const DenseMatrix& features,
                    std::span<const int> labels,
                    std::span<const std::size_t> nodes, LinearModel* grad);

DenseMatrix Logits(const LinearModel& model, const DenseMatrix& features);

struct BaseTrainResult {
  LinearModel model;
  SoftmaxMatrix probs;
  double train_accuracy = 0.0;
};

// Smooths g.features over k_base hops (diagonal kept), then runs full-batch
// gradient descent with momentum from a zero initialization on the training
// split. Deterministic.
BaseTrainResult TrainBase(const Graph& g, const BaseTrainConfig& config);

// Applies a trained model to a graph with the same feature dimension.
SoftmaxMatrix PredictBase(const LinearModel& model, const Graph& g);

// Versioned JSON checkpoint; doubles round-trip exactly.
std::string SerializeLinearModel(const LinearModel& model);
LinearModel ParseLinearModel(const std::string& text);

}  // namespace labelaudit

#endif  // LABELAUDIT_BASE_CLASSIFIER_H_
