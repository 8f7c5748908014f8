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

// Binary mislabel detector: a small ReLU MLP with a sigmoid output, trained
// with mean absolute error against 0/1 flip targets.

#ifndef LABELAUDIT_DETECTOR_H_
#define LABELAUDIT_DETECTOR_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "labelaudit/base_classifier.h"
#include "labelaudit/matrix.h"

namespace labelaudit {

inline constexpr double kDefaultFlagThreshold = 0.97;

struct DetectorConfig {
  std::vector<std::size_t> hidden = {32, 32};
  double step = 0.05;
  double momentum = 0.9;
  int max_epochs = 500;
  int patience = 25;
  double holdout_fraction = 0.1;
  std::uint64_t seed = 0;

  friend bool operator==(const DetectorConfig&, const DetectorConfig&) = default;
};

// Parameters are stored flat, layer by layer: the out x in weight block
// (row-major) followed by the out-length bias.
struct DetectorModel {
  std::vector<std::size_t> layer_sizes;  // input, hidden..., 1
  std::vector<double> params;
  DetectorConfig config;

  std::size_t input_dim() const { return layer_sizes.front(); }
  std::size_t num_layers() const { return layer_sizes.size() - 1; }
  // Offset of layer l's weight block in params; its bias follows the block.
  std::size_t WeightOffset(std::size_t l) const;

  friend bool operator==(const DetectorModel&, const DetectorModel&) = default;
};

// Seeded He-style initialization; biases start at zero.
DetectorModel InitDetector(std::size_t input_dim, const DetectorConfig& config);

// Mean |sigmoid(out) - target| over `rows` of z, and its gradient with
// respect to params (written to `grad` when non-null).
double L1Loss(const DetectorModel& model, const DenseMatrix& z,
              std::span<const double> targets, std::span<const std::size_t> rows,
              std::vector<double>* grad);

struct DetectorTrainResult {
  DetectorModel model;
  double train_mae = 0.0;
  double holdout_mae = 0.0;
  int epochs = 0;
};

// Rows of z are training examples; flipped[i] is the target of row i.
// Needs at least 20 rows and both target values.
DetectorTrainResult TrainDetector(const DenseMatrix& z,
                                  const std::vector<bool>& flipped,
                                  const DetectorConfig& config);

double ScoreRow(const DetectorModel& model, std::span<const double> features);
std::vector<double> Score(const DetectorModel& model, const DenseMatrix& z);

// flags[v] = scores[v] > threshold.
std::vector<bool> Classify(std::span<const double> scores, double threshold);

// Prior-corrected cutoff for a detector trained on balanced data: flag when
// the balanced-prior score exceeds 1 - expected_rate.
double BayesThreshold(double expected_rate);

// argmax of the prediction row for flagged nodes; ties to the smallest id.
std::vector<std::optional<int>> SuggestCorrections(const std::vector<bool>& flags,
                                                   const SoftmaxMatrix& p);

// Versioned JSON checkpoint; round-trips exactly.
std::string SerializeDetector(const DetectorModel& model);
DetectorModel ParseDetector(const std::string& text);

}  // namespace labelaudit

#endif  // LABELAUDIT_DETECTOR_H_
