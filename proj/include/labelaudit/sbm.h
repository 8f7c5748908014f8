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

#ifndef LABELAUDIT_SBM_H_
#define LABELAUDIT_SBM_H_

#include <cstddef>
#include <cstdint>

#include "labelaudit/graph.h"

namespace labelaudit {

// Planted-partition stochastic block model with Gaussian node features.
struct SbmConfig {
  std::size_t n = 1000;
  int c = 5;
  double p_in = 0.02;   // edge probability within a class
  double p_out = 0.002; // edge probability across classes
  std::size_t d = 8;    // feature dimension
  // Class j has mean `signal` on coordinate (j mod d) and zero elsewhere;
  // every coordinate gets unit-variance Gaussian noise.
  double signal = 1.5;
  double train_fraction = 0.2;
  double val_fraction = 0.4;
  double test_fraction = 0.4;
  std::uint64_t seed = 0;

  // Throws UsageError unless 0 <= p_out < p_in <= 1, n >= c >= 1 and the
  // split fractions are non-negative and sum to 1.
  void Validate() const;
};

// Classes are balanced (sizes differ by at most one) and randomly placed;
// each pair is an edge independently; splits are stratified per class.
Graph GenerateSbm(const SbmConfig& config);

}  // namespace labelaudit

#endif  // LABELAUDIT_SBM_H_
