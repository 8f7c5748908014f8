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

// Synthetic label corruption with ground-truth flip flags.
//
// Every injector is a pure function of (labels, node set, parameters, seed).
// Unlabelled nodes in the node set are never touched.

#ifndef LABELAUDIT_NOISE_H_
#define LABELAUDIT_NOISE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "labelaudit/matrix.h"

namespace labelaudit {

struct CorruptedLabels {
  std::vector<int> labels_c;
  std::vector<int> original;
  std::vector<bool> flipped;
  std::uint64_t seed = 0;

  std::size_t NumFlipped() const;
  friend bool operator==(const CorruptedLabels&,
                         const CorruptedLabels&) = default;
};

enum class NoiseKind { kSymmetric, kAsymmetric };
const char* NoiseName(NoiseKind kind);

// floor(ratio * |nodes|) nodes drawn uniformly without replacement, returned
// in ascending id order.
std::vector<std::size_t> SampleSyntheticSet(std::span<const std::size_t> nodes,
                                            double ratio, std::uint64_t seed);

// Relabels every node in `nodes` to a class different from its own, with
// probability proportional to the off-diagonal part of its conditional
// column. Columns whose off-diagonal mass is below 1e-12 draw uniformly.
CorruptedLabels FlipByTransition(std::span<const int> labels,
                                 std::span<const std::size_t> nodes,
                                 const DenseMatrix& conditional,
                                 std::uint64_t seed);

// Flips exactly floor(eps * |labelled nodes|) nodes, each to a uniformly
// chosen other class.
CorruptedLabels InjectSymmetric(std::span<const int> labels,
                                std::span<const std::size_t> nodes, int c,
                                double eps, std::uint64_t seed);

// Flips exactly floor(eps * n_i) nodes of each class i to (i + 1) mod c.
CorruptedLabels InjectAsymmetric(std::span<const int> labels,
                                 std::span<const std::size_t> nodes, int c,
                                 double eps, std::uint64_t seed);

CorruptedLabels InjectNoise(NoiseKind kind, std::span<const int> labels,
                            std::span<const std::size_t> nodes, int c,
                            double eps, std::uint64_t seed);

// CSV with header node_id,original,corrupted,flipped (flipped is 0 or 1).
// The seed is not part of the file.
std::string FormatCorruptedLabels(const CorruptedLabels& corrupted);
CorruptedLabels ParseCorruptedLabels(const std::string& text,
                                     const std::string& path);

}  // namespace labelaudit

#endif  // LABELAUDIT_NOISE_H_
