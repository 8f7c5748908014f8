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

// The end-to-end scoring pipeline on one graph:
//
//   1. estimate the noise transition on the labelled validation nodes;
//   2. corrupt a random subset of them according to that transition;
//   3. build agreement features with the corrupted labels and train the
//      detector to recognise the corrupted nodes;
//   4. rebuild the features with the observed labels and score every node.

#ifndef LABELAUDIT_AUDIT_H_
#define LABELAUDIT_AUDIT_H_

#include <cstdint>
#include <vector>

#include "labelaudit/base_classifier.h"
#include "labelaudit/detector.h"
#include "labelaudit/graph.h"
#include "labelaudit/noise.h"
#include "labelaudit/transition.h"

namespace labelaudit {

struct AuditConfig {
  int k_hops = 2;
  double synthetic_ratio = 0.5;
  DetectorConfig detector;
  std::uint64_t seed = 0;
};

struct AuditResult {
  TransitionModel transition;
  std::vector<std::size_t> synthetic_nodes;
  CorruptedLabels synthetic;
  DetectorTrainResult detector;
  // One per node; unlabelled nodes score 0.
  std::vector<double> scores;
};

// Independent sub-seed for a named pipeline stage.
std::uint64_t StageSeed(std::uint64_t seed, std::uint64_t stage);

AuditResult RunAudit(const Graph& g, const SoftmaxMatrix& p,
                     const AuditConfig& config);

}  // namespace labelaudit

#endif  // LABELAUDIT_AUDIT_H_
