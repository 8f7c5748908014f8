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

#include "labelaudit/audit.h"

#include "labelaudit/error.h"
#include "labelaudit/features.h"
#include "labelaudit/rng.h"

namespace labelaudit {
namespace {

enum Stage : std::uint64_t { kSyntheticSet = 1, kFlip = 2, kDetector = 3 };

std::vector<std::size_t> LabelledIn(const Graph& g, Split split) {
  std::vector<std::size_t> out;
  for (std::size_t v : g.NodesIn(split)) {
    if (g.labels[v] >= 0) out.push_back(v);
  }
  return out;
}

}  // namespace

std::uint64_t StageSeed(std::uint64_t seed, std::uint64_t stage) {
  return RandomStream(seed).Split(stage).NextU64();
}

AuditResult RunAudit(const Graph& g, const SoftmaxMatrix& p,
                     const AuditConfig& config) {
  if (p.num_nodes() != g.num_nodes || p.num_classes() != g.num_classes) {
    throw DataError("cli", "prediction matrix is " + std::to_string(p.num_nodes()) +
                               "x" + std::to_string(p.num_classes()) +
                               " but the graph has " + std::to_string(g.num_nodes) +
                               " nodes and " + std::to_string(g.num_classes) +
                               " classes");
  }
  const auto val = LabelledIn(g, Split::kVal);
  if (val.empty()) throw DataError("transition_estimator", "no labelled validation nodes");

  AuditResult result;
  result.transition = EstimateTransition(p, g.labels, val);
  result.synthetic_nodes =
      SampleSyntheticSet(val, config.synthetic_ratio, StageSeed(config.seed, kSyntheticSet));
  result.synthetic = FlipByTransition(g.labels, result.synthetic_nodes,
                                      result.transition.conditional,
                                      StageSeed(config.seed, kFlip));

  const NormalizedAdjacency a_norm(g);
  const DenseMatrix y = OneHot(g.labels, g.num_classes);
  const auto signals = PropagateSignals(a_norm, y, p, config.k_hops);

  const auto z_corrupt =
      AssembleFeatures(signals, OneHot(result.synthetic.labels_c, g.num_classes), p);
  DenseMatrix z_val(val.size(), z_corrupt.z.cols());
  std::vector<bool> targets(val.size());
  for (std::size_t i = 0; i < val.size(); ++i) {
    const auto src = z_corrupt.z.row(val[i]);
    std::copy(src.begin(), src.end(), z_val.row(i).begin());
    targets[i] = result.synthetic.flipped[val[i]];
  }
  DetectorConfig detector_config = config.detector;
  detector_config.seed = StageSeed(config.seed, kDetector);
  result.detector = TrainDetector(z_val, targets, detector_config);

  const auto z = AssembleFeatures(signals, y, p);
  result.scores = Score(result.detector.model, z.z);
  for (std::size_t v = 0; v < g.num_nodes; ++v) {
    if (g.labels[v] < 0) result.scores[v] = 0.0;
  }
  return result;
}

}  // namespace labelaudit
