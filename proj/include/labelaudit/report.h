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

// The audit report: one record per labelled node, ranked by mislabel score,
// plus the configuration and transition estimate that produced it.
//
// JSON layout (schema 1):
//   {
//     "schema": 1,
//     "dataset": "...",
//     "num_nodes": n, "num_classes": c,
//     "config": {"k_hops", "threshold_policy", "threshold", "seed",
//                "synthetic_ratio", "base_source", "conformal"?},
//     "transition": {...},
//     "records": [{"node_id", "given_label", "split", "mislabel_score",
//                  "flagged", "suggested_label", "probs"}, ...],
//     "excluded": [{"node_id", "probs"}, ...]
//   }
// Records are sorted by descending score, ties by ascending node id.
// "excluded" lists unlabelled nodes, which are not audited.

#ifndef LABELAUDIT_REPORT_H_
#define LABELAUDIT_REPORT_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "labelaudit/audit.h"
#include "labelaudit/base_classifier.h"
#include "labelaudit/graph.h"
#include "labelaudit/policy.h"
#include "labelaudit/transition.h"

namespace labelaudit {

inline constexpr int kReportSchema = 1;

struct AuditRecord {
  std::size_t node_id = 0;
  int given_label = 0;
  Split split = Split::kTest;
  double score = 0.0;
  bool flagged = false;
  std::optional<int> suggested_label;
  std::vector<double> probs;

  friend bool operator==(const AuditRecord&, const AuditRecord&) = default;
};

struct ExcludedNode {
  std::size_t node_id = 0;
  std::vector<double> probs;

  friend bool operator==(const ExcludedNode&, const ExcludedNode&) = default;
};

struct ReportConfig {
  int k_hops = 2;
  std::string threshold_policy = "fixed:0.97";
  double threshold = 0.97;
  std::uint64_t seed = 0;
  double synthetic_ratio = 0.5;
  std::string base_source;  // "train" or the softmax file path
  std::optional<ConformalThreshold> conformal;
};

struct AuditReport {
  std::string dataset;
  std::size_t num_nodes = 0;
  int num_classes = 0;
  ReportConfig config;
  TransitionModel transition;
  std::vector<AuditRecord> records;
  std::vector<ExcludedNode> excluded;

  // Record for a node id, or null for unlabelled or unknown ids.
  const AuditRecord* Find(std::size_t node_id) const;
  // Prediction row for any node id, or null when out of range.
  const std::vector<double>* Probs(std::size_t node_id) const;
};

// Applies the policy to the scores of the labelled nodes and assembles the
// ranked report.
AuditReport BuildReport(const Graph& g, const SoftmaxMatrix& p,
                        const AuditResult& audit, const ThresholdPolicy& policy,
                        ReportConfig config, std::string dataset);

std::string ReportToJson(const AuditReport& report);
AuditReport ReportFromJson(const std::string& text);

}  // namespace labelaudit

#endif  // LABELAUDIT_REPORT_H_
