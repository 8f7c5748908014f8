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

// Reviewer verdicts and the cleaned-dataset export.
//
// A verdict log is JSON lines, one object per line:
//   {"node_id": 5, "verdict": "clear_mislabel", "corrected_label": 2,
//    "reviewer": "a", "timestamp": "2026-01-02T03:04:05Z"}
// corrected_label is optional and only allowed on the two mislabel
// verdicts. A node's effective verdict is its entry with the latest
// timestamp; equal timestamps resolve to the later line.
//
// Export rules per node:
//   mislabel verdict with a correction      -> label replaced
//   mislabel verdict without a correction   -> label removed ("excluded")
//   ambiguous                               -> label removed
//   likely_ok / clear_ok / no verdict       -> kept
// Removed nodes stay in the label file with the `excluded` marker and are
// dropped from the split file.

#ifndef LABELAUDIT_VERDICT_H_
#define LABELAUDIT_VERDICT_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "labelaudit/report.h"

namespace labelaudit {

enum class VerdictClass {
  kClearMislabel,
  kLikelyMislabel,
  kAmbiguous,
  kLikelyOk,
  kClearOk,
};
inline constexpr std::array<VerdictClass, 5> kVerdictClasses = {
    VerdictClass::kClearMislabel, VerdictClass::kLikelyMislabel,
    VerdictClass::kAmbiguous, VerdictClass::kLikelyOk, VerdictClass::kClearOk};

std::string_view VerdictName(VerdictClass v);
std::optional<VerdictClass> ParseVerdictClass(std::string_view name);
bool IsMislabelVerdict(VerdictClass v);

// RFC 3339 date-time to nanoseconds since the Unix epoch (UTC).
std::optional<std::int64_t> ParseRfc3339(std::string_view text);

struct Verdict {
  std::size_t node_id = 0;
  VerdictClass verdict = VerdictClass::kAmbiguous;
  std::optional<int> corrected_label;
  std::string reviewer;
  std::string timestamp;
  std::int64_t time_ns = 0;

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

// Validation failure with one message per offending field.
struct VerdictIssue {
  std::string field;
  std::string message;
};

// Parses one JSON object. Node ids and corrected labels are range-checked
// against num_nodes / num_classes. Returns the issues instead of throwing.
std::optional<Verdict> ParseVerdict(std::string_view json_text, std::size_t num_nodes,
                                    int num_classes, std::vector<VerdictIssue>* issues);

// Canonical single-line JSON (no trailing newline).
std::string FormatVerdict(const Verdict& v);

// Parses a whole log; blank lines are skipped. Throws ParseError naming the
// line of the first invalid entry.
std::vector<Verdict> ParseVerdictLog(const std::string& text, const std::string& path,
                                     std::size_t num_nodes, int num_classes);

struct EffectiveVerdicts {
  std::map<std::size_t, Verdict> by_node;
  // One message per node that had more than one verdict.
  std::vector<std::string> conflicts;
};

EffectiveVerdicts Resolve(const std::vector<Verdict>& log);

// Per-class verdict counts over the audited (labelled) nodes.
struct ReviewProgress {
  std::size_t total_records = 0;
  std::size_t flagged = 0;
  std::size_t reviewed = 0;
  std::size_t flagged_reviewed = 0;
  std::array<std::size_t, kVerdictClasses.size()> by_class{};
};

ReviewProgress Progress(const AuditReport& report, const EffectiveVerdicts& verdicts);

struct CleanedDataset {
  std::string labels_csv;
  std::string splits_csv;
  std::size_t replaced = 0;
  std::size_t removed = 0;
};

CleanedDataset ExportClean(const AuditReport& report, const EffectiveVerdicts& verdicts);

}  // namespace labelaudit

#endif  // LABELAUDIT_VERDICT_H_
