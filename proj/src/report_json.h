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

// JSON encoding shared by the report writer and the review service.

#ifndef LABELAUDIT_SRC_REPORT_JSON_H_
#define LABELAUDIT_SRC_REPORT_JSON_H_

#include "json.hpp"
#include "labelaudit/report.h"

namespace labelaudit::internal {

inline nlohmann::json RecordToJson(const AuditRecord& r) {
  return {{"node_id", r.node_id},
          {"given_label", r.given_label},
          {"split", SplitName(r.split)},
          {"mislabel_score", r.score},
          {"flagged", r.flagged},
          {"suggested_label",
           r.suggested_label ? nlohmann::json(*r.suggested_label) : nlohmann::json(nullptr)},
          {"probs", r.probs}};
}

}  // namespace labelaudit::internal

#endif  // LABELAUDIT_SRC_REPORT_JSON_H_
