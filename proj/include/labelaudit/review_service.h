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

// Local HTTP JSON API over an audit report for human triage.
//
//   GET  /api/report?offset=&limit=   ranked records (default 0, 50)
//   GET  /api/node/{id}               record, prediction row, effective
//                                     verdict and 1..K hop neighborhood
//   POST /api/verdict                 append one verdict to the log
//   GET  /api/progress                verdict counts per class
//   GET  /api/export[?file=labels|splits]
//                                     cleaned label and split files
//
// Errors are JSON objects {"error": ..., "issues": [{field, message}]?} with
// status 400 (malformed request), 404 (unknown node) or 500 (write failure).
//
// The verdict log is append-only JSON lines. Each accepted verdict is written
// with a single write() followed by fsync(); a failed write is truncated back
// so the log and the in-memory state never diverge. Writes are serialized,
// reads run concurrently against the state at request start.

#ifndef LABELAUDIT_REVIEW_SERVICE_H_
#define LABELAUDIT_REVIEW_SERVICE_H_

#include <functional>
#include <memory>
#include <ostream>
#include <string>

#include "labelaudit/graph.h"
#include "labelaudit/report.h"
#include "labelaudit/verdict.h"

namespace labelaudit {

class ReviewService {
 public:
  // Replays the verdict log (a missing file is an empty log). Conflicts
  // found while replaying are written to `log` when given.
  ReviewService(AuditReport report, const Graph& graph, std::string verdict_log,
                std::ostream* log = nullptr);
  ~ReviewService();
  ReviewService(const ReviewService&) = delete;
  ReviewService& operator=(const ReviewService&) = delete;

  // Binds host:port; port 0 picks a free port. Returns the bound port.
  int Bind(const std::string& host, int port);
  // Serves until Stop() is called.
  void Listen();
  void Stop();

  EffectiveVerdicts Verdicts() const;

  // Timestamp used for posted verdicts that carry none. Defaults to the
  // current UTC time.
  void SetClock(std::function<std::string()> clock);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Current UTC time as RFC 3339 with millisecond precision.
std::string NowRfc3339();

}  // namespace labelaudit

#endif  // LABELAUDIT_REVIEW_SERVICE_H_
