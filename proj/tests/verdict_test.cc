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

#include "labelaudit/verdict.h"

#include <sstream>

#include "doctest.h"
#include "labelaudit/error.h"
#include "test_util.h"

namespace labelaudit {
namespace {

constexpr std::int64_t kSec = 1000000000;

// Six labelled nodes over three classes plus one unlabelled node (id 6).
AuditReport SmallReport() {
  AuditReport r;
  r.dataset = "toy";
  r.num_nodes = 7;
  r.num_classes = 3;
  const int labels[] = {0, 1, 2, 0, 1, 2};
  const Split splits[] = {Split::kTrain, Split::kTrain, Split::kVal,
                          Split::kVal,   Split::kTest,  Split::kTest};
  for (std::size_t v = 0; v < 6; ++v) {
    AuditRecord rec;
    rec.node_id = v;
    rec.given_label = labels[v];
    rec.split = splits[v];
    rec.score = 0.1 * static_cast<double>(6 - v);
    rec.probs = {1.0 / 3, 1.0 / 3, 1.0 / 3};
    r.records.push_back(rec);
  }
  r.excluded.push_back({6, {0.5, 0.25, 0.25}});
  return r;
}

// The label and split files the report was built from, written by hand.
const char kLabels[] =
    "node_id,label\n0,0\n1,1\n2,2\n3,0\n4,1\n5,2\n6,excluded\n";
const char kSplits[] =
    "node_id,split\n0,train\n1,train\n2,val\n3,val\n4,test\n5,test\n";

Verdict Make(std::size_t node, VerdictClass cls, std::int64_t t,
             std::optional<int> corrected = std::nullopt) {
  Verdict v;
  v.node_id = node;
  v.verdict = cls;
  v.corrected_label = corrected;
  v.reviewer = "r";
  v.timestamp = "t" + std::to_string(t);
  v.time_ns = t;
  return v;
}

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

TEST_CASE("rfc3339 parsing") {
  CHECK(ParseRfc3339("1970-01-01T00:00:00Z") == 0);
  CHECK(ParseRfc3339("2000-01-01T00:00:00Z") == 946684800 * kSec);
  CHECK(ParseRfc3339("2026-10-18T12:30:15Z") == 1792326615 * kSec);
  CHECK(ParseRfc3339("1970-01-01T01:00:00+01:00") == 0);
  CHECK(ParseRfc3339("1969-12-31T19:00:00-05:00") == 0);
  CHECK(ParseRfc3339("1970-01-01t00:00:00.5z") == kSec / 2);
  CHECK(ParseRfc3339("1970-01-01T00:00:00.000000001Z") == 1);
  CHECK(ParseRfc3339("1969-12-31T23:59:59Z") == -kSec);
  CHECK(ParseRfc3339("2024-02-29T00:00:00Z").has_value());
  for (const char* bad :
       {"", "2023-02-29T00:00:00Z", "2026-13-01T00:00:00Z", "2026-01-01T24:00:00Z",
        "2026-01-01T00:00:00", "2026-01-01 00:00Z", "2026-01-01T00:00:00.Z",
        "2026-01-01T00:00:00+0100", "2026-01-01T00:00:00Zjunk", "26-01-01T00:00:00Z"}) {
    CAPTURE(bad);
    CHECK_FALSE(ParseRfc3339(bad).has_value());
  }
}

TEST_CASE("verdict parsing and diagnostics") {
  std::vector<VerdictIssue> issues;
  const auto ok = ParseVerdict(
      R"({"node_id":5,"verdict":"clear_mislabel","corrected_label":2,"reviewer":"a","timestamp":"2026-01-02T03:04:05Z"})",
      7, 3, &issues);
  REQUIRE(ok.has_value());
  CHECK(issues.empty());
  CHECK(ok->node_id == 5);
  CHECK(ok->verdict == VerdictClass::kClearMislabel);
  CHECK(ok->corrected_label == 2);
  CHECK(ParseVerdict(FormatVerdict(*ok), 7, 3, nullptr) == ok);

  auto fields = [&](const char* text) {
    std::vector<std::string> out;
    CHECK_FALSE(ParseVerdict(text, 7, 3, &issues).has_value());
    for (const auto& i : issues) out.push_back(i.field);
    return out;
  };
  CHECK(fields("{") == std::vector<std::string>{""});
  CHECK(fields("[1]") == std::vector<std::string>{""});
  CHECK(fields("{}") ==
        std::vector<std::string>{"node_id", "verdict", "reviewer", "timestamp"});
  CHECK(fields(R"({"node_id":7,"verdict":"clear_ok","reviewer":"a","timestamp":"2026-01-02T03:04:05Z"})") ==
        std::vector<std::string>{"node_id"});
  CHECK(fields(R"({"node_id":-1,"verdict":"nope","reviewer":"","timestamp":"yesterday"})") ==
        std::vector<std::string>{"node_id", "verdict", "reviewer", "timestamp"});
  CHECK(fields(R"({"node_id":1,"verdict":"likely_mislabel","corrected_label":3,"reviewer":"a","timestamp":"2026-01-02T03:04:05Z"})") ==
        std::vector<std::string>{"corrected_label"});
  CHECK(fields(R"({"node_id":1,"verdict":"ambiguous","corrected_label":1,"reviewer":"a","timestamp":"2026-01-02T03:04:05Z"})") ==
        std::vector<std::string>{"corrected_label"});
}

TEST_CASE("verdict log parsing names the bad line") {
  const std::string good =
      R"({"node_id":1,"verdict":"clear_ok","reviewer":"a","timestamp":"2026-01-02T03:04:05Z"})";
  const auto log = ParseVerdictLog(good + "\n\n" + good + "\n", "v.jsonl", 7, 3);
  CHECK(log.size() == 2);
  try {
    ParseVerdictLog(good + "\n{\"node_id\":1}\n", "v.jsonl", 7, 3);
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("v.jsonl:2") != std::string::npos);
  }
}

TEST_CASE("resolve: latest timestamp wins, ties go to the later line") {
  const std::vector<Verdict> log = {
      Make(5, VerdictClass::kClearOk, 20), Make(5, VerdictClass::kAmbiguous, 10),
      Make(2, VerdictClass::kLikelyOk, 1), Make(2, VerdictClass::kClearMislabel, 1, 0),
      Make(3, VerdictClass::kLikelyOk, 4)};
  const auto eff = Resolve(log);
  CHECK(eff.by_node.size() == 3);
  CHECK(eff.by_node.at(5).verdict == VerdictClass::kClearOk);
  CHECK(eff.by_node.at(2).verdict == VerdictClass::kClearMislabel);
  CHECK(eff.by_node.at(3).verdict == VerdictClass::kLikelyOk);
  REQUIRE(eff.conflicts.size() == 2);
  CHECK(eff.conflicts[0].rfind("node 2:", 0) == 0);
  CHECK(eff.conflicts[1].rfind("node 5:", 0) == 0);
}

TEST_CASE("resolve matches a brute-force oracle on random logs") {
  RandomStream rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Verdict> log;
    const std::size_t len = 1 + rng.UniformInt(30);
    for (std::size_t i = 0; i < len; ++i) {
      log.push_back(Make(rng.UniformInt(5), kVerdictClasses[rng.UniformInt(5)],
                         static_cast<std::int64_t>(rng.UniformInt(6))));
    }
    const auto eff = Resolve(log);
    for (std::size_t node = 0; node < 5; ++node) {
      const Verdict* best = nullptr;
      for (const auto& v : log) {
        if (v.node_id == node && (!best || v.time_ns >= best->time_ns)) best = &v;
      }
      CHECK((best == nullptr) == (eff.by_node.count(node) == 0));
      if (best) CHECK(eff.by_node.at(node) == *best);
    }
  }
}

TEST_CASE("export with no verdicts reproduces the input files") {
  const auto out = ExportClean(SmallReport(), Resolve({}));
  CHECK(out.labels_csv == kLabels);
  CHECK(out.splits_csv == kSplits);
  CHECK(out.replaced == 0);
  CHECK(out.removed == 0);
}

TEST_CASE("export: a corrected mislabel changes exactly that row") {
  const auto out =
      ExportClean(SmallReport(), Resolve({Make(4, VerdictClass::kClearMislabel, 1, 2)}));
  const auto before = Lines(kLabels);
  const auto after = Lines(out.labels_csv);
  REQUIRE(before.size() == after.size());
  std::size_t differing = 0;
  for (std::size_t i = 0; i < before.size(); ++i) differing += before[i] != after[i];
  CHECK(differing == 1);
  CHECK(after[5] == "4,2");
  CHECK(out.splits_csv == kSplits);
  CHECK(out.replaced == 1);
}

TEST_CASE("export: removal keeps the node but drops its label and split") {
  const auto eff = Resolve({Make(2, VerdictClass::kAmbiguous, 1),
                            Make(3, VerdictClass::kLikelyMislabel, 1),
                            Make(0, VerdictClass::kClearOk, 1),
                            Make(1, VerdictClass::kLikelyOk, 1),
                            Make(6, VerdictClass::kAmbiguous, 1)});
  const auto out = ExportClean(SmallReport(), eff);
  CHECK(out.labels_csv ==
        "node_id,label\n0,0\n1,1\n2,excluded\n3,excluded\n4,1\n5,2\n6,excluded\n");
  CHECK(out.splits_csv == "node_id,split\n0,train\n1,train\n4,test\n5,test\n");
  CHECK(out.removed == 2);

  // The cleaned files load back as a graph.
  testing::TempDir dir("verdict_export");
  GraphFiles files;
  files.edges = dir.Write("edges.txt", "0 1\n1 2\n2 3\n3 4\n4 5\n5 6\n");
  files.labels = dir.Write("labels.csv", out.labels_csv);
  files.splits = dir.Write("splits.csv", out.splits_csv);
  const Graph g = LoadGraph(files, 3);
  CHECK(g.labels == std::vector<int>{0, 1, kUnlabeled, kUnlabeled, 1, 2, kUnlabeled});
  CHECK(g.splits[2] == Split::kExcluded);
}

}  // namespace
}  // namespace labelaudit
