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

#include "labelaudit/report.h"

#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "labelaudit/error.h"
#include "labelaudit/sbm.h"

namespace labelaudit {
namespace {

struct Fixture {
  Graph g;
  SoftmaxMatrix p;
  AuditResult audit;
};

// Small SBM with a handful of unlabelled nodes.
const Fixture& Shared() {
  static const Fixture f = [] {
    SbmConfig cfg;
    cfg.n = 300;
    cfg.c = 3;
    cfg.p_in = 0.05;
    cfg.p_out = 0.005;
    cfg.seed = 11;
    Fixture out;
    out.g = GenerateSbm(cfg);
    for (std::size_t v = 0; v < out.g.num_nodes; v += 37) {
      out.g.labels[v] = kUnlabeled;
      out.g.splits[v] = Split::kExcluded;
    }
    out.g.Validate();
    out.p = TrainBase(out.g, BaseTrainConfig{}).probs;
    AuditConfig audit_cfg;
    audit_cfg.seed = 4;
    out.audit = RunAudit(out.g, out.p, audit_cfg);
    return out;
  }();
  return f;
}

TEST_CASE("parse_policy accepted forms") {
  const auto fixed = ParsePolicy("fixed:0.9");
  CHECK(fixed.kind == ThresholdPolicy::Kind::kFixed);
  CHECK(fixed.value == 0.9);
  const auto bayes = ParsePolicy("bayes:0.1");
  CHECK(bayes.kind == ThresholdPolicy::Kind::kBayes);
  CHECK(bayes.value == 0.1);
  const auto fp = ParsePolicy("conformal-fp:0.1,0.05");
  CHECK(fp.kind == ThresholdPolicy::Kind::kConformalFp);
  CHECK(fp.alpha == 0.1);
  CHECK(fp.p == 0.05);
  CHECK(ParsePolicy("conformal-fn:0.2,0.1").kind == ThresholdPolicy::Kind::kConformalFn);
  for (const char* text : {"fixed:0.97", "bayes:0.25", "conformal-fp:0.1,0.05",
                           "conformal-fn:0.3,0"}) {
    CHECK(ParsePolicy(text).ToString() == text);
  }
}

TEST_CASE("parse_policy rejects malformed input") {
  for (const char* text : {"", "0.97", "fixed:", "fixed:abc", "fixed:1.5", "bayes:0",
                           "bayes:1", "conformal-fp:0.1", "conformal-fp:0,0.1",
                           "conformal-fn:0.1,1", "median:0.5", "fixed:0.9x"}) {
    CAPTURE(text);
    CHECK_THROWS_AS(ParsePolicy(text), Error);
  }
}

TEST_CASE("apply_policy") {
  const std::vector<double> scores = {0.1, 0.5, 0.9, 0.97, 0.99};
  const auto fixed = ApplyPolicy(ParsePolicy("fixed:0.97"), scores);
  CHECK(fixed.flags == std::vector<bool>{false, false, false, false, true});
  CHECK_FALSE(fixed.conformal.has_value());

  const auto bayes = ApplyPolicy(ParsePolicy("bayes:0.5"), scores);
  CHECK(bayes.threshold == doctest::Approx(0.5));
  CHECK(bayes.flags == std::vector<bool>{false, false, true, true, true});

  std::vector<double> many;
  for (int i = 0; i < 100; ++i) many.push_back((i + 0.5) / 100.0);
  const auto fp = ApplyPolicy(ParsePolicy("conformal-fp:0.1,0.1"), many);
  REQUIRE(fp.conformal.has_value());
  const auto direct = FpThreshold(many, 0.1, 0.1);
  CHECK(fp.conformal->b_index == direct.b_index);
  CHECK(fp.threshold == direct.lambda);
  for (std::size_t i = 0; i < many.size(); ++i) CHECK(fp.flags[i] == (many[i] > direct.lambda));
}

TEST_CASE("build_report ranks labelled nodes and applies the policy") {
  const auto& f = Shared();
  const auto policy = ParsePolicy("fixed:0.5");
  ReportConfig cfg;
  cfg.threshold_policy = policy.ToString();
  const auto report = BuildReport(f.g, f.p, f.audit, policy, cfg, "sbm");

  const auto labelled = f.g.num_nodes - f.g.NodesIn(Split::kExcluded).size();
  CHECK(report.records.size() == labelled);
  CHECK(report.records.size() + report.excluded.size() == f.g.num_nodes);
  CHECK(report.config.threshold == 0.5);
  for (std::size_t i = 1; i < report.records.size(); ++i) {
    const auto& a = report.records[i - 1];
    const auto& b = report.records[i];
    CHECK((a.score > b.score || (a.score == b.score && a.node_id < b.node_id)));
  }
  std::size_t flagged = 0;
  for (const auto& r : report.records) {
    CHECK(r.score == f.audit.scores[r.node_id]);
    CHECK(r.given_label == f.g.labels[r.node_id]);
    CHECK(r.split == f.g.splits[r.node_id]);
    CHECK(r.flagged == (r.score > 0.5));
    CHECK(r.suggested_label.has_value() == r.flagged);
    if (r.suggested_label) {
      const auto row = f.p.row(r.node_id);
      CHECK(*r.suggested_label ==
            static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin()));
    }
    CHECK(r.probs.size() == static_cast<std::size_t>(f.g.num_classes));
    flagged += r.flagged;
  }
  CHECK(flagged > 0);
  for (const auto& e : report.excluded) {
    CHECK(f.g.labels[e.node_id] == kUnlabeled);
    CHECK(report.Find(e.node_id) == nullptr);
    CHECK(report.Probs(e.node_id) != nullptr);
  }
  CHECK(report.Probs(f.g.num_nodes) == nullptr);
}

TEST_CASE("report JSON round-trip") {
  const auto& f = Shared();
  for (const char* text : {"fixed:0.97", "conformal-fn:0.2,0.05"}) {
    CAPTURE(text);
    const auto policy = ParsePolicy(text);
    ReportConfig cfg;
    cfg.threshold_policy = policy.ToString();
    cfg.seed = 4;
    cfg.base_source = "train";
    const auto report = BuildReport(f.g, f.p, f.audit, policy, cfg, "sbm");
    CHECK(report.config.conformal.has_value() ==
          (policy.kind == ThresholdPolicy::Kind::kConformalFn));
    const std::string text_once = ReportToJson(report);
    const auto back = ReportFromJson(text_once);
    CHECK(back.records == report.records);
    CHECK(back.excluded == report.excluded);
    CHECK(back.config.seed == 4);
    CHECK(ReportToJson(back) == text_once);
  }
}

TEST_CASE("report JSON validation") {
  const auto& f = Shared();
  const auto policy = ParsePolicy("fixed:0.97");
  const auto report = BuildReport(f.g, f.p, f.audit, policy, ReportConfig{}, "sbm");
  auto j = ReportToJson(report);
  CHECK_THROWS_AS(ReportFromJson("{}"), Error);
  CHECK_THROWS_AS(ReportFromJson("not json"), Error);
  const auto pos = j.find("\"schema\": 1");
  REQUIRE(pos != std::string::npos);
  j.replace(pos, 11, "\"schema\": 9");
  CHECK_THROWS_AS(ReportFromJson(j), Error);
}

}  // namespace
}  // namespace labelaudit
