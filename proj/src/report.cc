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

#include "json.hpp"
#include "labelaudit/detector.h"
#include "labelaudit/error.h"
#include "report_json.h"

namespace labelaudit {
namespace {

constexpr char kModule[] = "cli";

using nlohmann::json;

json ConformalJson(const ConformalThreshold& t) {
  return {{"mode", ConformalModeName(t.mode)}, {"alpha", t.alpha}, {"p", t.p},
          {"N", t.n_total},  {"B", t.b_index},  {"lambda", t.lambda}};
}

ConformalThreshold ConformalFrom(const json& j) {
  ConformalThreshold t;
  const auto mode = j.at("mode").get<std::string>();
  if (mode == "false_positive") {
    t.mode = ConformalMode::kFalsePositive;
  } else if (mode == "false_negative") {
    t.mode = ConformalMode::kFalseNegative;
  } else {
    throw DataError(kModule, "unknown conformal mode '" + mode + "'");
  }
  t.alpha = j.at("alpha").get<double>();
  t.p = j.at("p").get<double>();
  t.n_total = j.at("N").get<std::size_t>();
  t.b_index = j.at("B").get<std::size_t>();
  t.lambda = j.at("lambda").get<double>();
  return t;
}

}  // namespace

const AuditRecord* AuditReport::Find(std::size_t node_id) const {
  for (const auto& r : records) {
    if (r.node_id == node_id) return &r;
  }
  return nullptr;
}

const std::vector<double>* AuditReport::Probs(std::size_t node_id) const {
  if (const auto* r = Find(node_id)) return &r->probs;
  for (const auto& e : excluded) {
    if (e.node_id == node_id) return &e.probs;
  }
  return nullptr;
}

AuditReport BuildReport(const Graph& g, const SoftmaxMatrix& p,
                        const AuditResult& audit, const ThresholdPolicy& policy,
                        ReportConfig config, std::string dataset) {
  AuditReport report;
  report.dataset = std::move(dataset);
  report.num_nodes = g.num_nodes;
  report.num_classes = g.num_classes;
  report.transition = audit.transition;

  std::vector<std::size_t> labelled;
  std::vector<double> scores;
  for (std::size_t v = 0; v < g.num_nodes; ++v) {
    const auto row = p.row(v);
    if (g.labels[v] < 0) {
      report.excluded.push_back({v, {row.begin(), row.end()}});
      continue;
    }
    labelled.push_back(v);
    scores.push_back(audit.scores[v]);
  }
  const PolicyDecision decision = ApplyPolicy(policy, scores);
  config.threshold_policy = policy.ToString();
  config.threshold = decision.threshold;
  config.conformal = decision.conformal;
  report.config = std::move(config);

  for (std::size_t i = 0; i < labelled.size(); ++i) {
    const std::size_t v = labelled[i];
    const auto row = p.row(v);
    AuditRecord r;
    r.node_id = v;
    r.given_label = g.labels[v];
    r.split = g.splits[v];
    r.score = scores[i];
    r.flagged = decision.flags[i];
    if (r.flagged) r.suggested_label = static_cast<int>(ArgMax(row));
    r.probs.assign(row.begin(), row.end());
    report.records.push_back(std::move(r));
  }
  std::sort(report.records.begin(), report.records.end(),
            [](const AuditRecord& a, const AuditRecord& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.node_id < b.node_id;
            });
  return report;
}

std::string ReportToJson(const AuditReport& report) {
  json j;
  j["schema"] = kReportSchema;
  j["dataset"] = report.dataset;
  j["num_nodes"] = report.num_nodes;
  j["num_classes"] = report.num_classes;
  const auto& c = report.config;
  j["config"] = {{"k_hops", c.k_hops},
                 {"threshold_policy", c.threshold_policy},
                 {"threshold", c.threshold},
                 {"seed", c.seed},
                 {"synthetic_ratio", c.synthetic_ratio},
                 {"base_source", c.base_source}};
  if (c.conformal) j["config"]["conformal"] = ConformalJson(*c.conformal);
  j["transition"] = json::parse(TransitionToJson(report.transition));
  json records = json::array();
  for (const auto& r : report.records) {
    records.push_back(internal::RecordToJson(r));
  }
  j["records"] = std::move(records);
  json excluded = json::array();
  for (const auto& e : report.excluded) {
    excluded.push_back({{"node_id", e.node_id}, {"probs", e.probs}});
  }
  j["excluded"] = std::move(excluded);
  return j.dump(1) + "\n";
}

AuditReport ReportFromJson(const std::string& text) {
  try {
    const auto j = json::parse(text);
    if (j.at("schema").get<int>() != kReportSchema) {
      throw DataError(kModule, "unsupported report schema " + j.at("schema").dump());
    }
    AuditReport report;
    report.dataset = j.at("dataset").get<std::string>();
    report.num_nodes = j.at("num_nodes").get<std::size_t>();
    report.num_classes = j.at("num_classes").get<int>();
    const auto& c = j.at("config");
    report.config.k_hops = c.at("k_hops").get<int>();
    report.config.threshold_policy = c.at("threshold_policy").get<std::string>();
    report.config.threshold = c.at("threshold").get<double>();
    report.config.seed = c.at("seed").get<std::uint64_t>();
    report.config.synthetic_ratio = c.at("synthetic_ratio").get<double>();
    report.config.base_source = c.at("base_source").get<std::string>();
    if (c.contains("conformal")) report.config.conformal = ConformalFrom(c.at("conformal"));
    report.transition = TransitionFromJson(j.at("transition").dump());
    for (const auto& r : j.at("records")) {
      AuditRecord rec;
      rec.node_id = r.at("node_id").get<std::size_t>();
      rec.given_label = r.at("given_label").get<int>();
      const auto split = ParseSplit(r.at("split").get<std::string>());
      if (!split) throw DataError(kModule, "unknown split in report record");
      rec.split = *split;
      rec.score = r.at("mislabel_score").get<double>();
      rec.flagged = r.at("flagged").get<bool>();
      if (!r.at("suggested_label").is_null()) {
        rec.suggested_label = r.at("suggested_label").get<int>();
      }
      rec.probs = r.at("probs").get<std::vector<double>>();
      report.records.push_back(std::move(rec));
    }
    for (const auto& e : j.at("excluded")) {
      report.excluded.push_back(
          {e.at("node_id").get<std::size_t>(), e.at("probs").get<std::vector<double>>()});
    }
    std::vector<bool> seen(report.num_nodes, false);
    auto mark = [&](std::size_t v) {
      if (v >= report.num_nodes || seen[v]) {
        throw DataError(kModule, "report does not cover every node exactly once");
      }
      seen[v] = true;
    };
    for (const auto& r : report.records) mark(r.node_id);
    for (const auto& e : report.excluded) mark(e.node_id);
    if (report.records.size() + report.excluded.size() != report.num_nodes) {
      throw DataError(kModule, "report does not cover every node exactly once");
    }
    return report;
  } catch (const json::exception& e) {
    throw DataError(kModule, std::string("malformed audit report: ") + e.what());
  }
}

}  // namespace labelaudit
