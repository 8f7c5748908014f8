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

#include <cctype>

#include "json.hpp"
#include "labelaudit/error.h"

namespace labelaudit {
namespace {

constexpr char kModule[] = "review_service";

// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t DaysFromCivil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

bool Digits(std::string_view s, std::size_t pos, std::size_t count, int* out) {
  if (pos + count > s.size()) return false;
  int value = 0;
  for (std::size_t i = pos; i < pos + count; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    value = value * 10 + (s[i] - '0');
  }
  *out = value;
  return true;
}

bool LeapYear(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

}  // namespace

std::string_view VerdictName(VerdictClass v) {
  switch (v) {
    case VerdictClass::kClearMislabel:
      return "clear_mislabel";
    case VerdictClass::kLikelyMislabel:
      return "likely_mislabel";
    case VerdictClass::kAmbiguous:
      return "ambiguous";
    case VerdictClass::kLikelyOk:
      return "likely_ok";
    case VerdictClass::kClearOk:
      return "clear_ok";
  }
  return "";
}

std::optional<VerdictClass> ParseVerdictClass(std::string_view name) {
  for (VerdictClass v : kVerdictClasses) {
    if (VerdictName(v) == name) return v;
  }
  return std::nullopt;
}

bool IsMislabelVerdict(VerdictClass v) {
  return v == VerdictClass::kClearMislabel || v == VerdictClass::kLikelyMislabel;
}

std::optional<std::int64_t> ParseRfc3339(std::string_view s) {
  int year, month, day, hour, minute, second;
  if (!Digits(s, 0, 4, &year) || s.size() < 19 || s[4] != '-' ||
      !Digits(s, 5, 2, &month) || s[7] != '-' || !Digits(s, 8, 2, &day) ||
      (s[10] != 'T' && s[10] != 't' && s[10] != ' ') || !Digits(s, 11, 2, &hour) ||
      s[13] != ':' || !Digits(s, 14, 2, &minute) || s[16] != ':' ||
      !Digits(s, 17, 2, &second)) {
    return std::nullopt;
  }
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month < 1 || month > 12 || day < 1 ||
      day > kDays[month - 1] + (month == 2 && LeapYear(year)) || hour > 23 ||
      minute > 59 || second > 60) {
    return std::nullopt;
  }
  std::size_t pos = 19;
  std::int64_t nanos = 0;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    int digits = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      if (digits < 9) nanos = nanos * 10 + (s[pos] - '0');
      ++digits;
      ++pos;
    }
    if (digits == 0) return std::nullopt;
    for (int i = digits; i < 9; ++i) nanos *= 10;
  }
  std::int64_t offset_minutes = 0;
  if (pos < s.size() && (s[pos] == 'Z' || s[pos] == 'z')) {
    ++pos;
  } else if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
    int oh, om;
    if (!Digits(s, pos + 1, 2, &oh) || pos + 3 >= s.size() || s[pos + 3] != ':' ||
        !Digits(s, pos + 4, 2, &om) || oh > 23 || om > 59) {
      return std::nullopt;
    }
    offset_minutes = (s[pos] == '+' ? 1 : -1) * (oh * 60 + om);
    pos += 6;
  } else {
    return std::nullopt;
  }
  if (pos != s.size()) return std::nullopt;
  const std::int64_t seconds = DaysFromCivil(year, static_cast<unsigned>(month),
                                             static_cast<unsigned>(day)) *
                                   86400 +
                               hour * 3600 + minute * 60 + second - offset_minutes * 60;
  return seconds * 1000000000 + nanos;
}

std::optional<Verdict> ParseVerdict(std::string_view json_text, std::size_t num_nodes,
                                    int num_classes, std::vector<VerdictIssue>* issues) {
  std::vector<VerdictIssue> found;
  auto fail = [&](std::string field, std::string message) {
    found.push_back({std::move(field), std::move(message)});
  };
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception&) {
    fail("", "not valid JSON");
  }
  Verdict v;
  if (found.empty() && !j.is_object()) fail("", "expected a JSON object");
  if (found.empty()) {
    const auto id = j.find("node_id");
    if (id == j.end()) {
      fail("node_id", "missing");
    } else if (!id->is_number_unsigned()) {
      fail("node_id", "must be a non-negative integer");
    } else if (id->get<std::uint64_t>() >= num_nodes) {
      fail("node_id", "unknown node " + id->dump());
    } else {
      v.node_id = id->get<std::size_t>();
    }

    const auto verdict = j.find("verdict");
    std::optional<VerdictClass> cls;
    if (verdict == j.end()) {
      fail("verdict", "missing");
    } else if (!verdict->is_string() ||
               !(cls = ParseVerdictClass(verdict->get<std::string>()))) {
      fail("verdict",
           "must be one of clear_mislabel, likely_mislabel, ambiguous, likely_ok, clear_ok");
    } else {
      v.verdict = *cls;
    }

    const auto corrected = j.find("corrected_label");
    if (corrected != j.end() && !corrected->is_null()) {
      if (!corrected->is_number_integer()) {
        fail("corrected_label", "must be an integer");
      } else if (corrected->get<std::int64_t>() < 0 ||
                 corrected->get<std::int64_t>() >= num_classes) {
        fail("corrected_label", "must lie in [0, " + std::to_string(num_classes) + ")");
      } else if (cls && !IsMislabelVerdict(*cls)) {
        fail("corrected_label", "only allowed with a mislabel verdict");
      } else {
        v.corrected_label = corrected->get<int>();
      }
    }

    const auto reviewer = j.find("reviewer");
    if (reviewer == j.end()) {
      fail("reviewer", "missing");
    } else if (!reviewer->is_string() || reviewer->get<std::string>().empty()) {
      fail("reviewer", "must be a non-empty string");
    } else {
      v.reviewer = reviewer->get<std::string>();
    }

    const auto ts = j.find("timestamp");
    if (ts == j.end()) {
      fail("timestamp", "missing");
    } else if (!ts->is_string()) {
      fail("timestamp", "must be an RFC 3339 string");
    } else if (const auto ns = ParseRfc3339(ts->get<std::string>())) {
      v.timestamp = ts->get<std::string>();
      v.time_ns = *ns;
    } else {
      fail("timestamp", "not an RFC 3339 date-time: '" + ts->get<std::string>() + "'");
    }
  }
  if (issues) *issues = found;
  if (!found.empty()) return std::nullopt;
  return v;
}

std::string FormatVerdict(const Verdict& v) {
  nlohmann::json j;
  j["node_id"] = v.node_id;
  j["verdict"] = VerdictName(v.verdict);
  if (v.corrected_label) j["corrected_label"] = *v.corrected_label;
  j["reviewer"] = v.reviewer;
  j["timestamp"] = v.timestamp;
  return j.dump();
}

std::vector<Verdict> ParseVerdictLog(const std::string& text, const std::string& path,
                                     std::size_t num_nodes, int num_classes) {
  std::vector<Verdict> out;
  std::size_t line_no = 0, pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    const std::string_view line(text.data() + pos, end - pos);
    ++line_no;
    pos = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    std::vector<VerdictIssue> issues;
    auto v = ParseVerdict(line, num_nodes, num_classes, &issues);
    if (!v) {
      std::string msg;
      for (const auto& issue : issues) {
        if (!msg.empty()) msg += "; ";
        msg += issue.field.empty() ? issue.message : issue.field + ": " + issue.message;
      }
      throw ParseError(path, line_no, msg, kModule);
    }
    out.push_back(std::move(*v));
  }
  return out;
}

EffectiveVerdicts Resolve(const std::vector<Verdict>& log) {
  EffectiveVerdicts out;
  std::map<std::size_t, std::size_t> entries;
  for (const auto& v : log) {
    ++entries[v.node_id];
    auto it = out.by_node.find(v.node_id);
    if (it == out.by_node.end()) {
      out.by_node.emplace(v.node_id, v);
    } else if (v.time_ns >= it->second.time_ns) {
      it->second = v;
    }
  }
  for (const auto& [node, count] : entries) {
    if (count < 2) continue;
    const auto& winner = out.by_node.at(node);
    out.conflicts.push_back("node " + std::to_string(node) + ": " +
                            std::to_string(count) + " verdicts, using " +
                            std::string(VerdictName(winner.verdict)) + " by " +
                            winner.reviewer + " at " + winner.timestamp);
  }
  return out;
}

ReviewProgress Progress(const AuditReport& report, const EffectiveVerdicts& verdicts) {
  ReviewProgress out;
  out.total_records = report.records.size();
  for (const auto& r : report.records) {
    out.flagged += r.flagged;
    const auto it = verdicts.by_node.find(r.node_id);
    if (it == verdicts.by_node.end()) continue;
    ++out.reviewed;
    out.flagged_reviewed += r.flagged;
    ++out.by_class[static_cast<std::size_t>(it->second.verdict)];
  }
  return out;
}

CleanedDataset ExportClean(const AuditReport& report, const EffectiveVerdicts& verdicts) {
  Graph g;
  g.num_nodes = report.num_nodes;
  g.num_classes = report.num_classes;
  g.labels.assign(report.num_nodes, kUnlabeled);
  g.splits.assign(report.num_nodes, Split::kExcluded);
  for (const auto& r : report.records) {
    g.labels[r.node_id] = r.given_label;
    g.splits[r.node_id] = r.split;
  }
  CleanedDataset out;
  for (const auto& [node, v] : verdicts.by_node) {
    if (node >= g.num_nodes) throw DataError(kModule, "verdict for unknown node");
    if (g.labels[node] == kUnlabeled) continue;  // nothing to correct
    if (IsMislabelVerdict(v.verdict) && v.corrected_label) {
      g.labels[node] = *v.corrected_label;
      ++out.replaced;
    } else if (IsMislabelVerdict(v.verdict) || v.verdict == VerdictClass::kAmbiguous) {
      g.labels[node] = kUnlabeled;
      g.splits[node] = Split::kExcluded;
      ++out.removed;
    }
  }
  out.labels_csv = FormatLabels(g);
  out.splits_csv = FormatSplits(g);
  return out;
}

}  // namespace labelaudit
