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

#include "labelaudit/review_service.h"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <chrono>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "httplib.h"
#include "json.hpp"
#include "labelaudit/csv.h"
#include "labelaudit/error.h"
#include "report_json.h"

namespace labelaudit {
namespace {

constexpr char kModule[] = "review_service";
constexpr std::size_t kDefaultPageSize = 50;

using nlohmann::json;

json VerdictJson(const Verdict& v) { return json::parse(FormatVerdict(v)); }

void Reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void Fail(httplib::Response& res, int status, const std::string& message,
          const std::vector<VerdictIssue>& issues = {}) {
  json body = {{"error", message}};
  if (!issues.empty()) {
    json list = json::array();
    for (const auto& i : issues) list.push_back({{"field", i.field}, {"message", i.message}});
    body["issues"] = std::move(list);
  }
  Reply(res, status, body);
}

std::optional<std::size_t> ParseCount(const std::string& text) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    return std::nullopt;
  }
  return value;
}

}  // namespace

std::string NowRfc3339() {
  const auto now = std::chrono::system_clock::now();
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      now.time_since_epoch())
                      .count();
  const std::time_t secs = static_cast<std::time_t>(ms / 1000);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[80];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec,
                static_cast<int>(ms % 1000));
  return buf;
}

struct ReviewService::Impl {
  AuditReport report;
  SparseMatrix adjacency;
  std::vector<int> labels;  // given label per node, kUnlabeled if excluded
  std::unordered_map<std::size_t, std::size_t> record_index;
  std::unordered_map<std::size_t, std::size_t> excluded_index;
  std::string log_path;
  bool needs_newline = false;

  mutable std::shared_mutex state_mu;  // guards verdicts
  std::mutex write_mu;                 // serializes log appends
  EffectiveVerdicts verdicts;
  std::function<std::string()> clock = NowRfc3339;
  std::ostream* log = nullptr;

  httplib::Server server;

  std::span<const double> Probs(std::size_t v) const {
    if (const auto it = record_index.find(v); it != record_index.end()) {
      return report.records[it->second].probs;
    }
    return report.excluded[excluded_index.at(v)].probs;
  }

  json NodeLabel(std::size_t v) const {
    return labels[v] == kUnlabeled ? json(nullptr) : json(labels[v]);
  }

  // Appends one line; on any failure the file is cut back to its old size.
  std::optional<std::string> Append(const std::string& line) {
    const int fd = ::open(log_path.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
    if (fd < 0) return std::string(std::strerror(errno));
    const off_t before = ::lseek(fd, 0, SEEK_END);
    const std::string buf = (needs_newline ? "\n" : "") + line + "\n";
    ssize_t written;
    do {
      written = ::write(fd, buf.data(), buf.size());
    } while (written < 0 && errno == EINTR);
    std::optional<std::string> error;
    if (written != static_cast<ssize_t>(buf.size())) {
      error = written < 0 ? std::strerror(errno) : "short write";
    } else if (::fsync(fd) != 0) {
      error = std::strerror(errno);
    }
    if (error && before >= 0 && ::ftruncate(fd, before) != 0) {
      *error += " (and truncation failed)";
    }
    ::close(fd);
    if (!error) needs_newline = false;
    return error;
  }

  void GetReport(const httplib::Request& req, httplib::Response& res) const {
    std::size_t offset = 0, limit = kDefaultPageSize;
    if (req.has_param("offset")) {
      const auto v = ParseCount(req.get_param_value("offset"));
      if (!v) return Fail(res, 400, "offset must be a non-negative integer");
      offset = *v;
    }
    if (req.has_param("limit")) {
      const auto v = ParseCount(req.get_param_value("limit"));
      if (!v) return Fail(res, 400, "limit must be a non-negative integer");
      limit = *v;
    }
    std::shared_lock lock(state_mu);
    json records = json::array();
    const std::size_t total = report.records.size();
    for (std::size_t i = std::min(offset, total); i < total && i - offset < limit; ++i) {
      const auto& r = report.records[i];
      json item = internal::RecordToJson(r);
      const auto it = verdicts.by_node.find(r.node_id);
      item["verdict"] = it == verdicts.by_node.end()
                            ? json(nullptr)
                            : json(VerdictName(it->second.verdict));
      records.push_back(std::move(item));
    }
    Reply(res, 200,
          {{"dataset", report.dataset},
           {"total", total},
           {"offset", offset},
           {"limit", limit},
           {"threshold_policy", report.config.threshold_policy},
           {"records", std::move(records)}});
  }

  void GetNode(const httplib::Request& req, httplib::Response& res) const {
    const auto id = ParseCount(req.matches[1]);
    if (!id) return Fail(res, 400, "node id must be a non-negative integer");
    if (*id >= report.num_nodes) {
      return Fail(res, 404, "unknown node " + std::string(req.matches[1]));
    }
    const std::size_t v = *id;
    json body;
    if (const auto it = record_index.find(v); it != record_index.end()) {
      body = internal::RecordToJson(report.records[it->second]);
      body["rank"] = it->second + 1;
    } else {
      body = {{"node_id", v},     {"given_label", nullptr}, {"split", nullptr},
              {"mislabel_score", nullptr}, {"flagged", false}, {"suggested_label", nullptr},
              {"probs", Probs(v)}, {"rank", nullptr}};
    }
    json hops = json::array();
    const auto layers = HopLayers(adjacency, v, report.config.k_hops);
    for (std::size_t k = 0; k < layers.size(); ++k) {
      std::vector<std::size_t> histogram(static_cast<std::size_t>(report.num_classes), 0);
      json neighbors = json::array();
      for (std::size_t u : layers[k]) {
        if (labels[u] != kUnlabeled) ++histogram[static_cast<std::size_t>(labels[u])];
        neighbors.push_back({{"node_id", u}, {"label", NodeLabel(u)}, {"probs", Probs(u)}});
      }
      hops.push_back({{"hop", k + 1},
                      {"label_histogram", histogram},
                      {"neighbors", std::move(neighbors)}});
    }
    body["hops"] = std::move(hops);
    std::shared_lock lock(state_mu);
    const auto it = verdicts.by_node.find(v);
    body["verdict"] = it == verdicts.by_node.end() ? json(nullptr) : VerdictJson(it->second);
    Reply(res, 200, body);
  }

  void PostVerdict(const httplib::Request& req, httplib::Response& res) {
    json j;
    try {
      j = json::parse(req.body);
    } catch (const json::exception&) {
      return Fail(res, 400, "malformed verdict", {{"", "not valid JSON"}});
    }
    if (j.is_object() && !j.contains("timestamp")) j["timestamp"] = clock();
    if (j.is_object() && j.contains("node_id") && j["node_id"].is_number_unsigned() &&
        j["node_id"].get<std::uint64_t>() >= report.num_nodes) {
      return Fail(res, 404, "unknown node " + j["node_id"].dump(),
                  {{"node_id", "unknown node " + j["node_id"].dump()}});
    }
    std::vector<VerdictIssue> issues;
    const auto verdict = ParseVerdict(j.dump(), report.num_nodes, report.num_classes, &issues);
    if (!verdict) return Fail(res, 400, "malformed verdict", issues);

    std::lock_guard write_lock(write_mu);
    if (const auto error = Append(FormatVerdict(*verdict))) {
      return Fail(res, 500, "could not write verdict log: " + *error);
    }
    std::unique_lock lock(state_mu);
    auto [it, inserted] = verdicts.by_node.try_emplace(verdict->node_id, *verdict);
    const bool conflict = !inserted;
    if (conflict) {
      if (verdict->time_ns >= it->second.time_ns) it->second = *verdict;
      const std::string note = "node " + std::to_string(verdict->node_id) +
                               ": new verdict, using " +
                               std::string(VerdictName(it->second.verdict)) + " by " +
                               it->second.reviewer + " at " + it->second.timestamp;
      verdicts.conflicts.push_back(note);
      if (log) *log << "review_service: conflict: " << note << '\n';
    }
    Reply(res, 200,
          {{"accepted", VerdictJson(*verdict)},
           {"effective", VerdictJson(it->second)},
           {"conflict", conflict}});
  }

  void GetProgress(httplib::Response& res) const {
    std::shared_lock lock(state_mu);
    const ReviewProgress p = Progress(report, verdicts);
    json counts = json::object(), fractions = json::object();
    for (VerdictClass cls : kVerdictClasses) {
      const auto n = p.by_class[static_cast<std::size_t>(cls)];
      counts[std::string(VerdictName(cls))] = n;
      fractions[std::string(VerdictName(cls))] =
          p.reviewed == 0 ? 0.0 : static_cast<double>(n) / static_cast<double>(p.reviewed);
    }
    Reply(res, 200,
          {{"total_records", p.total_records},
           {"flagged", p.flagged},
           {"reviewed", p.reviewed},
           {"flagged_reviewed", p.flagged_reviewed},
           {"counts", std::move(counts)},
           {"fractions", std::move(fractions)}});
  }

  void GetExport(const httplib::Request& req, httplib::Response& res) const {
    CleanedDataset out;
    {
      std::shared_lock lock(state_mu);
      out = ExportClean(report, verdicts);
    }
    if (!req.has_param("file")) {
      return Reply(res, 200,
                   {{"labels_csv", out.labels_csv},
                    {"splits_csv", out.splits_csv},
                    {"replaced", out.replaced},
                    {"removed", out.removed}});
    }
    const auto file = req.get_param_value("file");
    if (file != "labels" && file != "splits") {
      return Fail(res, 400, "file must be 'labels' or 'splits'");
    }
    res.status = 200;
    res.set_header("Content-Disposition",
                   "attachment; filename=\"" + file + ".csv\"");
    res.set_content(file == "labels" ? out.labels_csv : out.splits_csv, "text/csv");
  }
};

ReviewService::ReviewService(AuditReport report, const Graph& graph,
                             std::string verdict_log, std::ostream* log)
    : impl_(std::make_unique<Impl>()) {
  Impl& s = *impl_;
  if (graph.num_nodes != report.num_nodes) {
    throw DataError(kModule, "graph has " + std::to_string(graph.num_nodes) +
                                 " nodes but the report has " +
                                 std::to_string(report.num_nodes));
  }
  s.report = std::move(report);
  s.adjacency = Adjacency(graph);
  s.labels.assign(s.report.num_nodes, kUnlabeled);
  for (std::size_t i = 0; i < s.report.records.size(); ++i) {
    const auto& r = s.report.records[i];
    s.record_index[r.node_id] = i;
    s.labels[r.node_id] = r.given_label;
  }
  for (std::size_t i = 0; i < s.report.excluded.size(); ++i) {
    s.excluded_index[s.report.excluded[i].node_id] = i;
  }
  s.log_path = std::move(verdict_log);
  s.log = log;
  if (std::filesystem::exists(s.log_path)) {
    const std::string text = csv::ReadWholeFile(s.log_path);
    s.needs_newline = !text.empty() && text.back() != '\n';
    s.verdicts = Resolve(
        ParseVerdictLog(text, s.log_path, s.report.num_nodes, s.report.num_classes));
    if (log) {
      for (const auto& c : s.verdicts.conflicts) {
        *log << "review_service: conflict: " << c << '\n';
      }
    }
  }

  s.server.Get("/api/report", [&s](const httplib::Request& req, httplib::Response& res) {
    s.GetReport(req, res);
  });
  s.server.Get(R"(/api/node/([^/]+))",
               [&s](const httplib::Request& req, httplib::Response& res) {
                 s.GetNode(req, res);
               });
  s.server.Post("/api/verdict", [&s](const httplib::Request& req, httplib::Response& res) {
    s.PostVerdict(req, res);
  });
  s.server.Get("/api/progress", [&s](const httplib::Request&, httplib::Response& res) {
    s.GetProgress(res);
  });
  s.server.Get("/api/export", [&s](const httplib::Request& req, httplib::Response& res) {
    s.GetExport(req, res);
  });
  s.server.set_exception_handler(
      [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string what = "internal error";
        try {
          std::rethrow_exception(ep);
        } catch (const std::exception& e) {
          what = e.what();
        } catch (...) {
        }
        Fail(res, 500, what);
      });
  s.server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) Fail(res, res.status, httplib::status_message(res.status));
  });
}

ReviewService::~ReviewService() { impl_->server.stop(); }

int ReviewService::Bind(const std::string& host, int port) {
  const int bound = port == 0 ? impl_->server.bind_to_any_port(host)
                              : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) {
    throw UsageError(kModule, "cannot bind " + host + ":" + std::to_string(port));
  }
  return bound;
}

void ReviewService::Listen() { impl_->server.listen_after_bind(); }

void ReviewService::Stop() { impl_->server.stop(); }

EffectiveVerdicts ReviewService::Verdicts() const {
  std::shared_lock lock(impl_->state_mu);
  return impl_->verdicts;
}

void ReviewService::SetClock(std::function<std::string()> clock) {
  impl_->clock = std::move(clock);
}

}  // namespace labelaudit
