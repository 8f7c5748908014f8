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

#include "labelaudit/graph.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "labelaudit/csv.h"
#include "labelaudit/error.h"

namespace labelaudit {
namespace {

constexpr char kModule[] = "graph_core";
constexpr std::string_view kExcludedMarker = "excluded";

// Sparse vector with strictly increasing indices.
struct SparseRow {
  std::vector<std::uint32_t> index;
  std::vector<double> value;
};

// Expands sparse rows of walk products over the 0/1 adjacency. Each step
// maps x to (x / deg) A, i.e. one application of D^{-1} A from the left.
class WalkExpander {
 public:
  WalkExpander(const SparseMatrix& adjacency, std::span<const double> degree)
      : a_(adjacency),
        degree_(degree),
        acc_(adjacency.size(), 0.0),
        seen_(adjacency.size(), 0) {}

  // walks[m] for m = 1..max_power, where walks[m] is row v of
  // (A D^{-1})^{m-1} A. walks[0] is unused and left empty.
  std::vector<SparseRow> Walks(std::size_t v, int max_power) {
    std::vector<SparseRow> walks(static_cast<std::size_t>(max_power) + 1);
    if (max_power < 1) return walks;
    const auto cols = a_.row_columns(v);
    walks[1].index.assign(cols.begin(), cols.end());
    walks[1].value.assign(cols.size(), 1.0);
    for (int m = 2; m <= max_power; ++m) walks[m] = Step(walks[m - 1]);
    return walks;
  }

 private:
  SparseRow Step(const SparseRow& x) {
    touched_.clear();
    for (std::size_t i = 0; i < x.index.size(); ++i) {
      const std::uint32_t u = x.index[i];
      const double w = x.value[i] / degree_[u];
      for (std::uint32_t c : a_.row_columns(u)) {
        if (!seen_[c]) {
          seen_[c] = 1;
          touched_.push_back(c);
        }
        acc_[c] += w;
      }
    }
    std::sort(touched_.begin(), touched_.end());
    SparseRow out;
    out.index.reserve(touched_.size());
    out.value.reserve(touched_.size());
    for (std::uint32_t c : touched_) {
      out.index.push_back(c);
      out.value.push_back(acc_[c]);
      acc_[c] = 0.0;
      seen_[c] = 0;
    }
    return out;
  }

  const SparseMatrix& a_;
  std::span<const double> degree_;
  std::vector<double> acc_;
  std::vector<char> seen_;
  std::vector<std::uint32_t> touched_;
};

void RequireHops(int k) {
  if (k < 1) {
    throw DataError(kModule, "hop count must be >= 1, got " + std::to_string(k));
  }
}

// diag(a_norm^k) for k = 1..k_max; result[k-1] holds hop k.
//
// With walks w_m = e_v^T (A D^{-1})^{m-1} A, entry (v, u) of a_norm^m is
// w_m[u] / sqrt(d_v d_u), so for k = a + b
//   diag_k(v) = sum_u w_a[u] w_b[u] / d_u / d_v.
// The a_norm^1 diagonal is zero because there are no self-loops.
std::vector<std::vector<double>> PowerDiagonals(const NormalizedAdjacency& a,
                                                int k_max) {
  const std::size_t n = a.size();
  std::vector<std::vector<double>> diag(static_cast<std::size_t>(k_max),
                                        std::vector<double>(n, 0.0));
  if (k_max < 2) return diag;
  const auto degree = a.degrees();
  WalkExpander expander(a.adjacency(), degree);
  const int half = (k_max + 1) / 2;
  for (std::size_t v = 0; v < n; ++v) {
    if (degree[v] == 0.0) continue;
    const auto walks = expander.Walks(v, half);
    for (int k = 2; k <= k_max; ++k) {
      const SparseRow& hi = walks[(k + 1) / 2];
      const SparseRow& lo = walks[k / 2];
      double sum = 0.0;
      std::size_t i = 0, j = 0;
      while (i < hi.index.size() && j < lo.index.size()) {
        if (hi.index[i] < lo.index[j]) {
          ++i;
        } else if (hi.index[i] > lo.index[j]) {
          ++j;
        } else {
          sum += hi.value[i] * lo.value[j] / degree[hi.index[i]];
          ++i;
          ++j;
        }
      }
      diag[k - 1][v] = sum / degree[v];
    }
  }
  return diag;
}

void RequireRows(const NormalizedAdjacency& a, const DenseMatrix& signal) {
  if (signal.rows() != a.size()) {
    throw DataError(kModule, "signal has " + std::to_string(signal.rows()) +
                                 " rows, graph has " +
                                 std::to_string(a.size()) + " nodes");
  }
}

void ScaleRows(DenseMatrix& m, const std::vector<double>& scale) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (double& x : m.row(r)) x *= scale[r];
  }
}

// a_norm^k * signal for k = 1..k_max in the factored form.
std::vector<DenseMatrix> PowerProducts(const NormalizedAdjacency& a,
                                       const DenseMatrix& signal, int k_max) {
  const auto degree = a.degrees();
  std::vector<double> inv_sqrt(degree.size(), 0.0), inv(degree.size(), 0.0);
  for (std::size_t v = 0; v < degree.size(); ++v) {
    if (degree[v] > 0.0) {
      inv_sqrt[v] = 1.0 / std::sqrt(degree[v]);
      inv[v] = 1.0 / degree[v];
    }
  }
  std::vector<DenseMatrix> out;
  DenseMatrix walk = signal;
  ScaleRows(walk, inv_sqrt);
  for (int k = 1; k <= k_max; ++k) {
    if (k > 1) ScaleRows(walk, inv);
    walk = a.adjacency().Multiply(walk);
    DenseMatrix power = walk;
    ScaleRows(power, inv_sqrt);
    out.push_back(std::move(power));
  }
  return out;
}

std::string JoinLines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

}  // namespace

std::string_view SplitName(Split split) {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kVal:
      return "val";
    case Split::kTest:
      return "test";
    case Split::kExcluded:
      return "excluded";
  }
  return "unknown";
}

std::optional<Split> ParseSplit(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "val") return Split::kVal;
  if (name == "test") return Split::kTest;
  return std::nullopt;
}

std::vector<std::size_t> Graph::NodesIn(Split split) const {
  std::vector<std::size_t> nodes;
  for (std::size_t v = 0; v < splits.size(); ++v) {
    if (splits[v] == split) nodes.push_back(v);
  }
  return nodes;
}

std::vector<std::uint32_t> Graph::Degrees() const {
  std::vector<std::uint32_t> degree(num_nodes, 0);
  for (const auto& [u, v] : edges) {
    ++degree[u];
    ++degree[v];
  }
  return degree;
}

void Graph::Validate() const {
  const auto fail = [](const std::string& what) {
    throw Error(ErrorKind::kInternal, kModule, "invalid graph: " + what);
  };
  if (labels.size() != num_nodes || splits.size() != num_nodes) {
    fail("label/split arrays do not match node count");
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto [u, v] = edges[i];
    if (u >= v || v >= num_nodes) fail("bad edge endpoint");
    if (i > 0 && edges[i - 1] >= edges[i]) fail("edges not sorted/unique");
  }
  for (std::size_t v = 0; v < num_nodes; ++v) {
    const bool excluded = splits[v] == Split::kExcluded;
    if (excluded != (labels[v] == kUnlabeled)) {
      fail("excluded split and missing label must coincide");
    }
    if (!excluded && (labels[v] < 0 || labels[v] >= num_classes)) {
      fail("label out of range");
    }
  }
  if (features && features->rows() != num_nodes) fail("feature row count");
}

std::size_t SetEdges(Graph& g,
                     std::vector<std::pair<std::uint32_t, std::uint32_t>> raw) {
  const std::size_t input_count = raw.size();
  std::erase_if(raw, [](const auto& e) { return e.first == e.second; });
  for (auto& e : raw) {
    if (e.first > e.second) std::swap(e.first, e.second);
  }
  std::sort(raw.begin(), raw.end());
  raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
  g.edges = std::move(raw);
  return input_count - g.edges.size();
}

Graph LoadGraph(const GraphFiles& files, std::optional<int> num_classes) {
  Graph g;

  // Labels determine n.
  const auto label_table = csv::ReadFile(files.labels, {"node_id", "label"});
  std::int64_t max_id = -1;
  for (const auto& rec : label_table.records) {
    if (rec.fields.size() != 2) {
      throw ParseError(files.labels, rec.line, "expected 2 fields", kModule);
    }
    const auto id = csv::ParseInt(rec.fields[0], files.labels, rec.line);
    if (id < 0) throw ParseError(files.labels, rec.line, "negative node id", kModule);
    max_id = std::max(max_id, id);
  }
  g.num_nodes = static_cast<std::size_t>(max_id + 1);
  g.labels.assign(g.num_nodes, kUnlabeled);
  std::vector<char> label_seen(g.num_nodes, 0);
  std::vector<char> excluded(g.num_nodes, 0);
  int max_label = -1;
  for (const auto& rec : label_table.records) {
    const auto id = static_cast<std::size_t>(
        csv::ParseInt(rec.fields[0], files.labels, rec.line));
    if (label_seen[id]) {
      throw ParseError(files.labels, rec.line,
                       "duplicate node id " + std::to_string(id), kModule);
    }
    label_seen[id] = 1;
    if (rec.fields[1] == kExcludedMarker) {
      excluded[id] = 1;
      continue;
    }
    const auto label = csv::ParseInt(rec.fields[1], files.labels, rec.line);
    if (label < 0 || (num_classes && label >= *num_classes)) {
      throw ParseError(files.labels, rec.line,
                       "label " + std::to_string(label) + " outside [0, " +
                           (num_classes ? std::to_string(*num_classes) : "c") +
                           ")",
                       kModule);
    }
    g.labels[id] = static_cast<int>(label);
    max_label = std::max(max_label, static_cast<int>(label));
  }
  for (std::size_t v = 0; v < g.num_nodes; ++v) {
    if (!label_seen[v]) {
      throw ParseError(files.labels, 0,
                       "node id " + std::to_string(v) + " has no label row",
                       kModule);
    }
  }
  g.num_classes = num_classes ? *num_classes : max_label + 1;

  // Splits.
  const auto split_table = csv::ReadFile(files.splits, {"node_id", "split"});
  g.splits.assign(g.num_nodes, Split::kExcluded);
  std::vector<char> split_seen(g.num_nodes, 0);
  for (const auto& rec : split_table.records) {
    if (rec.fields.size() != 2) {
      throw ParseError(files.splits, rec.line, "expected 2 fields", kModule);
    }
    const auto id = csv::ParseInt(rec.fields[0], files.splits, rec.line);
    if (id < 0 || static_cast<std::size_t>(id) >= g.num_nodes) {
      throw ParseError(files.splits, rec.line,
                       "node id " + std::to_string(id) + " >= n=" +
                           std::to_string(g.num_nodes),
                       kModule);
    }
    const auto split = ParseSplit(rec.fields[1]);
    if (!split) {
      throw ParseError(files.splits, rec.line,
                       "unknown split tag '" + rec.fields[1] + "'", kModule);
    }
    if (split_seen[id]) {
      throw ParseError(files.splits, rec.line,
                       "duplicate node id " + std::to_string(id), kModule);
    }
    if (excluded[id]) {
      throw ParseError(files.splits, rec.line,
                       "node " + std::to_string(id) +
                           " is marked excluded but has a split",
                       kModule);
    }
    split_seen[id] = 1;
    g.splits[id] = *split;
  }
  for (std::size_t v = 0; v < g.num_nodes; ++v) {
    if (!excluded[v] && !split_seen[v]) {
      throw ParseError(files.splits, 0,
                       "node id " + std::to_string(v) + " has no split",
                       kModule);
    }
  }

  // Edges: whitespace separated pairs, '#' starts a comment.
  const std::string edge_text = csv::ReadWholeFile(files.edges);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> raw;
  std::istringstream lines(edge_text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.resize(hash);
    }
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string tok; fields >> tok;) tokens.push_back(tok);
    if (tokens.empty()) continue;
    if (tokens.size() != 2) {
      throw ParseError(files.edges, line_no, "expected two node ids", kModule);
    }
    std::uint32_t ends[2];
    for (int i = 0; i < 2; ++i) {
      const auto id = csv::ParseInt(tokens[i], files.edges, line_no);
      if (id < 0 || static_cast<std::size_t>(id) >= g.num_nodes) {
        throw ParseError(files.edges, line_no,
                         "node id " + std::to_string(id) + " >= n=" +
                             std::to_string(g.num_nodes),
                         kModule);
      }
      ends[i] = static_cast<std::uint32_t>(id);
    }
    raw.emplace_back(ends[0], ends[1]);
  }
  g.dropped_edges = SetEdges(g, std::move(raw));

  if (files.features) {
    const auto table = csv::ReadFile(*files.features);
    if (table.records.size() != g.num_nodes) {
      throw ParseError(*files.features, table.records.empty() ? 0 : table.records.back().line,
                       "expected " + std::to_string(g.num_nodes) +
                           " feature rows, found " +
                           std::to_string(table.records.size()),
                       kModule);
    }
    const std::size_t d =
        table.records.empty() ? 0 : table.records.front().fields.size();
    DenseMatrix x(g.num_nodes, d);
    for (std::size_t v = 0; v < g.num_nodes; ++v) {
      const auto& rec = table.records[v];
      if (rec.fields.size() != d) {
        throw ParseError(*files.features, rec.line,
                         "ragged row: expected " + std::to_string(d) +
                             " columns, found " +
                             std::to_string(rec.fields.size()),
                         kModule);
      }
      for (std::size_t j = 0; j < d; ++j) {
        x(v, j) = csv::ParseDouble(rec.fields[j], *files.features, rec.line);
      }
    }
    g.features = std::move(x);
  }

  g.Validate();
  return g;
}

std::string FormatEdges(const Graph& g) {
  std::string out;
  for (const auto& [u, v] : g.edges) {
    out += std::to_string(u) + " " + std::to_string(v) + "\n";
  }
  return out;
}

std::string FormatLabels(const Graph& g) {
  std::vector<std::string> lines = {"node_id,label"};
  for (std::size_t v = 0; v < g.num_nodes; ++v) {
    lines.push_back(std::to_string(v) + "," +
                    (g.labels[v] == kUnlabeled
                         ? std::string(kExcludedMarker)
                         : std::to_string(g.labels[v])));
  }
  return JoinLines(lines);
}

std::string FormatSplits(const Graph& g) {
  std::vector<std::string> lines = {"node_id,split"};
  for (std::size_t v = 0; v < g.num_nodes; ++v) {
    if (g.splits[v] == Split::kExcluded) continue;
    lines.push_back(std::to_string(v) + "," + std::string(SplitName(g.splits[v])));
  }
  return JoinLines(lines);
}

std::string FormatFeatures(const DenseMatrix& features) {
  std::string out;
  for (std::size_t r = 0; r < features.rows(); ++r) {
    for (std::size_t c = 0; c < features.cols(); ++c) {
      if (c) out += ',';
      out += csv::FormatDouble(features(r, c));
    }
    out += '\n';
  }
  return out;
}

SparseMatrix Adjacency(const Graph& g) {
  const std::size_t n = g.num_nodes;
  std::vector<std::vector<std::uint32_t>> nbrs(n);
  for (const auto& [u, v] : g.edges) {
    nbrs[u].push_back(v);
    nbrs[v].push_back(u);
  }
  std::vector<std::size_t> offsets(n + 1, 0);
  std::vector<std::uint32_t> cols;
  cols.reserve(2 * g.edges.size());
  for (std::size_t v = 0; v < n; ++v) {
    std::sort(nbrs[v].begin(), nbrs[v].end());
    cols.insert(cols.end(), nbrs[v].begin(), nbrs[v].end());
    offsets[v + 1] = cols.size();
  }
  std::vector<double> vals(cols.size(), 1.0);
  return SparseMatrix(n, std::move(offsets), std::move(cols), std::move(vals),
                      true);
}

NormalizedAdjacency::NormalizedAdjacency(const Graph& g)
    : adjacency_(Adjacency(g)), degree_(g.num_nodes, 0.0) {
  const std::size_t n = adjacency_.size();
  for (std::size_t v = 0; v < n; ++v) {
    degree_[v] = static_cast<double>(adjacency_.row_columns(v).size());
  }
  std::vector<std::size_t> offsets(n + 1, 0);
  std::vector<std::uint32_t> cols;
  std::vector<double> vals;
  cols.reserve(adjacency_.nnz());
  vals.reserve(adjacency_.nnz());
  for (std::size_t v = 0; v < n; ++v) {
    for (std::uint32_t u : adjacency_.row_columns(v)) {
      cols.push_back(u);
      // d_v * d_u is commutative, so the matrix is exactly symmetric.
      vals.push_back(1.0 / std::sqrt(degree_[v] * degree_[u]));
    }
    offsets[v + 1] = cols.size();
  }
  matrix_ = SparseMatrix(n, std::move(offsets), std::move(cols),
                         std::move(vals), true);
}

std::vector<double> PowerDiagonal(const NormalizedAdjacency& a_norm, int k) {
  RequireHops(k);
  return PowerDiagonals(a_norm, k)[static_cast<std::size_t>(k - 1)];
}

SparseMatrix PropagationMatrix(const NormalizedAdjacency& a_norm, int k) {
  RequireHops(k);
  const std::size_t n = a_norm.size();
  const auto degree = a_norm.degrees();
  WalkExpander expander(a_norm.adjacency(), degree);
  std::vector<std::size_t> offsets(n + 1, 0);
  std::vector<std::uint32_t> cols;
  std::vector<double> vals;
  for (std::size_t v = 0; v < n; ++v) {
    if (degree[v] > 0.0) {
      const SparseRow row = expander.Walks(v, k)[static_cast<std::size_t>(k)];
      for (std::size_t i = 0; i < row.index.size(); ++i) {
        const std::uint32_t u = row.index[i];
        if (u == v) continue;
        cols.push_back(u);
        vals.push_back(row.value[i] / std::sqrt(degree[v] * degree[u]));
      }
    }
    offsets[v + 1] = cols.size();
  }
  return SparseMatrix(n, std::move(offsets), std::move(cols), std::move(vals),
                      true);
}

std::vector<DenseMatrix> PropagateHops(const NormalizedAdjacency& a_norm,
                                       const DenseMatrix& signal, int k_max) {
  RequireHops(k_max);
  RequireRows(a_norm, signal);
  const auto diagonals = PowerDiagonals(a_norm, k_max);
  auto hops = PowerProducts(a_norm, signal, k_max);
  for (int k = 1; k <= k_max; ++k) {
    DenseMatrix& out = hops[static_cast<std::size_t>(k - 1)];
    const auto& diag = diagonals[static_cast<std::size_t>(k - 1)];
    for (std::size_t r = 0; r < out.rows(); ++r) {
      if (diag[r] == 0.0) continue;
      auto dst = out.row(r);
      const auto src = signal.row(r);
      for (std::size_t j = 0; j < dst.size(); ++j) dst[j] -= diag[r] * src[j];
    }
  }
  return hops;
}

DenseMatrix Propagate(const NormalizedAdjacency& a_norm,
                      const DenseMatrix& signal, int k) {
  RequireHops(k);
  return std::move(PropagateHops(a_norm, signal, k).back());
}

DenseMatrix SmoothFeatures(const NormalizedAdjacency& a_norm,
                           const DenseMatrix& signal, int k) {
  if (k == 0) return signal;
  RequireHops(k);
  RequireRows(a_norm, signal);
  return std::move(PowerProducts(a_norm, signal, k).back());
}

std::vector<std::vector<std::size_t>> HopLayers(const SparseMatrix& adjacency,
                                                std::size_t node, int k) {
  std::vector<std::vector<std::size_t>> layers;
  std::vector<char> visited(adjacency.size(), 0);
  visited[node] = 1;
  std::vector<std::size_t> frontier = {node};
  for (int hop = 1; hop <= k && !frontier.empty(); ++hop) {
    std::vector<std::size_t> next;
    for (std::size_t u : frontier) {
      for (std::uint32_t w : adjacency.row_columns(u)) {
        if (!visited[w]) {
          visited[w] = 1;
          next.push_back(w);
        }
      }
    }
    std::sort(next.begin(), next.end());
    layers.push_back(next);
    frontier = std::move(next);
  }
  return layers;
}

}  // namespace labelaudit
