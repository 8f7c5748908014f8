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

#ifndef LABELAUDIT_GRAPH_H_
#define LABELAUDIT_GRAPH_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "labelaudit/matrix.h"

namespace labelaudit {

enum class Split : std::uint8_t {
  kTrain,
  kVal,
  kTest,
  // Label removed during review; the node stays in the graph but belongs to
  // no split. Only produced by re-ingesting a cleaned export.
  kExcluded,
};

std::string_view SplitName(Split split);
std::optional<Split> ParseSplit(std::string_view name);

inline constexpr int kUnlabeled = -1;

// Undirected graph with observed labels and split membership.
struct Graph {
  std::size_t num_nodes = 0;
  int num_classes = 0;
  // Each unordered pair once, stored as (min, max), sorted.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  std::optional<DenseMatrix> features;
  std::vector<int> labels;
  std::vector<Split> splits;
  // Self-loops and duplicate pairs dropped while loading.
  std::size_t dropped_edges = 0;

  std::vector<std::size_t> NodesIn(Split split) const;
  std::vector<std::uint32_t> Degrees() const;
  // Throws Error(kInternal) on any broken invariant.
  void Validate() const;
};

// Builds the edge set from arbitrary (possibly directed, duplicated or
// self-looped) pairs; returns the number of pairs dropped.
std::size_t SetEdges(Graph& g,
                     std::vector<std::pair<std::uint32_t, std::uint32_t>> raw);

struct GraphFiles {
  std::string edges;
  std::string labels;
  std::string splits;
  std::optional<std::string> features;
};

// Reads the four text formats. The node count is taken from the label file
// (ids must cover 0..n-1 exactly once). When `num_classes` is absent it is
// inferred as max label + 1.
Graph LoadGraph(const GraphFiles& files,
                std::optional<int> num_classes = std::nullopt);

// Writers for the same formats, node-id order.
std::string FormatEdges(const Graph& g);
std::string FormatLabels(const Graph& g);
std::string FormatSplits(const Graph& g);
std::string FormatFeatures(const DenseMatrix& features);

// Symmetric 0/1 adjacency in CSR form.
SparseMatrix Adjacency(const Graph& g);

// The symmetrically normalized adjacency D^{-1/2} A D^{-1/2}.
//
// Powers are evaluated in the factored form
//   D^{-1/2} (A D^{-1})^{k-1} A D^{-1/2},
// so interior walk weights are the rationals 1/deg and square roots only
// enter at the two endpoints. Isolated nodes (degree 0) give all-zero rows
// and columns.
class NormalizedAdjacency {
 public:
  explicit NormalizedAdjacency(const Graph& g);

  std::size_t size() const { return adjacency_.size(); }
  // The materialized matrix; exactly symmetric.
  const SparseMatrix& matrix() const { return matrix_; }
  const SparseMatrix& adjacency() const { return adjacency_; }
  std::span<const double> degrees() const { return degree_; }

 private:
  SparseMatrix adjacency_;
  std::vector<double> degree_;
  SparseMatrix matrix_;
};

// Diagonal of a_norm^k. For k >= 3 each entry is the inner product of row v
// of a_norm^ceil(k/2) with column v of a_norm^floor(k/2), using sparse rows.
std::vector<double> PowerDiagonal(const NormalizedAdjacency& a_norm, int k);

// S_k = a_norm^k with its diagonal zeroed, materialized sparsely. Intended
// for small graphs and inspection; the feature pipeline uses Propagate.
SparseMatrix PropagationMatrix(const NormalizedAdjacency& a_norm, int k);

// S_k * signal without forming a_norm^k: k sparse-times-dense products,
// then the diagonal contribution is subtracted row by row.
DenseMatrix Propagate(const NormalizedAdjacency& a_norm,
                      const DenseMatrix& signal, int k);

// S_1 * signal, ..., S_{k_max} * signal sharing the intermediate products.
std::vector<DenseMatrix> PropagateHops(const NormalizedAdjacency& a_norm,
                                       const DenseMatrix& signal, int k_max);

// a_norm^k * signal (diagonal kept). Used for feature smoothing.
DenseMatrix SmoothFeatures(const NormalizedAdjacency& a_norm,
                           const DenseMatrix& signal, int k);

// Nodes within 1..k hops of `node`, grouped by hop distance (BFS layers),
// each layer in increasing id order.
std::vector<std::vector<std::size_t>> HopLayers(const SparseMatrix& adjacency,
                                                std::size_t node, int k);

}  // namespace labelaudit

#endif  // LABELAUDIT_GRAPH_H_
