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

// Shared fixtures and brute-force oracles for the test binaries. Nothing in
// here calls into the code paths it is used to check.

#ifndef LABELAUDIT_TESTS_TEST_UTIL_H_
#define LABELAUDIT_TESTS_TEST_UTIL_H_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "labelaudit/graph.h"
#include "labelaudit/matrix.h"
#include "labelaudit/rng.h"

namespace labelaudit::testing {

using Dense = std::vector<std::vector<double>>;

inline Dense Zeros(std::size_t r, std::size_t c) {
  return Dense(r, std::vector<double>(c, 0.0));
}

inline Dense MatMul(const Dense& a, const Dense& b) {
  Dense out = Zeros(a.size(), b.empty() ? 0 : b[0].size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t j = 0; j < out[i].size(); ++j)
        out[i][j] += a[i][k] * b[k][j];
  return out;
}

// D^{-1/2} A D^{-1/2} straight from the edge list.
inline Dense DenseNormalizedAdjacency(const Graph& g) {
  Dense a = Zeros(g.num_nodes, g.num_nodes);
  std::vector<double> deg(g.num_nodes, 0.0);
  for (auto [u, v] : g.edges) {
    deg[u] += 1;
    deg[v] += 1;
  }
  for (auto [u, v] : g.edges) {
    a[u][v] = a[v][u] = 1.0 / std::sqrt(deg[u] * deg[v]);
  }
  return a;
}

// zero(A^k) by repeated dense multiplication.
inline Dense DenseZeroPower(const Dense& a, int k) {
  Dense p = a;
  for (int i = 1; i < k; ++i) p = MatMul(p, a);
  for (std::size_t i = 0; i < p.size(); ++i) p[i][i] = 0.0;
  return p;
}

inline Dense ToRows(const DenseMatrix& m) {
  Dense out = Zeros(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out[r][c] = m(r, c);
  return out;
}

inline DenseMatrix FromRows(const Dense& rows) {
  DenseMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
  return m;
}

inline double MaxAbsDiff(const Dense& a, const Dense& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j)
      worst = std::max(worst, std::abs(a[i][j] - b[i][j]));
  return worst;
}

// Erdos-Renyi graph with random labels and splits.
inline Graph RandomGraph(std::size_t n, double edge_prob, int classes,
                         RandomStream& rng) {
  Graph g;
  g.num_nodes = n;
  g.num_classes = classes;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> raw;
  for (std::uint32_t u = 0; u < n; ++u)
    for (std::uint32_t v = u + 1; v < n; ++v)
      if (rng.Bernoulli(edge_prob)) raw.emplace_back(u, v);
  SetEdges(g, raw);
  for (std::size_t v = 0; v < n; ++v) {
    g.labels.push_back(static_cast<int>(rng.UniformInt(classes)));
    g.splits.push_back(static_cast<Split>(rng.UniformInt(3)));
  }
  return g;
}

inline DenseMatrix RandomDense(std::size_t r, std::size_t c,
                               RandomStream& rng) {
  DenseMatrix m(r, c);
  for (double& x : m.data()) x = rng.Uniform() * 2.0 - 1.0;
  return m;
}

// Fresh scratch directory under the build tree, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& name)
      : path_(std::filesystem::current_path() / ("tmp_" + name)) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::string File(const std::string& name) const {
    return (path_ / name).string();
  }
  std::string Write(const std::string& name, const std::string& text) const {
    const std::string p = File(name);
    std::ofstream(p, std::ios::binary) << text;
    return p;
  }

 private:
  std::filesystem::path path_;
};

}  // namespace labelaudit::testing

#endif  // LABELAUDIT_TESTS_TEST_UTIL_H_
