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

#include <cmath>

#include "doctest.h"
#include "labelaudit/error.h"
#include "test_util.h"

namespace labelaudit {
namespace {

using testing::Dense;
using testing::TempDir;

Graph PathGraph() {
  Graph g;
  g.num_nodes = 3;
  g.num_classes = 2;
  SetEdges(g, {{0, 1}, {1, 2}});
  g.labels = {0, 0, 1};
  g.splits = {Split::kTrain, Split::kVal, Split::kTest};
  return g;
}

GraphFiles WriteFixture(const TempDir& dir, const std::string& edges,
                        const std::string& labels,
                        const std::string& splits) {
  GraphFiles f;
  f.edges = dir.Write("edges.txt", edges);
  f.labels = dir.Write("labels.csv", labels);
  f.splits = dir.Write("splits.csv", splits);
  return f;
}

const char kThreeLabels[] = "node_id,label\n0,0\n1,1\n2,2\n";
const char kThreeSplits[] = "node_id,split\n0,train\n1,val\n2,test\n";

TEST_CASE("load_graph: minimal well-formed input") {
  TempDir dir("load_min");
  const auto g = LoadGraph(WriteFixture(dir, "0 1\n1 2", kThreeLabels, kThreeSplits));
  CHECK(g.num_nodes == 3);
  CHECK(g.edges.size() == 2);
  CHECK(g.num_classes == 3);
  CHECK(g.dropped_edges == 0);
  CHECK(g.splits[1] == Split::kVal);
}

TEST_CASE("load_graph: self loops and duplicates are dropped and counted") {
  TempDir dir("load_loop");
  auto g = LoadGraph(WriteFixture(dir, "2 2\n", kThreeLabels, kThreeSplits));
  CHECK(g.edges.empty());
  CHECK(g.dropped_edges == 1);

  // Reverse direction is the same undirected edge; comments are ignored.
  g = LoadGraph(WriteFixture(dir, "# header\n0 1\n1 0  # again\n0 1\n",
                             kThreeLabels, kThreeSplits));
  CHECK(g.edges.size() == 1);
  CHECK(g.dropped_edges == 2);
}

TEST_CASE("load_graph: structured parse errors") {
  TempDir dir("load_err");
  SUBCASE("label out of range") {
    const auto f = WriteFixture(dir, "0 1\n", "node_id,label\n0,0\n1,7\n2,1\n",
                                kThreeSplits);
    try {
      LoadGraph(f, 3);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.file() == f.labels);
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("node id beyond n in edge list") {
    const auto f = WriteFixture(dir, "0 1\n1 5\n", kThreeLabels, kThreeSplits);
    try {
      LoadGraph(f);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.file() == f.edges);
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("unknown split tag") {
    const auto f = WriteFixture(dir, "", kThreeLabels,
                                "node_id,split\n0,train\n1,holdout\n2,test\n");
    CHECK_THROWS_AS(LoadGraph(f), ParseError);
  }
  SUBCASE("ragged feature row") {
    auto f = WriteFixture(dir, "", kThreeLabels, kThreeSplits);
    f.features = dir.Write("x.csv", "1,2\n3,4\n5\n");
    try {
      LoadGraph(f);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("missing split row") {
    const auto f = WriteFixture(dir, "", kThreeLabels,
                                "node_id,split\n0,train\n2,test\n");
    CHECK_THROWS_AS(LoadGraph(f), ParseError);
  }
}

TEST_CASE("load_graph: features and excluded labels round-trip through writers") {
  TempDir dir("load_rt");
  auto f = WriteFixture(dir, "0 1\n", "node_id,label\n0,1\n1,excluded\n2,0\n",
                        "node_id,split\n0,train\n2,test\n");
  f.features = dir.Write("x.csv", "0.5,1\n-2,3e-3\n4,5\n");
  const auto g = LoadGraph(f);
  CHECK(g.labels[1] == kUnlabeled);
  CHECK(g.splits[1] == Split::kExcluded);
  REQUIRE(g.features);
  CHECK((*g.features)(1, 1) == doctest::Approx(3e-3));
  CHECK(FormatLabels(g) == "node_id,label\n0,1\n1,excluded\n2,0\n");
  CHECK(FormatSplits(g) == "node_id,split\n0,train\n2,test\n");
}

TEST_CASE("normalized_adjacency examples") {
  const NormalizedAdjacency norm(PathGraph());
  const SparseMatrix& a = norm.matrix();
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(a.at(0, 1) == r);
  CHECK(a.at(1, 0) == r);
  CHECK(a.at(1, 2) == r);
  CHECK(a.at(2, 1) == r);
  CHECK(a.at(0, 2) == 0.0);
  CHECK(a.at(1, 1) == 0.0);
  CHECK(a.IsSymmetric());

  Graph single;
  single.num_nodes = 3;
  single.num_classes = 1;
  SetEdges(single, {{0, 1}});
  single.labels = {0, 0, 0};
  single.splits.assign(3, Split::kTrain);
  const NormalizedAdjacency b(single);
  CHECK(b.matrix().at(0, 1) == 1.0);
  CHECK(b.matrix().at(1, 0) == 1.0);
  // Node 2 is isolated.
  CHECK(b.matrix().row_columns(2).empty());
}

TEST_CASE("propagation_matrix examples") {
  const NormalizedAdjacency a(PathGraph());
  const auto s2 = PropagationMatrix(a, 2);
  // Hand computation: A^2 has diag (1/2, 1, 1/2) and corners 1/2.
  CHECK(s2.nnz() == 2);
  CHECK(s2.at(0, 2) == 0.5);
  CHECK(s2.at(2, 0) == 0.5);
  for (std::size_t i = 0; i < 3; ++i) CHECK(s2.at(i, i) == 0.0);

  const auto s1 = PropagationMatrix(a, 1);
  CHECK(s1.ToDense() == a.matrix().ToDense());

  CHECK_THROWS_AS(PropagationMatrix(a, 0), Error);

  Graph empty = PathGraph();
  empty.edges.clear();
  const auto z = PropagationMatrix(NormalizedAdjacency(empty), 3);
  CHECK(z.nnz() == 0);
}

TEST_CASE("propagate examples") {
  const NormalizedAdjacency a(PathGraph());
  DenseMatrix eye(3, 3);
  for (int i = 0; i < 3; ++i) eye(i, i) = 1.0;
  const auto out = Propagate(a, eye, 2);
  const Dense want = {{0, 0, 0.5}, {0, 0, 0}, {0.5, 0, 0}};
  CHECK(testing::MaxAbsDiff(testing::ToRows(out), want) < 1e-15);

  DenseMatrix zero(3, 2);
  CHECK(Propagate(a, zero, 3) == zero);

  DenseMatrix wrong(4, 1);
  CHECK_THROWS_AS(Propagate(a, wrong, 1), Error);
}

TEST_CASE("k=1 on an all-ones column sums 1/sqrt(deg u deg v) over neighbours") {
  RandomStream rng(101);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = testing::RandomGraph(2 + rng.UniformInt(9), 0.35, 2, rng);
    const auto deg = g.Degrees();
    DenseMatrix ones(g.num_nodes, 1, 1.0);
    const auto out = Propagate(NormalizedAdjacency(g), ones, 1);
    for (std::size_t u = 0; u < g.num_nodes; ++u) {
      double want = 0.0;
      for (auto [a, b] : g.edges) {
        if (a == u) want += 1.0 / std::sqrt(double(deg[a]) * deg[b]);
        if (b == u) want += 1.0 / std::sqrt(double(deg[a]) * deg[b]);
      }
      CHECK(std::abs(out(u, 0) - want) < 1e-12);
    }
  }
}

TEST_CASE("property: propagate matches the dense zero(A^k) oracle") {
  RandomStream rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + rng.UniformInt(12);
    const auto g = testing::RandomGraph(n, 0.15 + 0.5 * rng.Uniform(), 3, rng);
    const NormalizedAdjacency a(g);
    const Dense dense_a = testing::DenseNormalizedAdjacency(g);
    const auto m = testing::RandomDense(n, 1 + rng.UniformInt(4), rng);
    const auto hops = PropagateHops(a, m, 5);
    for (int k = 1; k <= 5; ++k) {
      const Dense s = testing::DenseZeroPower(dense_a, k);
      const Dense want = testing::MatMul(s, testing::ToRows(m));
      CHECK(testing::MaxAbsDiff(testing::ToRows(hops[k - 1]), want) < 1e-10);
      CHECK(testing::MaxAbsDiff(testing::ToRows(Propagate(a, m, k)), want) <
            1e-10);
      const auto sk = PropagationMatrix(a, k);
      CHECK(testing::MaxAbsDiff(testing::ToRows(sk.ToDense()), s) < 1e-10);
      for (std::size_t v = 0; v < n; ++v) CHECK(sk.at(v, v) == 0.0);
    }
  }
}

TEST_CASE("property: normalized adjacency is exactly symmetric") {
  RandomStream rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = testing::RandomGraph(20, 0.2, 2, rng);
    const NormalizedAdjacency a(g);
    CHECK(a.matrix().IsSymmetric());
    CHECK(a.matrix().symmetric());
  }
}

TEST_CASE("property: propagate is linear") {
  RandomStream rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + rng.UniformInt(11);
    const auto g = testing::RandomGraph(n, 0.4, 2, rng);
    const NormalizedAdjacency a(g);
    const auto m = testing::RandomDense(n, 3, rng);
    const auto w = testing::RandomDense(n, 3, rng);
    const double alpha = rng.Uniform() * 4 - 2, beta = rng.Uniform() * 4 - 2;
    DenseMatrix mix(n, 3);
    for (std::size_t i = 0; i < mix.data().size(); ++i) {
      mix.data()[i] = alpha * m.data()[i] + beta * w.data()[i];
    }
    const int k = 1 + static_cast<int>(rng.UniformInt(5));
    const auto lhs = Propagate(a, mix, k);
    const auto pm = Propagate(a, m, k);
    const auto pw = Propagate(a, w, k);
    for (std::size_t i = 0; i < lhs.data().size(); ++i) {
      CHECK(std::abs(lhs.data()[i] -
                     (alpha * pm.data()[i] + beta * pw.data()[i])) < 1e-10);
    }
  }
}

TEST_CASE("hop layers group neighbours by BFS distance") {
  Graph g = PathGraph();
  const auto layers = HopLayers(Adjacency(g), 0, 3);
  REQUIRE(layers.size() == 3);
  CHECK(layers[0] == std::vector<std::size_t>{1});
  CHECK(layers[1] == std::vector<std::size_t>{2});
  CHECK(layers[2].empty());
}

}  // namespace
}  // namespace labelaudit
