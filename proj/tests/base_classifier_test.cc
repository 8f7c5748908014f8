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

#include "labelaudit/base_classifier.h"

#include <cmath>

#include "doctest.h"
#include "labelaudit/error.h"
#include "labelaudit/sbm.h"
#include "test_util.h"

namespace labelaudit {
namespace {

using testing::TempDir;

TEST_CASE("load_softmax examples") {
  TempDir dir("softmax");
  const auto ok = LoadSoftmax(dir.Write("a.csv", "1,0\n0.5,0.5\n"), 2, 2);
  CHECK(ok.probs()(0, 0) == 1.0);
  CHECK(ok.probs()(1, 1) == 0.5);

  CHECK_THROWS_AS(LoadSoftmax(dir.Write("b.csv", "0.7,0.2\n"), 1, 2), Error);

  const auto renorm = LoadSoftmax(dir.Write("c.csv", "0.50004,0.50004\n"), 1, 2);
  CHECK(renorm.probs()(0, 0) + renorm.probs()(0, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(renorm.probs()(0, 0) == 0.5);

  CHECK_THROWS_AS(LoadSoftmax(dir.Write("d.csv", "1,0\n"), 2, 2), Error);
  CHECK_THROWS_AS(LoadSoftmax(dir.Write("e.csv", "1,0,0\n"), 1, 2), Error);
  CHECK_THROWS_AS(LoadSoftmax(dir.Write("f.csv", "1.1,-0.1\n"), 1, 2), Error);
}

Graph TwoClusterGraph() {
  SbmConfig cfg;
  cfg.n = 200;
  cfg.c = 2;
  cfg.p_in = 0.08;
  cfg.p_out = 0.005;
  cfg.d = 4;
  cfg.signal = 3.0;
  cfg.seed = 17;
  return GenerateSbm(cfg);
}

TEST_CASE("train_base fits a separable two-cluster SBM") {
  const Graph g = TwoClusterGraph();
  BaseTrainConfig cfg;
  cfg.k_base = 2;
  const auto result = TrainBase(g, cfg);
  CHECK(result.train_accuracy >= 0.95);
  for (std::size_t v = 0; v < g.num_nodes; ++v) {
    double sum = 0.0;
    for (double p : result.probs.row(v)) sum += p;
    CHECK(std::abs(sum - 1.0) < 1e-6);
  }
}

TEST_CASE("train_base with zero epochs predicts softmax of the bias") {
  const Graph g = TwoClusterGraph();
  BaseTrainConfig cfg;
  cfg.epochs = 0;
  const auto result = TrainBase(g, cfg);
  for (std::size_t v = 0; v < g.num_nodes; ++v) {
    CHECK(result.probs.probs()(v, 0) == 0.5);
    CHECK(result.probs.probs()(v, 1) == 0.5);
  }
}

TEST_CASE("train_base is deterministic and checkpoints round-trip exactly") {
  const Graph g = TwoClusterGraph();
  BaseTrainConfig cfg;
  cfg.seed = 99;
  const auto a = TrainBase(g, cfg);
  const auto b = TrainBase(g, cfg);
  CHECK(a.probs == b.probs);
  CHECK(a.model == b.model);

  const auto restored = ParseLinearModel(SerializeLinearModel(a.model));
  CHECK(restored == a.model);
  CHECK(PredictBase(restored, g) == a.probs);
}

TEST_CASE("train_base errors") {
  Graph g = TwoClusterGraph();
  for (auto& s : g.splits) {
    if (s == Split::kTrain) s = Split::kVal;
  }
  CHECK_THROWS_AS(TrainBase(g, {}), Error);
  g.features.reset();
  CHECK_THROWS_AS(TrainBase(g, {}), Error);
}

TEST_CASE("cross-entropy gradient matches central finite differences") {
  // 5-node fixture, 3 features, 3 classes.
  RandomStream rng(4242);
  const DenseMatrix x = testing::RandomDense(5, 3, rng);
  const std::vector<int> labels = {0, 2, 1, 1, 0};
  const std::vector<std::size_t> nodes = {0, 1, 2, 3, 4};

  for (int point = 0; point < 10; ++point) {
    LinearModel model;
    model.weights = testing::RandomDense(3, 3, rng);
    model.bias = {rng.Normal(), rng.Normal(), rng.Normal()};
    LinearModel grad;
    CrossEntropy(model, x, labels, nodes, &grad);

    const double h = 1e-6;
    auto check = [&](double& param, double analytic) {
      const double saved = param;
      param = saved + h;
      const double up = CrossEntropy(model, x, labels, nodes, nullptr);
      param = saved - h;
      const double down = CrossEntropy(model, x, labels, nodes, nullptr);
      param = saved;
      const double numeric = (up - down) / (2 * h);
      const double denom = std::max({std::abs(numeric), std::abs(analytic), 1e-8});
      CHECK(std::abs(numeric - analytic) / denom < 1e-4);
    };
    for (std::size_t i = 0; i < model.weights.data().size(); ++i) {
      check(model.weights.data()[i], grad.weights.data()[i]);
    }
    for (std::size_t j = 0; j < model.bias.size(); ++j) {
      check(model.bias[j], grad.bias[j]);
    }
  }
}

}  // namespace
}  // namespace labelaudit
