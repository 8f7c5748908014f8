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

#include "labelaudit/sbm.h"

#include <cmath>
#include <vector>

#include "labelaudit/error.h"
#include "labelaudit/rng.h"

namespace labelaudit {
namespace {

constexpr char kModule[] = "eval_harness";

// Number of failures before the next success of a Bernoulli(p) sequence.
std::uint64_t GeometricSkip(double p, RandomStream& rng) {
  if (p >= 1.0) return 0;
  const double u = 1.0 - rng.Uniform();  // (0, 1]
  return static_cast<std::uint64_t>(std::floor(std::log(u) / std::log1p(-p)));
}

}  // namespace

void SbmConfig::Validate() const {
  if (c < 1 || n < static_cast<std::size_t>(c)) {
    throw UsageError(kModule, "need n >= c >= 1");
  }
  if (!(p_out >= 0.0 && p_out < p_in && p_in <= 1.0)) {
    throw UsageError(kModule, "need 0 <= p_out < p_in <= 1");
  }
  if (d == 0) throw UsageError(kModule, "feature dimension must be positive");
  if (train_fraction < 0 || val_fraction < 0 || test_fraction < 0 ||
      std::abs(train_fraction + val_fraction + test_fraction - 1.0) > 1e-9) {
    throw UsageError(kModule, "split fractions must be non-negative and sum to 1");
  }
}

Graph GenerateSbm(const SbmConfig& config) {
  config.Validate();
  const RandomStream root(config.seed);
  const std::size_t n = config.n;
  Graph g;
  g.num_nodes = n;
  g.num_classes = config.c;

  // Balanced class sizes, random placement.
  {
    RandomStream rng = root.Split(1);
    g.labels.resize(n);
    for (std::size_t v = 0; v < n; ++v) {
      g.labels[v] = static_cast<int>(v % static_cast<std::size_t>(config.c));
    }
    Shuffle(std::span<int>(g.labels), rng);
  }

  // Each unordered pair independently; geometric skipping over the
  // row-major pair sequence, separately for the two probabilities.
  {
    RandomStream rng = root.Split(2);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (int pass = 0; pass < 2; ++pass) {
      const bool intra = pass == 0;
      const double p = intra ? config.p_in : config.p_out;
      if (p <= 0.0) continue;
      for (std::size_t u = 0; u + 1 < n; ++u) {
        std::size_t v = u + 1 + GeometricSkip(p, rng);
        while (v < n) {
          if ((g.labels[u] == g.labels[v]) == intra) {
            edges.emplace_back(static_cast<std::uint32_t>(u),
                               static_cast<std::uint32_t>(v));
          }
          v += 1 + GeometricSkip(p, rng);
        }
      }
    }
    SetEdges(g, std::move(edges));
  }

  {
    RandomStream rng = root.Split(3);
    DenseMatrix x(n, config.d);
    for (std::size_t v = 0; v < n; ++v) {
      auto row = x.row(v);
      for (double& value : row) value = rng.Normal();
      row[static_cast<std::size_t>(g.labels[v]) % config.d] += config.signal;
    }
    g.features = std::move(x);
  }

  // Stratified splits.
  {
    RandomStream rng = root.Split(4);
    g.splits.assign(n, Split::kTest);
    for (int cls = 0; cls < config.c; ++cls) {
      std::vector<std::size_t> members;
      for (std::size_t v = 0; v < n; ++v) {
        if (g.labels[v] == cls) members.push_back(v);
      }
      Shuffle(std::span<std::size_t>(members), rng);
      const auto m = static_cast<double>(members.size());
      const auto n_train = static_cast<std::size_t>(std::floor(config.train_fraction * m));
      const auto n_val = static_cast<std::size_t>(std::floor(config.val_fraction * m));
      for (std::size_t i = 0; i < members.size(); ++i) {
        g.splits[members[i]] = i < n_train           ? Split::kTrain
                               : i < n_train + n_val ? Split::kVal
                                                     : Split::kTest;
      }
    }
  }

  g.Validate();
  return g;
}

}  // namespace labelaudit
