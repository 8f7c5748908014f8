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

#include "labelaudit/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "labelaudit/error.h"

namespace labelaudit {
namespace {

constexpr char kModule[] = "eval_harness";

std::vector<std::size_t> AllOr(std::span<const std::size_t> nodes, std::size_t n) {
  if (!nodes.empty()) return {nodes.begin(), nodes.end()};
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  return all;
}

}  // namespace

Confusion Confuse(const std::vector<bool>& flags, const std::vector<bool>& truth,
                  std::span<const std::size_t> nodes) {
  if (flags.size() != truth.size()) {
    throw DataError(kModule, "flag and truth vectors differ in length");
  }
  Confusion c;
  for (std::size_t v : AllOr(nodes, flags.size())) {
    if (flags[v]) {
      ++(truth[v] ? c.tp : c.fp);
    } else {
      ++(truth[v] ? c.fn : c.tn);
    }
  }
  return c;
}

Metric F1(const Confusion& c) {
  const auto denom = 2 * c.tp + c.fp + c.fn;
  if (denom == 0) return {0.0, true};
  return {2.0 * static_cast<double>(c.tp) / static_cast<double>(denom), false};
}

Metric Mcc(const Confusion& c) {
  const auto tp = static_cast<double>(c.tp), fp = static_cast<double>(c.fp),
             tn = static_cast<double>(c.tn), fn = static_cast<double>(c.fn);
  const double prod = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  if (prod == 0.0) return {0.0, true};
  return {(tp * tn - fp * fn) / std::sqrt(prod), false};
}

Metric PrecisionAtT(std::span<const double> scores, const std::vector<bool>& truth,
                    std::size_t t, std::span<const std::size_t> nodes) {
  if (scores.size() != truth.size()) {
    throw DataError(kModule, "score and truth vectors differ in length");
  }
  auto order = AllOr(nodes, scores.size());
  if (t == 0 || order.empty()) return {0.0, true};
  t = std::min(t, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(t),
                    order.end(), [&](std::size_t a, std::size_t b) {
                      if (scores[a] != scores[b]) return scores[a] > scores[b];
                      return a < b;
                    });
  std::size_t hits = 0;
  for (std::size_t i = 0; i < t; ++i) hits += truth[order[i]];
  return {static_cast<double>(hits) / static_cast<double>(t), false};
}

std::vector<bool> BaselineArgmax(const SoftmaxMatrix& p, std::span<const int> labels) {
  if (labels.size() != p.num_nodes()) {
    throw DataError(kModule, "label count does not match prediction rows");
  }
  std::vector<bool> flags(labels.size(), false);
  for (std::size_t v = 0; v < labels.size(); ++v) {
    if (labels[v] >= 0) flags[v] = static_cast<int>(ArgMax(p.row(v))) != labels[v];
  }
  return flags;
}

std::vector<double> BaselineScores(const SoftmaxMatrix& p, std::span<const int> labels) {
  if (labels.size() != p.num_nodes()) {
    throw DataError(kModule, "label count does not match prediction rows");
  }
  std::vector<double> out(labels.size(), 0.0);
  for (std::size_t v = 0; v < labels.size(); ++v) {
    if (labels[v] >= 0) out[v] = 1.0 - p.row(v)[static_cast<std::size_t>(labels[v])];
  }
  return out;
}

}  // namespace labelaudit
