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

#include "labelaudit/transition.h"

#include <cmath>

#include "json.hpp"
#include "labelaudit/error.h"

namespace labelaudit {
namespace {

constexpr char kModule[] = "transition_estimator";

std::size_t ClassCount(const SoftmaxMatrix& p) {
  return static_cast<std::size_t>(p.num_classes());
}

}  // namespace

std::vector<double> ClassThresholds(const SoftmaxMatrix& p,
                                    std::span<const int> labels,
                                    std::span<const std::size_t> nodes) {
  const std::size_t c = ClassCount(p);
  std::vector<double> sum(c, 0.0);
  std::vector<std::size_t> members(c, 0);
  for (std::size_t v : nodes) {
    if (labels[v] < 0) continue;
    const auto j = static_cast<std::size_t>(labels[v]);
    sum[j] += p.row(v)[j];
    ++members[j];
  }
  std::vector<double> thresholds(c, kUnreachableThreshold);
  for (std::size_t j = 0; j < c; ++j) {
    if (members[j] > 0) thresholds[j] = sum[j] / static_cast<double>(members[j]);
  }
  return thresholds;
}

ConfidentJoint CountConfidentJoint(const SoftmaxMatrix& p,
                                   std::span<const int> labels,
                                   std::span<const double> thresholds,
                                   std::span<const std::size_t> nodes) {
  const std::size_t c = ClassCount(p);
  ConfidentJoint out;
  out.counts.assign(c, std::vector<std::int64_t>(c, 0));
  for (std::size_t v : nodes) {
    if (labels[v] < 0) continue;
    const auto row = p.row(v);
    std::size_t best = c;
    for (std::size_t j = 0; j < c; ++j) {
      if (row[j] < thresholds[j]) continue;
      // Strict comparison keeps the smallest id on ties.
      if (best == c || row[j] > row[best]) best = j;
    }
    if (best == c) {
      ++out.uncounted;
    } else {
      ++out.counts[static_cast<std::size_t>(labels[v])][best];
    }
  }
  return out;
}

DenseMatrix JointDistribution(const CountMatrix& counts,
                              std::span<const std::int64_t> observed_counts) {
  const std::size_t c = counts.size();
  if (observed_counts.size() != c) {
    throw DataError(kModule, "observed count vector has wrong length");
  }
  DenseMatrix joint(c, c);
  double total = 0.0;
  for (std::size_t i = 0; i < c; ++i) {
    std::int64_t row_sum = 0;
    for (std::int64_t x : counts[i]) row_sum += x;
    if (row_sum == 0) continue;
    for (std::size_t j = 0; j < c; ++j) {
      joint(i, j) = static_cast<double>(counts[i][j]) /
                    static_cast<double>(row_sum) *
                    static_cast<double>(observed_counts[i]);
      total += joint(i, j);
    }
  }
  if (!(total > 0.0)) {
    throw DataError(kModule,
                    "no confident counts: cannot estimate a joint distribution");
  }
  for (double& x : joint.data()) x /= total;
  return joint;
}

ConditionalTransition ConditionalFromJoint(const DenseMatrix& joint) {
  const std::size_t c = joint.rows();
  ConditionalTransition out;
  out.matrix = DenseMatrix(c, c);
  out.fallback.assign(c, false);
  for (std::size_t j = 0; j < c; ++j) {
    double column_mass = 0.0;
    for (std::size_t i = 0; i < c; ++i) column_mass += joint(i, j);
    if (column_mass > 0.0) {
      for (std::size_t i = 0; i < c; ++i) {
        out.matrix(i, j) = joint(i, j) / column_mass;
      }
    } else {
      out.fallback[j] = true;
      for (std::size_t i = 0; i < c; ++i) {
        out.matrix(i, j) = 1.0 / static_cast<double>(c);
      }
    }
  }
  return out;
}

TransitionModel EstimateTransition(const SoftmaxMatrix& p,
                                   std::span<const int> labels,
                                   std::span<const std::size_t> nodes) {
  if (nodes.empty()) throw DataError(kModule, "empty node set");
  TransitionModel model;
  model.thresholds = ClassThresholds(p, labels, nodes);
  auto cj = CountConfidentJoint(p, labels, model.thresholds, nodes);
  model.confident_joint = std::move(cj.counts);
  model.uncounted = cj.uncounted;

  std::vector<std::int64_t> observed(ClassCount(p), 0);
  for (std::size_t v : nodes) {
    if (labels[v] >= 0) ++observed[static_cast<std::size_t>(labels[v])];
  }
  model.joint = JointDistribution(model.confident_joint, observed);
  auto cond = ConditionalFromJoint(model.joint);
  model.conditional = std::move(cond.matrix);
  model.fallback = std::move(cond.fallback);
  return model;
}

namespace {

nlohmann::json MatrixJson(const DenseMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    rows.push_back(std::vector<double>(m.row(r).begin(), m.row(r).end()));
  }
  return rows;
}

DenseMatrix MatrixFromJson(const nlohmann::json& rows, std::size_t c) {
  DenseMatrix m(c, c);
  if (rows.size() != c) throw DataError(kModule, "matrix has wrong shape");
  for (std::size_t r = 0; r < c; ++r) {
    const auto values = rows.at(r).get<std::vector<double>>();
    if (values.size() != c) throw DataError(kModule, "matrix has wrong shape");
    std::copy(values.begin(), values.end(), m.row(r).begin());
  }
  return m;
}

}  // namespace

std::string TransitionToJson(const TransitionModel& model) {
  nlohmann::json j;
  j["num_classes"] = model.num_classes();
  nlohmann::json thresholds = nlohmann::json::array();
  for (double t : model.thresholds) {
    thresholds.push_back(std::isinf(t) ? nlohmann::json(nullptr)
                                       : nlohmann::json(t));
  }
  j["thresholds"] = thresholds;
  j["confident_joint"] = model.confident_joint;
  j["joint"] = MatrixJson(model.joint);
  j["conditional"] = MatrixJson(model.conditional);
  j["uncounted"] = model.uncounted;
  j["fallback_columns"] = model.fallback;
  return j.dump(2) + "\n";
}

TransitionModel TransitionFromJson(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    TransitionModel model;
    const auto c = j.at("num_classes").get<std::size_t>();
    for (const auto& t : j.at("thresholds")) {
      model.thresholds.push_back(t.is_null() ? kUnreachableThreshold
                                             : t.get<double>());
    }
    if (model.thresholds.size() != c) {
      throw DataError(kModule, "threshold vector has wrong length");
    }
    model.confident_joint = j.at("confident_joint").get<CountMatrix>();
    model.joint = MatrixFromJson(j.at("joint"), c);
    model.conditional = MatrixFromJson(j.at("conditional"), c);
    model.uncounted = j.at("uncounted").get<std::size_t>();
    model.fallback = j.at("fallback_columns").get<std::vector<bool>>();
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(kModule, std::string("malformed transition model: ") + e.what());
  }
}

}  // namespace labelaudit
