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

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "labelaudit/csv.h"
#include "labelaudit/error.h"

namespace labelaudit {
namespace {

constexpr double kRenormalizeSlack = 1e-12;

constexpr char kModule[] = "base_classifier";
constexpr int kCheckpointVersion = 1;

}  // namespace

SoftmaxMatrix SoftmaxMatrix::FromProbabilities(DenseMatrix probs,
                                               double tolerance) {
  for (std::size_t r = 0; r < probs.rows(); ++r) {
    auto row = probs.row(r);
    double sum = 0.0;
    for (double x : row) {
      if (!std::isfinite(x) || x < 0.0 || x > 1.0) {
        throw DataError(kModule, "row " + std::to_string(r) +
                                     ": probability outside [0, 1]");
      }
      sum += x;
    }
    if (std::abs(sum - 1.0) > tolerance) {
      throw DataError(kModule, "row " + std::to_string(r) + " sums to " +
                                   csv::FormatDouble(sum));
    }
    // Rows already normalized up to rounding are kept bit-for-bit so that
    // saved predictions reload exactly.
    if (std::abs(sum - 1.0) > kRenormalizeSlack) {
      for (double& x : row) x /= sum;
    }
  }
  return SoftmaxMatrix(std::move(probs));
}

SoftmaxMatrix LoadSoftmax(const std::string& path, std::size_t n, int c) {
  const auto table = csv::ReadFile(path);
  if (table.records.size() != n) {
    throw DataError(kModule, path + ": expected " + std::to_string(n) +
                                 " rows, found " +
                                 std::to_string(table.records.size()));
  }
  DenseMatrix probs(n, static_cast<std::size_t>(c));
  for (std::size_t v = 0; v < n; ++v) {
    const auto& rec = table.records[v];
    if (rec.fields.size() != static_cast<std::size_t>(c)) {
      throw ParseError(path, rec.line,
                       "expected " + std::to_string(c) + " columns, found " +
                           std::to_string(rec.fields.size()),
                       kModule);
    }
    for (int j = 0; j < c; ++j) {
      const double x = csv::ParseDouble(rec.fields[j], path, rec.line);
      if (x < 0.0) throw ParseError(path, rec.line, "negative probability", kModule);
      probs(v, j) = x;
    }
  }
  try {
    return SoftmaxMatrix::FromProbabilities(std::move(probs));
  } catch (const Error& e) {
    throw DataError(kModule, path + ": " + e.what());
  }
}

std::string FormatSoftmax(const SoftmaxMatrix& p) {
  return FormatFeatures(p.probs());
}

DenseMatrix RowSoftmax(const DenseMatrix& logits) {
  DenseMatrix out(logits.rows(), logits.cols());
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    const auto in = logits.row(r);
    auto dst = out.row(r);
    const double peak = *std::max_element(in.begin(), in.end());
    double total = 0.0;
    for (std::size_t j = 0; j < in.size(); ++j) {
      dst[j] = std::exp(in[j] - peak);
      total += dst[j];
    }
    for (double& x : dst) x /= total;
  }
  return out;
}

DenseMatrix Logits(const LinearModel& model, const DenseMatrix& features) {
  if (features.cols() != model.input_dim()) {
    throw DataError(kModule, "feature dimension " +
                                 std::to_string(features.cols()) +
                                 " does not match model input " +
                                 std::to_string(model.input_dim()));
  }
  const std::size_t c = model.bias.size();
  DenseMatrix out(features.rows(), c);
  for (std::size_t r = 0; r < features.rows(); ++r) {
    auto dst = out.row(r);
    std::copy(model.bias.begin(), model.bias.end(), dst.begin());
    const auto x = features.row(r);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const auto w = model.weights.row(i);
      for (std::size_t j = 0; j < c; ++j) dst[j] += x[i] * w[j];
    }
  }
  return out;
}

double CrossEntropy(const LinearModel& model, const DenseMatrix& features,
                    std::span<const int> labels,
                    std::span<const std::size_t> nodes, LinearModel* grad) {
  const std::size_t c = model.bias.size();
  const std::size_t d = model.input_dim();
  if (grad) {
    grad->weights = DenseMatrix(d, c);
    grad->bias.assign(c, 0.0);
  }
  if (nodes.empty()) return 0.0;
  const double scale = 1.0 / static_cast<double>(nodes.size());
  std::vector<double> logit(c), prob(c);
  double loss = 0.0;
  for (std::size_t v : nodes) {
    const auto x = features.row(v);
    std::copy(model.bias.begin(), model.bias.end(), logit.begin());
    for (std::size_t i = 0; i < d; ++i) {
      const auto w = model.weights.row(i);
      for (std::size_t j = 0; j < c; ++j) logit[j] += x[i] * w[j];
    }
    const double peak = *std::max_element(logit.begin(), logit.end());
    double total = 0.0;
    for (std::size_t j = 0; j < c; ++j) {
      prob[j] = std::exp(logit[j] - peak);
      total += prob[j];
    }
    const auto y = static_cast<std::size_t>(labels[v]);
    loss -= (logit[y] - peak - std::log(total)) * scale;
    if (!grad) continue;
    for (std::size_t j = 0; j < c; ++j) {
      prob[j] = (prob[j] / total - (j == y ? 1.0 : 0.0)) * scale;
      grad->bias[j] += prob[j];
    }
    for (std::size_t i = 0; i < d; ++i) {
      auto gw = grad->weights.row(i);
      for (std::size_t j = 0; j < c; ++j) gw[j] += x[i] * prob[j];
    }
  }
  return loss;
}

BaseTrainResult TrainBase(const Graph& g, const BaseTrainConfig& config) {
  if (!g.features) throw DataError(kModule, "graph has no node features");
  if (config.k_base < 0) throw UsageError(kModule, "k_base must be >= 0");
  if (config.epochs < 0) throw UsageError(kModule, "epochs must be >= 0");
  const auto train = g.NodesIn(Split::kTrain);
  if (train.empty()) throw DataError(kModule, "training split is empty");

  const NormalizedAdjacency a_norm(g);
  const DenseMatrix x = SmoothFeatures(a_norm, *g.features, config.k_base);

  LinearModel model;
  model.weights = DenseMatrix(x.cols(), static_cast<std::size_t>(g.num_classes));
  model.bias.assign(static_cast<std::size_t>(g.num_classes), 0.0);
  model.config = config;

  LinearModel velocity = model;
  LinearModel grad;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    CrossEntropy(model, x, g.labels, train, &grad);
    auto vw = velocity.weights.data();
    auto gw = grad.weights.data();
    auto w = model.weights.data();
    for (std::size_t i = 0; i < w.size(); ++i) {
      vw[i] = config.momentum * vw[i] - config.step * gw[i];
      w[i] += vw[i];
    }
    for (std::size_t j = 0; j < model.bias.size(); ++j) {
      velocity.bias[j] =
          config.momentum * velocity.bias[j] - config.step * grad.bias[j];
      model.bias[j] += velocity.bias[j];
    }
  }
  if (!model.weights.AllFinite()) {
    throw Error(ErrorKind::kInternal, kModule, "training diverged");
  }

  DenseMatrix probs = RowSoftmax(Logits(model, x));
  std::size_t correct = 0;
  for (std::size_t v : train) {
    correct += ArgMax(probs.row(v)) == static_cast<std::size_t>(g.labels[v]);
  }
  BaseTrainResult result;
  result.model = std::move(model);
  result.probs = SoftmaxMatrix::FromProbabilities(std::move(probs), 1e-6);
  result.train_accuracy =
      static_cast<double>(correct) / static_cast<double>(train.size());
  return result;
}

SoftmaxMatrix PredictBase(const LinearModel& model, const Graph& g) {
  if (!g.features) throw DataError(kModule, "graph has no node features");
  const NormalizedAdjacency a_norm(g);
  const DenseMatrix x = SmoothFeatures(a_norm, *g.features, model.config.k_base);
  return SoftmaxMatrix::FromProbabilities(RowSoftmax(Logits(model, x)), 1e-6);
}

std::string SerializeLinearModel(const LinearModel& model) {
  nlohmann::json j;
  j["format"] = "labelaudit-linear-model";
  j["version"] = kCheckpointVersion;
  j["input_dim"] = model.input_dim();
  j["num_classes"] = model.num_classes();
  j["weights"] = std::vector<double>(model.weights.data().begin(),
                                     model.weights.data().end());
  j["bias"] = model.bias;
  j["config"] = {{"k_base", model.config.k_base},
                 {"epochs", model.config.epochs},
                 {"step", model.config.step},
                 {"momentum", model.config.momentum},
                 {"seed", model.config.seed}};
  return j.dump(2) + "\n";
}

LinearModel ParseLinearModel(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("format") != "labelaudit-linear-model" ||
        j.at("version").get<int>() != kCheckpointVersion) {
      throw DataError(kModule, "unsupported checkpoint format/version");
    }
    LinearModel model;
    const auto d = j.at("input_dim").get<std::size_t>();
    const auto c = j.at("num_classes").get<std::size_t>();
    const auto w = j.at("weights").get<std::vector<double>>();
    if (w.size() != d * c) throw DataError(kModule, "weight count mismatch");
    model.weights = DenseMatrix(d, c);
    std::copy(w.begin(), w.end(), model.weights.data().begin());
    model.bias = j.at("bias").get<std::vector<double>>();
    if (model.bias.size() != c) throw DataError(kModule, "bias size mismatch");
    const auto& cfg = j.at("config");
    model.config.k_base = cfg.at("k_base").get<int>();
    model.config.epochs = cfg.at("epochs").get<int>();
    model.config.step = cfg.at("step").get<double>();
    model.config.momentum = cfg.at("momentum").get<double>();
    model.config.seed = cfg.at("seed").get<std::uint64_t>();
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(kModule, std::string("malformed checkpoint: ") + e.what());
  }
}

}  // namespace labelaudit
