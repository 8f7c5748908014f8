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

#include "labelaudit/detector.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"
#include "labelaudit/error.h"
#include "labelaudit/rng.h"

namespace labelaudit {
namespace {

constexpr char kModule[] = "mislabel_detector";
constexpr int kCheckpointVersion = 1;
constexpr std::size_t kMinTrainingRows = 20;

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// Per-row activations for one forward pass. pre[l] holds layer l's
// pre-activation, post[l] its output (post[0] is the input row).
struct Trace {
  std::vector<std::vector<double>> pre;
  std::vector<std::vector<double>> post;
};

double Forward(const DetectorModel& m, std::span<const double> x, Trace* trace) {
  const std::size_t layers = m.num_layers();
  std::vector<double> in(x.begin(), x.end());
  if (trace) {
    trace->pre.resize(layers);
    trace->post.resize(layers + 1);
    trace->post[0] = in;
  }
  double out = 0.0;
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t n_in = m.layer_sizes[l], n_out = m.layer_sizes[l + 1];
    const double* w = m.params.data() + m.WeightOffset(l);
    const double* b = w + n_in * n_out;
    std::vector<double> z(n_out);
    for (std::size_t o = 0; o < n_out; ++o) {
      double sum = b[o];
      const double* row = w + o * n_in;
      for (std::size_t i = 0; i < n_in; ++i) sum += row[i] * in[i];
      z[o] = sum;
    }
    const bool last = l + 1 == layers;
    std::vector<double> a(n_out);
    for (std::size_t o = 0; o < n_out; ++o) {
      a[o] = last ? Sigmoid(z[o]) : std::max(0.0, z[o]);
    }
    if (trace) {
      trace->pre[l] = z;
      trace->post[l + 1] = a;
    }
    if (last) out = a[0];
    in = std::move(a);
  }
  return out;
}

std::size_t ParamCount(const std::vector<std::size_t>& sizes) {
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    total += sizes[l] * sizes[l + 1] + sizes[l + 1];
  }
  return total;
}

double MeanAbsError(const DetectorModel& m, const DenseMatrix& z,
                    std::span<const double> targets,
                    std::span<const std::size_t> rows) {
  double sum = 0.0;
  for (std::size_t r : rows) sum += std::abs(Forward(m, z.row(r), nullptr) - targets[r]);
  return rows.empty() ? 0.0 : sum / static_cast<double>(rows.size());
}

}  // namespace

std::size_t DetectorModel::WeightOffset(std::size_t l) const {
  std::size_t offset = 0;
  for (std::size_t i = 0; i < l; ++i) {
    offset += layer_sizes[i] * layer_sizes[i + 1] + layer_sizes[i + 1];
  }
  return offset;
}

DetectorModel InitDetector(std::size_t input_dim, const DetectorConfig& config) {
  if (input_dim == 0) throw DataError(kModule, "empty feature rows");
  DetectorModel m;
  m.config = config;
  m.layer_sizes.push_back(input_dim);
  for (std::size_t h : config.hidden) {
    if (h == 0) throw UsageError(kModule, "hidden layer width must be positive");
    m.layer_sizes.push_back(h);
  }
  m.layer_sizes.push_back(1);
  m.params.assign(ParamCount(m.layer_sizes), 0.0);
  RandomStream rng = RandomStream(config.seed).Split(0);
  for (std::size_t l = 0; l < m.num_layers(); ++l) {
    const std::size_t n_in = m.layer_sizes[l], n_out = m.layer_sizes[l + 1];
    const bool last = l + 1 == m.num_layers();
    const double scale = std::sqrt((last ? 1.0 : 2.0) / static_cast<double>(n_in));
    double* w = m.params.data() + m.WeightOffset(l);
    for (std::size_t i = 0; i < n_in * n_out; ++i) w[i] = scale * rng.Normal();
  }
  return m;
}

double L1Loss(const DetectorModel& model, const DenseMatrix& z,
              std::span<const double> targets, std::span<const std::size_t> rows,
              std::vector<double>* grad) {
  if (z.cols() != model.input_dim()) {
    throw DataError(kModule, "feature width does not match the model input");
  }
  if (grad) grad->assign(model.params.size(), 0.0);
  if (rows.empty()) return 0.0;
  const double inv_n = 1.0 / static_cast<double>(rows.size());
  const std::size_t layers = model.num_layers();
  double loss = 0.0;
  Trace trace;
  for (std::size_t r : rows) {
    const double out = Forward(model, z.row(r), grad ? &trace : nullptr);
    const double diff = out - targets[r];
    loss += std::abs(diff);
    if (!grad) continue;

    const double sign = diff > 0 ? 1.0 : diff < 0 ? -1.0 : 0.0;
    std::vector<double> delta = {sign * out * (1.0 - out) * inv_n};
    for (std::size_t l = layers; l-- > 0;) {
      const std::size_t n_in = model.layer_sizes[l], n_out = model.layer_sizes[l + 1];
      const std::size_t offset = model.WeightOffset(l);
      const double* w = model.params.data() + offset;
      double* gw = grad->data() + offset;
      double* gb = gw + n_in * n_out;
      const auto& a_in = trace.post[l];
      for (std::size_t o = 0; o < n_out; ++o) {
        if (delta[o] == 0.0) continue;
        gb[o] += delta[o];
        double* grow = gw + o * n_in;
        for (std::size_t i = 0; i < n_in; ++i) grow[i] += delta[o] * a_in[i];
      }
      if (l == 0) break;
      std::vector<double> next(n_in, 0.0);
      for (std::size_t o = 0; o < n_out; ++o) {
        if (delta[o] == 0.0) continue;
        const double* row = w + o * n_in;
        for (std::size_t i = 0; i < n_in; ++i) next[i] += row[i] * delta[o];
      }
      for (std::size_t i = 0; i < n_in; ++i) {
        if (trace.pre[l - 1][i] <= 0.0) next[i] = 0.0;
      }
      delta = std::move(next);
    }
  }
  return loss * inv_n;
}

DetectorTrainResult TrainDetector(const DenseMatrix& z,
                                  const std::vector<bool>& flipped,
                                  const DetectorConfig& config) {
  const std::size_t n = z.rows();
  if (flipped.size() != n) throw DataError(kModule, "target count does not match rows");
  if (n < kMinTrainingRows) {
    throw DataError(kModule, "need at least " + std::to_string(kMinTrainingRows) +
                                 " training rows, got " + std::to_string(n));
  }
  const auto positives = std::count(flipped.begin(), flipped.end(), true);
  if (positives == 0 || static_cast<std::size_t>(positives) == n) {
    throw DataError(kModule, "degenerate training targets: all flags are equal");
  }
  if (!z.AllFinite()) throw DataError(kModule, "non-finite training features");
  if (!(config.holdout_fraction > 0.0 && config.holdout_fraction < 1.0)) {
    throw UsageError(kModule, "holdout fraction must lie in (0, 1)");
  }

  std::vector<double> targets(n);
  for (std::size_t i = 0; i < n; ++i) targets[i] = flipped[i] ? 1.0 : 0.0;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  RandomStream rng = RandomStream(config.seed).Split(1);
  Shuffle(std::span<std::size_t>(order), rng);
  const auto n_hold = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(config.holdout_fraction * static_cast<double>(n))));
  const std::span<const std::size_t> hold(order.data(), n_hold);
  const std::span<const std::size_t> train(order.data() + n_hold, n - n_hold);

  DetectorModel model = InitDetector(z.cols(), config);
  DetectorModel best = model;
  double best_mae = MeanAbsError(model, z, targets, hold);
  std::vector<double> velocity(model.params.size(), 0.0), grad;
  int since_best = 0;
  int epoch = 0;
  while (epoch < config.max_epochs) {
    ++epoch;
    L1Loss(model, z, targets, train, &grad);
    for (std::size_t i = 0; i < grad.size(); ++i) {
      velocity[i] = config.momentum * velocity[i] - config.step * grad[i];
      model.params[i] += velocity[i];
    }
    const double mae = MeanAbsError(model, z, targets, hold);
    if (mae < best_mae) {
      best_mae = mae;
      best = model;
      since_best = 0;
    } else if (++since_best >= config.patience) {
      break;
    }
  }
  DetectorTrainResult result;
  result.model = std::move(best);
  result.holdout_mae = best_mae;
  result.train_mae = MeanAbsError(result.model, z, targets, train);
  result.epochs = epoch;
  return result;
}

double ScoreRow(const DetectorModel& model, std::span<const double> features) {
  if (features.size() != model.input_dim()) {
    throw DataError(kModule, "feature width does not match the model input");
  }
  return Forward(model, features, nullptr);
}

std::vector<double> Score(const DetectorModel& model, const DenseMatrix& z) {
  std::vector<double> out(z.rows());
  for (std::size_t v = 0; v < z.rows(); ++v) out[v] = ScoreRow(model, z.row(v));
  return out;
}

std::vector<bool> Classify(std::span<const double> scores, double threshold) {
  std::vector<bool> flags(scores.size());
  for (std::size_t v = 0; v < scores.size(); ++v) flags[v] = scores[v] > threshold;
  return flags;
}

double BayesThreshold(double expected_rate) {
  if (!(expected_rate > 0.0 && expected_rate < 1.0)) {
    throw UsageError(kModule, "expected mislabel rate must lie in (0, 1)");
  }
  return 1.0 - expected_rate;
}

std::vector<std::optional<int>> SuggestCorrections(const std::vector<bool>& flags,
                                                   const SoftmaxMatrix& p) {
  if (flags.size() != p.num_nodes()) {
    throw DataError(kModule, "flag count does not match prediction rows");
  }
  std::vector<std::optional<int>> out(flags.size());
  for (std::size_t v = 0; v < flags.size(); ++v) {
    if (flags[v]) out[v] = static_cast<int>(ArgMax(p.row(v)));
  }
  return out;
}

std::string SerializeDetector(const DetectorModel& model) {
  nlohmann::json j;
  j["format"] = "labelaudit-detector";
  j["version"] = kCheckpointVersion;
  j["layer_sizes"] = model.layer_sizes;
  j["activation"] = {{"hidden", "relu"}, {"output", "sigmoid"}};
  j["params"] = model.params;
  const auto& c = model.config;
  j["config"] = {{"hidden", c.hidden},     {"step", c.step},
                 {"momentum", c.momentum}, {"max_epochs", c.max_epochs},
                 {"patience", c.patience}, {"holdout_fraction", c.holdout_fraction},
                 {"seed", c.seed}};
  return j.dump(2) + "\n";
}

DetectorModel ParseDetector(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("format") != "labelaudit-detector" ||
        j.at("version").get<int>() != kCheckpointVersion) {
      throw DataError(kModule, "unsupported checkpoint format/version");
    }
    DetectorModel m;
    m.layer_sizes = j.at("layer_sizes").get<std::vector<std::size_t>>();
    if (m.layer_sizes.size() < 2 || m.layer_sizes.back() != 1) {
      throw DataError(kModule, "bad layer sizes");
    }
    m.params = j.at("params").get<std::vector<double>>();
    if (m.params.size() != ParamCount(m.layer_sizes)) {
      throw DataError(kModule, "parameter count mismatch");
    }
    const auto& c = j.at("config");
    m.config.hidden = c.at("hidden").get<std::vector<std::size_t>>();
    m.config.step = c.at("step").get<double>();
    m.config.momentum = c.at("momentum").get<double>();
    m.config.max_epochs = c.at("max_epochs").get<int>();
    m.config.patience = c.at("patience").get<int>();
    m.config.holdout_fraction = c.at("holdout_fraction").get<double>();
    m.config.seed = c.at("seed").get<std::uint64_t>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(kModule, std::string("malformed detector checkpoint: ") + e.what());
  }
}

}  // namespace labelaudit
