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

#include "labelaudit/conformal.h"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "labelaudit/error.h"

namespace labelaudit {
namespace {

constexpr char kModule[] = "conformal";

// Ceiling that treats values within rounding noise of an integer as that
// integer, so (N+1)(1-a) with a = 0.1, N = 9 gives 9 and not 10.
double StableCeil(double x) {
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, std::abs(x))) return nearest;
  return std::ceil(x);
}

ConformalThreshold FromScores(ConformalMode mode, std::vector<double> sorted,
                              double p, double alpha) {
  if (sorted.empty()) throw DataError(kModule, "no calibration scores");
  ConformalThreshold t;
  t.mode = mode;
  t.alpha = alpha;
  t.p = p;
  t.n_total = sorted.size();
  t.b_index = ConformalIndex(mode, sorted.size(), p, alpha);
  std::sort(sorted.begin(), sorted.end());
  t.lambda = sorted[t.b_index - 1];
  return t;
}

}  // namespace

const char* ConformalModeName(ConformalMode mode) {
  return mode == ConformalMode::kFalsePositive ? "false_positive" : "false_negative";
}

std::size_t ConformalIndex(ConformalMode mode, std::size_t n, double p,
                           double alpha) {
  if (n == 0) throw DataError(kModule, "no calibration scores");
  const double nd = static_cast<double>(n);
  if (!(alpha > 1.0 / (nd + 1.0) && alpha < 1.0)) {
    throw UsageError(kModule, "alpha must lie in (1/(N+1), 1) = (" +
                                  std::to_string(1.0 / (nd + 1.0)) + ", 1)");
  }
  if (!(p >= 0.0 && p < 1.0)) throw UsageError(kModule, "p must lie in [0, 1)");
  const double x = mode == ConformalMode::kFalsePositive
                       ? (nd * (1.0 - p) + 1.0) * (1.0 - alpha) + nd * p
                       : (nd * p + 1.0) * (1.0 - alpha) + nd * (1.0 - p);
  const double b = StableCeil(x);
  if (b > nd) {
    throw DataError(kModule, "guarantee unattainable at this N: B = " +
                                 std::to_string(static_cast<long long>(b)) +
                                 " exceeds N = " + std::to_string(n));
  }
  return static_cast<std::size_t>(std::max(1.0, b));
}

ConformalThreshold FpThreshold(std::span<const double> scores, double p,
                               double alpha) {
  return FromScores(ConformalMode::kFalsePositive,
                    std::vector<double>(scores.begin(), scores.end()), p, alpha);
}

std::vector<double> ModifiedScores(std::span<const double> scores) {
  std::vector<double> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out[i] = scores[i] > 0.5 ? 1.0 - scores[i] : 0.0;
  }
  return out;
}

ConformalThreshold FnThreshold(std::span<const double> scores, double p,
                               double alpha) {
  return FromScores(ConformalMode::kFalseNegative, ModifiedScores(scores), p, alpha);
}

bool ConformalFlag(const ConformalThreshold& t, double score) {
  if (t.mode == ConformalMode::kFalsePositive) return score > t.lambda;
  return score > 0.5 && 1.0 - score <= t.lambda;
}

std::vector<bool> ConformalFlags(const ConformalThreshold& t,
                                 std::span<const double> scores) {
  std::vector<bool> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) out[i] = ConformalFlag(t, scores[i]);
  return out;
}

std::string ConformalToJson(const ConformalThreshold& t) {
  nlohmann::json j;
  j["mode"] = ConformalModeName(t.mode);
  j["alpha"] = t.alpha;
  j["p"] = t.p;
  j["N"] = t.n_total;
  j["B"] = t.b_index;
  j["lambda"] = t.lambda;
  return j.dump(2) + "\n";
}

}  // namespace labelaudit
