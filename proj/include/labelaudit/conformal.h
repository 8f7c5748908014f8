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

// Conformal score thresholds for a calibration set of N scores of which a
// fraction p is mislabelled.
//
// False-positive mode: lambda = s_(B) with B = ceil((N(1-p)+1)(1-a) + Np).
// A fresh correctly labelled sample then satisfies s <= lambda with
// probability at least 1 - a, so flagging s > lambda bounds false positives.
//
// False-negative mode works on s' = (1-s) 1{s > 0.5}: lambda = s'_(B) with
// B = ceil((Np+1)(1-a) + N(1-p)). A fresh mislabelled sample satisfies
// s' <= lambda with probability at least 1 - a.
//
// Only exchangeability of the scores is assumed.

#ifndef LABELAUDIT_CONFORMAL_H_
#define LABELAUDIT_CONFORMAL_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace labelaudit {

enum class ConformalMode { kFalsePositive, kFalseNegative };
const char* ConformalModeName(ConformalMode mode);

struct ConformalThreshold {
  ConformalMode mode = ConformalMode::kFalsePositive;
  double alpha = 0.0;
  double p = 0.0;
  std::size_t n_total = 0;
  std::size_t b_index = 0;  // 1-based order statistic
  double lambda = 0.0;
};

// B for the given mode. Throws a usage error when alpha lies outside
// (1/(N+1), 1) or p outside [0, 1), and a data error when B exceeds N.
std::size_t ConformalIndex(ConformalMode mode, std::size_t n, double p,
                           double alpha);

ConformalThreshold FpThreshold(std::span<const double> scores, double p,
                               double alpha);

std::vector<double> ModifiedScores(std::span<const double> scores);

ConformalThreshold FnThreshold(std::span<const double> scores, double p,
                               double alpha);

// False-positive mode flags s > lambda. False-negative mode flags nodes whose
// modified score is within the threshold: s > 0.5 and 1 - s <= lambda.
bool ConformalFlag(const ConformalThreshold& t, double score);
std::vector<bool> ConformalFlags(const ConformalThreshold& t,
                                 std::span<const double> scores);

// {"mode", "alpha", "p", "N", "B", "lambda"}
std::string ConformalToJson(const ConformalThreshold& t);

}  // namespace labelaudit

#endif  // LABELAUDIT_CONFORMAL_H_
