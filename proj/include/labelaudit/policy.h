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

// Flag policies turning mislabel scores into decisions:
//
//   fixed:<x>               flag s > x (default fixed:0.97)
//   bayes:<rate>            flag s > 1 - rate
//   conformal-fp:<a>,<p>    conformal false-positive threshold
//   conformal-fn:<a>,<p>    conformal false-negative threshold
//
// Conformal policies calibrate on the scores they are applied to.

#ifndef LABELAUDIT_POLICY_H_
#define LABELAUDIT_POLICY_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "labelaudit/conformal.h"

namespace labelaudit {

struct ThresholdPolicy {
  enum class Kind { kFixed, kBayes, kConformalFp, kConformalFn };
  Kind kind = Kind::kFixed;
  double value = 0.97;  // threshold for fixed, expected rate for bayes
  double alpha = 0.0;
  double p = 0.0;

  // Canonical text form, parseable by ParsePolicy.
  std::string ToString() const;
};

// Throws a usage error naming the accepted forms.
ThresholdPolicy ParsePolicy(std::string_view text);

struct PolicyDecision {
  std::vector<bool> flags;
  // Score cutoff for fixed/bayes; lambda for conformal policies.
  double threshold = 0.0;
  std::optional<ConformalThreshold> conformal;
};

PolicyDecision ApplyPolicy(const ThresholdPolicy& policy,
                           std::span<const double> scores);

}  // namespace labelaudit

#endif  // LABELAUDIT_POLICY_H_
