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

#include "labelaudit/policy.h"

#include <charconv>

#include "labelaudit/csv.h"
#include "labelaudit/detector.h"
#include "labelaudit/error.h"

namespace labelaudit {
namespace {

constexpr char kModule[] = "cli";
constexpr char kForms[] =
    "expected fixed:<x>, bayes:<rate>, conformal-fp:<alpha>,<p> or "
    "conformal-fn:<alpha>,<p>";

double Number(std::string_view text, std::string_view whole) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError(kModule, "bad threshold policy '" + std::string(whole) + "': " + kForms);
  }
  return value;
}

}  // namespace

std::string ThresholdPolicy::ToString() const {
  switch (kind) {
    case Kind::kFixed:
      return "fixed:" + csv::FormatDouble(value);
    case Kind::kBayes:
      return "bayes:" + csv::FormatDouble(value);
    case Kind::kConformalFp:
      return "conformal-fp:" + csv::FormatDouble(alpha) + "," + csv::FormatDouble(p);
    case Kind::kConformalFn:
      return "conformal-fn:" + csv::FormatDouble(alpha) + "," + csv::FormatDouble(p);
  }
  return "";
}

ThresholdPolicy ParsePolicy(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw UsageError(kModule, "bad threshold policy '" + std::string(text) + "': " + kForms);
  }
  const auto name = text.substr(0, colon);
  const auto args = text.substr(colon + 1);
  ThresholdPolicy policy;
  if (name == "fixed" || name == "bayes") {
    policy.kind = name == "fixed" ? ThresholdPolicy::Kind::kFixed
                                  : ThresholdPolicy::Kind::kBayes;
    policy.value = Number(args, text);
    if (policy.kind == ThresholdPolicy::Kind::kFixed &&
        !(policy.value >= 0.0 && policy.value <= 1.0)) {
      throw UsageError(kModule, "fixed threshold must lie in [0, 1]");
    }
    if (policy.kind == ThresholdPolicy::Kind::kBayes) BayesThreshold(policy.value);
    return policy;
  }
  if (name == "conformal-fp" || name == "conformal-fn") {
    policy.kind = name == "conformal-fp" ? ThresholdPolicy::Kind::kConformalFp
                                         : ThresholdPolicy::Kind::kConformalFn;
    const auto comma = args.find(',');
    if (comma == std::string_view::npos) {
      throw UsageError(kModule, "bad threshold policy '" + std::string(text) + "': " + kForms);
    }
    policy.alpha = Number(args.substr(0, comma), text);
    policy.p = Number(args.substr(comma + 1), text);
    if (!(policy.alpha > 0.0 && policy.alpha < 1.0)) {
      throw UsageError(kModule, "conformal alpha must lie in (0, 1)");
    }
    if (!(policy.p >= 0.0 && policy.p < 1.0)) {
      throw UsageError(kModule, "conformal p must lie in [0, 1)");
    }
    return policy;
  }
  throw UsageError(kModule, "bad threshold policy '" + std::string(text) + "': " + kForms);
}

PolicyDecision ApplyPolicy(const ThresholdPolicy& policy,
                           std::span<const double> scores) {
  PolicyDecision d;
  switch (policy.kind) {
    case ThresholdPolicy::Kind::kFixed:
      d.threshold = policy.value;
      d.flags = Classify(scores, d.threshold);
      break;
    case ThresholdPolicy::Kind::kBayes:
      d.threshold = BayesThreshold(policy.value);
      d.flags = Classify(scores, d.threshold);
      break;
    case ThresholdPolicy::Kind::kConformalFp:
    case ThresholdPolicy::Kind::kConformalFn: {
      const auto t = policy.kind == ThresholdPolicy::Kind::kConformalFp
                         ? FpThreshold(scores, policy.p, policy.alpha)
                         : FnThreshold(scores, policy.p, policy.alpha);
      d.threshold = t.lambda;
      d.flags = ConformalFlags(t, scores);
      d.conformal = t;
      break;
    }
  }
  return d;
}

}  // namespace labelaudit
