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

// Synthetic experiments: generate an SBM graph, inject label noise into
// every split, train the base classifier on the noisy labels, audit, and
// score the detector and the argmax baseline on the test split against the
// injected flips.

#ifndef LABELAUDIT_HARNESS_H_
#define LABELAUDIT_HARNESS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "labelaudit/audit.h"
#include "labelaudit/base_classifier.h"
#include "labelaudit/metrics.h"
#include "labelaudit/noise.h"
#include "labelaudit/sbm.h"

namespace labelaudit {

struct ExperimentConfig {
  SbmConfig sbm;
  NoiseKind noise = NoiseKind::kSymmetric;
  double eps = 0.1;
  int k_hops = 2;
  BaseTrainConfig base;
  DetectorConfig detector;
  double threshold = kDefaultFlagThreshold;
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
};

struct MetricReport {
  std::string method;  // "labelaudit" or "baseline_argmax"
  NoiseKind noise = NoiseKind::kSymmetric;
  double eps = 0.0;
  std::uint64_t seed = 0;
  double f1 = 0.0;
  double mcc = 0.0;
  double p_at_t = 0.0;
  std::size_t t_value = 0;
  bool degenerate = false;  // some metric had an undefined denominator
};

inline constexpr char kOurMethod[] = "labelaudit";
inline constexpr char kBaselineMethod[] = "baseline_argmax";

// Everything one seed produces, for tests and diagnostics.
struct SeedRun {
  Graph clean;
  Graph noisy;
  CorruptedLabels noise;
  BaseTrainResult base;
  AuditResult audit;
  std::vector<std::size_t> test_nodes;
  // Base-classifier accuracy on the test split against the clean labels.
  double clean_test_accuracy = 0.0;
  MetricReport ours;
  MetricReport baseline;
};

SeedRun RunSeed(const ExperimentConfig& config, std::uint64_t seed);

// Two reports per seed (ours first), ordered by seed.
std::vector<MetricReport> RunExperiment(const ExperimentConfig& config);

// CSV: method,noise,eps,seed,f1,mcc,p_at_t
std::string FormatReportCsv(const std::vector<MetricReport>& reports);

struct MetricSummary {
  std::string method;
  NoiseKind noise = NoiseKind::kSymmetric;
  double eps = 0.0;
  std::size_t runs = 0;
  double f1_mean = 0.0, f1_std = 0.0;
  double mcc_mean = 0.0, mcc_std = 0.0;
  double p_at_t_mean = 0.0, p_at_t_std = 0.0;
};

// Groups by (method, noise, eps) in first-appearance order. Standard
// deviations use the n - 1 denominator (0 for a single run).
std::vector<MetricSummary> Summarize(const std::vector<MetricReport>& reports);
std::string FormatSummaryJson(const std::vector<MetricSummary>& summary);

// Theoretical versus observed false-positive rate of the conformal
// threshold. The nodes are split in half by `seed`: the first half
// calibrates lambda (mislabel fraction p), the clean nodes of the second
// half measure the observed rate of s > lambda.
struct FpCurvePoint {
  double alpha = 0.0;
  double lambda = 0.0;
  double observed = 0.0;
};
std::vector<FpCurvePoint> ConformalFpCurve(const std::vector<double>& scores,
                                           const std::vector<bool>& truth,
                                           std::vector<std::size_t> nodes, double p,
                                           const std::vector<double>& alphas,
                                           std::uint64_t seed);
// gnuplot-friendly: "# alpha lambda observed" then one row per point.
std::string FormatFpCurve(const std::vector<FpCurvePoint>& points);

}  // namespace labelaudit

#endif  // LABELAUDIT_HARNESS_H_
