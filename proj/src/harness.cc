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

#include "labelaudit/harness.h"

#include <cmath>

#include "json.hpp"
#include "labelaudit/conformal.h"
#include "labelaudit/csv.h"
#include "labelaudit/error.h"
#include "labelaudit/rng.h"

namespace labelaudit {
namespace {

enum Stage : std::uint64_t { kNoise = 100, kAudit = 200, kCurve = 300 };

MetricReport Evaluate(const char* method, const ExperimentConfig& config,
                      std::uint64_t seed, const std::vector<bool>& flags,
                      const std::vector<double>& scores,
                      const std::vector<bool>& truth,
                      const std::vector<std::size_t>& nodes) {
  MetricReport r;
  r.method = method;
  r.noise = config.noise;
  r.eps = config.eps;
  r.seed = seed;
  const auto confusion = Confuse(flags, truth, nodes);
  r.t_value = static_cast<std::size_t>(confusion.tp + confusion.fn);
  const auto f1 = F1(confusion);
  const auto mcc = Mcc(confusion);
  const auto pat = PrecisionAtT(scores, truth, r.t_value, nodes);
  r.f1 = f1.value;
  r.mcc = mcc.value;
  r.p_at_t = pat.value;
  r.degenerate = f1.degenerate || mcc.degenerate || pat.degenerate;
  return r;
}

double MeanOf(const std::vector<double>& xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  return xs.empty() ? 0.0 : sum / static_cast<double>(xs.size());
}

double StdOf(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double mean = MeanOf(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

}  // namespace

SeedRun RunSeed(const ExperimentConfig& config, std::uint64_t seed) {
  SeedRun run;
  SbmConfig sbm = config.sbm;
  sbm.seed = seed;
  run.clean = GenerateSbm(sbm);

  // Each split gets its own exact eps fraction of flips.
  run.noise = CorruptedLabels{run.clean.labels, run.clean.labels,
                              std::vector<bool>(run.clean.num_nodes, false), seed};
  for (Split split : {Split::kTrain, Split::kVal, Split::kTest}) {
    const auto nodes = run.clean.NodesIn(split);
    const auto part =
        InjectNoise(config.noise, run.clean.labels, nodes, run.clean.num_classes,
                    config.eps, StageSeed(seed, kNoise + static_cast<std::uint64_t>(split)));
    for (std::size_t v : nodes) {
      run.noise.labels_c[v] = part.labels_c[v];
      run.noise.flipped[v] = part.flipped[v];
    }
  }
  run.noisy = run.clean;
  run.noisy.labels = run.noise.labels_c;

  BaseTrainConfig base = config.base;
  base.seed = seed;
  run.base = TrainBase(run.noisy, base);

  AuditConfig audit;
  audit.k_hops = config.k_hops;
  audit.detector = config.detector;
  audit.seed = StageSeed(seed, kAudit);
  run.audit = RunAudit(run.noisy, run.base.probs, audit);

  run.test_nodes = run.clean.NodesIn(Split::kTest);
  std::size_t correct = 0;
  for (std::size_t v : run.test_nodes) {
    correct += static_cast<int>(ArgMax(run.base.probs.row(v))) == run.clean.labels[v];
  }
  run.clean_test_accuracy =
      run.test_nodes.empty() ? 0.0
                             : static_cast<double>(correct) / static_cast<double>(run.test_nodes.size());

  const auto flags = Classify(run.audit.scores, config.threshold);
  run.ours = Evaluate(kOurMethod, config, seed, flags, run.audit.scores,
                      run.noise.flipped, run.test_nodes);
  run.baseline = Evaluate(kBaselineMethod, config, seed,
                          BaselineArgmax(run.base.probs, run.noisy.labels),
                          BaselineScores(run.base.probs, run.noisy.labels),
                          run.noise.flipped, run.test_nodes);
  return run;
}

std::vector<MetricReport> RunExperiment(const ExperimentConfig& config) {
  auto seeds = config.seeds;
  std::sort(seeds.begin(), seeds.end());
  std::vector<MetricReport> out;
  for (std::uint64_t seed : seeds) {
    const SeedRun run = RunSeed(config, seed);
    out.push_back(run.ours);
    out.push_back(run.baseline);
  }
  return out;
}

std::string FormatReportCsv(const std::vector<MetricReport>& reports) {
  std::string out = "method,noise,eps,seed,f1,mcc,p_at_t\n";
  for (const auto& r : reports) {
    out += r.method + ',' + NoiseName(r.noise) + ',' + csv::FormatDouble(r.eps) + ',' +
           std::to_string(r.seed) + ',' + csv::FormatDouble(r.f1) + ',' +
           csv::FormatDouble(r.mcc) + ',' + csv::FormatDouble(r.p_at_t) + '\n';
  }
  return out;
}

std::vector<MetricSummary> Summarize(const std::vector<MetricReport>& reports) {
  struct Group {
    MetricSummary summary;
    std::vector<double> f1, mcc, pat;
  };
  std::vector<Group> groups;
  for (const auto& r : reports) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) {
      return g.summary.method == r.method && g.summary.noise == r.noise &&
             g.summary.eps == r.eps;
    });
    if (it == groups.end()) {
      groups.push_back({});
      it = groups.end() - 1;
      it->summary.method = r.method;
      it->summary.noise = r.noise;
      it->summary.eps = r.eps;
    }
    it->f1.push_back(r.f1);
    it->mcc.push_back(r.mcc);
    it->pat.push_back(r.p_at_t);
  }
  std::vector<MetricSummary> out;
  for (auto& g : groups) {
    g.summary.runs = g.f1.size();
    g.summary.f1_mean = MeanOf(g.f1);
    g.summary.f1_std = StdOf(g.f1);
    g.summary.mcc_mean = MeanOf(g.mcc);
    g.summary.mcc_std = StdOf(g.mcc);
    g.summary.p_at_t_mean = MeanOf(g.pat);
    g.summary.p_at_t_std = StdOf(g.pat);
    out.push_back(g.summary);
  }
  return out;
}

std::string FormatSummaryJson(const std::vector<MetricSummary>& summary) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& s : summary) {
    rows.push_back({{"method", s.method},
                    {"noise", NoiseName(s.noise)},
                    {"eps", s.eps},
                    {"runs", s.runs},
                    {"f1", {{"mean", s.f1_mean}, {"std", s.f1_std}}},
                    {"mcc", {{"mean", s.mcc_mean}, {"std", s.mcc_std}}},
                    {"p_at_t", {{"mean", s.p_at_t_mean}, {"std", s.p_at_t_std}}}});
  }
  return nlohmann::json{{"summary", rows}}.dump(2) + "\n";
}

std::vector<FpCurvePoint> ConformalFpCurve(const std::vector<double>& scores,
                                           const std::vector<bool>& truth,
                                           std::vector<std::size_t> nodes, double p,
                                           const std::vector<double>& alphas,
                                           std::uint64_t seed) {
  if (nodes.size() < 4) throw DataError("eval_harness", "too few nodes for a conformal curve");
  RandomStream rng = RandomStream(seed).Split(kCurve);
  Shuffle(std::span<std::size_t>(nodes), rng);
  const std::size_t half = nodes.size() / 2;
  std::vector<double> calibration;
  for (std::size_t i = 0; i < half; ++i) calibration.push_back(scores[nodes[i]]);
  std::vector<FpCurvePoint> out;
  for (double alpha : alphas) {
    FpCurvePoint point;
    point.alpha = alpha;
    try {
      point.lambda = FpThreshold(calibration, p, alpha).lambda;
    } catch (const Error&) {
      continue;  // alpha outside the attainable range at this N
    }
    std::size_t clean = 0, false_pos = 0;
    for (std::size_t i = half; i < nodes.size(); ++i) {
      if (truth[nodes[i]]) continue;
      ++clean;
      false_pos += scores[nodes[i]] > point.lambda;
    }
    point.observed = clean ? static_cast<double>(false_pos) / static_cast<double>(clean) : 0.0;
    out.push_back(point);
  }
  return out;
}

std::string FormatFpCurve(const std::vector<FpCurvePoint>& points) {
  std::string out = "# alpha lambda observed_fp_rate\n";
  for (const auto& pt : points) {
    out += csv::FormatDouble(pt.alpha) + ' ' + csv::FormatDouble(pt.lambda) + ' ' +
           csv::FormatDouble(pt.observed) + '\n';
  }
  return out;
}

}  // namespace labelaudit
