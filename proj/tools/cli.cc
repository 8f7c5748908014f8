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

#include "cli.h"

#include <atomic>
#include <csignal>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "labelaudit/audit.h"
#include "labelaudit/base_classifier.h"
#include "labelaudit/conformal.h"
#include "labelaudit/csv.h"
#include "labelaudit/error.h"
#include "labelaudit/features.h"
#include "labelaudit/graph.h"
#include "labelaudit/harness.h"
#include "labelaudit/noise.h"
#include "labelaudit/policy.h"
#include "labelaudit/report.h"
#include "labelaudit/review_service.h"
#include "labelaudit/sbm.h"
#include "labelaudit/verdict.h"

namespace labelaudit {
namespace {

constexpr char kModule[] = "cli";

struct GraphArgs {
  std::string edges, labels, splits, features;
  std::optional<int> num_classes;

  void Add(CLI::App* cmd) {
    cmd->add_option("--edges", edges, "Edge list, one 'u v' pair per line")->required();
    cmd->add_option("--labels", labels, "Label CSV (node_id,label)")->required();
    cmd->add_option("--splits", splits, "Split CSV (node_id,split)")->required();
    cmd->add_option("--features", features, "Node feature CSV");
    cmd->add_option("--num-classes", num_classes,
                    "Class count (default: max label + 1)")
        ->check(CLI::PositiveNumber);
  }
  Graph Load() const {
    GraphFiles files{edges, labels, splits, std::nullopt};
    if (!features.empty()) files.features = features;
    return LoadGraph(files, num_classes);
  }
};

void AddSbmOptions(CLI::App* cmd, SbmConfig& c) {
  cmd->add_option("--n", c.n, "Number of nodes")->capture_default_str();
  cmd->add_option("--c", c.c, "Number of classes")->capture_default_str();
  cmd->add_option("--p-in", c.p_in, "Within-class edge probability")->capture_default_str();
  cmd->add_option("--p-out", c.p_out, "Cross-class edge probability")->capture_default_str();
  cmd->add_option("--d", c.d, "Feature dimension")->capture_default_str();
  cmd->add_option("--signal", c.signal, "Class-mean feature offset")->capture_default_str();
  cmd->add_option("--train-fraction", c.train_fraction)->capture_default_str();
  cmd->add_option("--val-fraction", c.val_fraction)->capture_default_str();
  cmd->add_option("--test-fraction", c.test_fraction)->capture_default_str();
}

void AddBaseOptions(CLI::App* cmd, BaseTrainConfig& b) {
  cmd->add_option("--base-k", b.k_base, "Feature smoothing hops")->capture_default_str();
  cmd->add_option("--base-epochs", b.epochs)->capture_default_str();
  cmd->add_option("--base-step", b.step)->capture_default_str();
  cmd->add_option("--base-momentum", b.momentum)->capture_default_str();
}

void AddDetectorOptions(CLI::App* cmd, DetectorConfig& d) {
  cmd->add_option("--detector-epochs", d.max_epochs)->capture_default_str();
  cmd->add_option("--detector-step", d.step)->capture_default_str();
  cmd->add_option("--detector-momentum", d.momentum)->capture_default_str();
  cmd->add_option("--detector-patience", d.patience)->capture_default_str();
}

void Write(const std::string& path, std::string_view text, std::ostream& out,
           const char* what) {
  csv::WriteWholeFile(path, text);
  out << "wrote " << what << " to " << path << '\n';
}

// ---------------------------------------------------------------- audit

struct AuditArgs {
  GraphArgs graph;
  std::string softmax;
  bool train_base = false;
  BaseTrainConfig base;
  int k_hops = 2;
  std::string threshold = "fixed:0.97";
  double synthetic_ratio = 0.5;
  DetectorConfig detector;
  std::string dataset;
  std::string out = "report.json";
  std::string softmax_out, features_out, detector_out;
};

void RunAuditCommand(const AuditArgs& a, std::uint64_t seed, std::ostream& out) {
  if (a.softmax.empty() == !a.train_base) {
    throw UsageError(kModule, "audit needs exactly one of --softmax FILE or --train-base");
  }
  const ThresholdPolicy policy = ParsePolicy(a.threshold);
  const Graph g = a.graph.Load();

  SoftmaxMatrix p;
  std::string base_source;
  if (a.train_base) {
    if (!g.features) throw UsageError(kModule, "--train-base needs --features");
    BaseTrainConfig base = a.base;
    base.seed = seed;
    const auto trained = TrainBase(g, base);
    p = trained.probs;
    base_source = "train";
    out << "base classifier train accuracy " << csv::FormatDouble(trained.train_accuracy)
        << '\n';
  } else {
    p = LoadSoftmax(a.softmax, g.num_nodes, g.num_classes);
    base_source = a.softmax;
  }

  AuditConfig config;
  config.k_hops = a.k_hops;
  config.synthetic_ratio = a.synthetic_ratio;
  config.detector = a.detector;
  config.seed = seed;
  const AuditResult result = RunAudit(g, p, config);

  ReportConfig rc;
  rc.k_hops = a.k_hops;
  rc.seed = seed;
  rc.synthetic_ratio = a.synthetic_ratio;
  rc.base_source = base_source;
  const std::string dataset =
      a.dataset.empty() ? std::filesystem::path(a.graph.labels).stem().string() : a.dataset;
  const AuditReport report = BuildReport(g, p, result, policy, rc, dataset);

  std::size_t flagged = 0;
  for (const auto& r : report.records) flagged += r.flagged;
  Write(a.out, ReportToJson(report), out, "audit report");
  if (!a.softmax_out.empty()) Write(a.softmax_out, FormatSoftmax(p), out, "predictions");
  if (!a.features_out.empty()) {
    const DenseMatrix y = OneHot(g.labels, g.num_classes);
    const auto z = BuildFeatures(NormalizedAdjacency(g), y, y, p, a.k_hops);
    Write(a.features_out, FormatAgreementFeatures(z), out, "agreement features");
  }
  if (!a.detector_out.empty()) {
    Write(a.detector_out, SerializeDetector(result.detector.model), out, "detector");
  }
  out << "audited " << report.records.size() << " labelled nodes, flagged " << flagged
      << " (policy " << report.config.threshold_policy << ", cutoff "
      << csv::FormatDouble(report.config.threshold) << ", seed " << seed << ")\n";
}

// ---------------------------------------------------------------- inject

struct InjectArgs {
  GraphArgs graph;
  std::string noise = "sym";
  double eps = 0.1;
  std::vector<std::string> splits = {"train", "val", "test"};
  std::string out = "corrupted.csv";
  std::string labels_out;
};

void RunInjectCommand(const InjectArgs& a, std::uint64_t seed, std::ostream& out) {
  const Graph g = a.graph.Load();
  std::vector<std::size_t> nodes;
  for (const auto& name : a.splits) {
    const auto split = ParseSplit(name);
    if (!split) throw UsageError(kModule, "unknown split '" + name + "'");
    const auto in = g.NodesIn(*split);
    nodes.insert(nodes.end(), in.begin(), in.end());
  }
  const NoiseKind kind = a.noise == "sym" ? NoiseKind::kSymmetric : NoiseKind::kAsymmetric;
  const auto corrupted = InjectNoise(kind, g.labels, nodes, g.num_classes, a.eps, seed);
  Write(a.out, FormatCorruptedLabels(corrupted), out, "corrupted labels");
  if (!a.labels_out.empty()) {
    Graph noisy = g;
    noisy.labels = corrupted.labels_c;
    Write(a.labels_out, FormatLabels(noisy), out, "noisy label file");
  }
  out << "flipped " << corrupted.NumFlipped() << " of " << nodes.size() << " nodes ("
      << a.noise << ", eps " << csv::FormatDouble(a.eps) << ", seed " << seed << ")\n";
}

// ---------------------------------------------------------------- gen-sbm

void RunGenSbmCommand(SbmConfig config, const std::string& dir, std::uint64_t seed,
                      std::ostream& out) {
  config.seed = seed;
  const Graph g = GenerateSbm(config);
  std::filesystem::create_directories(dir);
  const auto path = [&](const char* name) { return (std::filesystem::path(dir) / name).string(); };
  Write(path("edges.txt"), FormatEdges(g), out, "edges");
  Write(path("labels.csv"), FormatLabels(g), out, "labels");
  Write(path("splits.csv"), FormatSplits(g), out, "splits");
  Write(path("features.csv"), FormatFeatures(*g.features), out, "features");
  const nlohmann::json meta = {{"generator", "sbm"},     {"n", config.n},
                               {"c", config.c},          {"p_in", config.p_in},
                               {"p_out", config.p_out},  {"d", config.d},
                               {"signal", config.signal},
                               {"train_fraction", config.train_fraction},
                               {"val_fraction", config.val_fraction},
                               {"test_fraction", config.test_fraction},
                               {"seed", seed},           {"edges", g.edges.size()}};
  Write(path("sbm.json"), meta.dump(1) + "\n", out, "generator settings");
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
  ExperimentConfig base;
  std::vector<std::string> noises = {"sym"};
  std::vector<double> eps = {0.1};
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
  std::string csv_out = "report.csv";
  std::string summary_out = "summary.json";
  std::string fp_curve_out;
  std::vector<double> fp_alphas = {0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5};
};

void RunEvaluateCommand(const EvaluateArgs& a, const std::string& threshold,
                        std::ostream& out) {
  const ThresholdPolicy policy = ParsePolicy(threshold);
  if (policy.kind != ThresholdPolicy::Kind::kFixed &&
      policy.kind != ThresholdPolicy::Kind::kBayes) {
    throw UsageError(kModule, "evaluate supports fixed:<x> and bayes:<rate> thresholds");
  }
  std::vector<MetricReport> reports;
  for (const auto& noise : a.noises) {
    for (double eps : a.eps) {
      ExperimentConfig config = a.base;
      config.noise = noise == "sym" ? NoiseKind::kSymmetric : NoiseKind::kAsymmetric;
      config.eps = eps;
      config.seeds = a.seeds;
      config.threshold = ApplyPolicy(policy, std::vector<double>{}).threshold;
      const auto part = RunExperiment(config);
      reports.insert(reports.end(), part.begin(), part.end());
    }
  }
  const auto summary = Summarize(reports);
  Write(a.csv_out, FormatReportCsv(reports), out, "per-seed metrics");
  Write(a.summary_out, FormatSummaryJson(summary), out, "summary");
  for (const auto& s : summary) {
    out << s.method << ' ' << NoiseName(s.noise) << " eps=" << csv::FormatDouble(s.eps)
        << " F1=" << csv::FormatDouble(s.f1_mean) << " MCC=" << csv::FormatDouble(s.mcc_mean)
        << " P@T=" << csv::FormatDouble(s.p_at_t_mean) << " (" << s.runs << " seeds)\n";
  }
  if (!a.fp_curve_out.empty()) {
    ExperimentConfig config = a.base;
    config.noise = a.noises.front() == "sym" ? NoiseKind::kSymmetric : NoiseKind::kAsymmetric;
    config.eps = a.eps.front();
    const SeedRun run = RunSeed(config, a.seeds.front());
    const auto curve = ConformalFpCurve(run.audit.scores, run.noise.flipped, run.test_nodes,
                                        config.eps, a.fp_alphas, a.seeds.front());
    Write(a.fp_curve_out, FormatFpCurve(curve), out, "conformal FP curve");
  }
}

// ---------------------------------------------------------------- conformal

struct ConformalArgs {
  std::string report, scores;
  std::string mode = "fp";
  double alpha = 0.1;
  double p = 0.0;
  std::string out;
};

std::vector<double> ReadScores(const std::string& path) {
  const auto table = csv::ReadString(csv::ReadWholeFile(path), path, {"node_id", "score"});
  std::vector<double> out;
  for (const auto& rec : table.records) {
    if (rec.fields.size() != 2) throw ParseError(path, rec.line, "expected 2 fields");
    out.push_back(csv::ParseDouble(rec.fields[1], path, rec.line));
  }
  return out;
}

void RunConformalCommand(const ConformalArgs& a, std::ostream& out) {
  if (a.report.empty() == a.scores.empty()) {
    throw UsageError(kModule, "conformal needs exactly one of --report or --scores");
  }
  std::vector<double> scores;
  if (!a.report.empty()) {
    for (const auto& r : ReportFromJson(csv::ReadWholeFile(a.report)).records) {
      scores.push_back(r.score);
    }
  } else {
    scores = ReadScores(a.scores);
  }
  const auto t = a.mode == "fp" ? FpThreshold(scores, a.p, a.alpha)
                                : FnThreshold(scores, a.p, a.alpha);
  std::size_t flagged = 0;
  for (double s : scores) flagged += ConformalFlag(t, s);
  const std::string json = ConformalToJson(t);
  if (!a.out.empty()) {
    Write(a.out, json, out, "conformal threshold");
  } else {
    out << json;
  }
  out << "flagged " << flagged << " of " << scores.size() << " nodes\n";
}

// ---------------------------------------------------------------- export-clean

struct ExportArgs {
  std::string report, verdicts;
  std::string labels_out = "labels_clean.csv";
  std::string splits_out = "splits_clean.csv";
};

void RunExportCommand(const ExportArgs& a, std::ostream& out, std::ostream& err) {
  const AuditReport report = ReportFromJson(csv::ReadWholeFile(a.report));
  std::vector<Verdict> log;
  if (!a.verdicts.empty()) {
    log = ParseVerdictLog(csv::ReadWholeFile(a.verdicts), a.verdicts, report.num_nodes,
                          report.num_classes);
  }
  const EffectiveVerdicts verdicts = Resolve(log);
  for (const auto& c : verdicts.conflicts) err << "export-clean: conflict: " << c << '\n';
  const CleanedDataset cleaned = ExportClean(report, verdicts);
  Write(a.labels_out, cleaned.labels_csv, out, "cleaned labels");
  Write(a.splits_out, cleaned.splits_csv, out, "cleaned splits");
  out << "replaced " << cleaned.replaced << " labels, removed " << cleaned.removed
      << " labels from " << verdicts.by_node.size() << " reviewed nodes\n";
}

// ---------------------------------------------------------------- serve

struct ServeArgs {
  std::string report;
  GraphArgs graph;
  std::string verdicts = "verdicts.jsonl";
  std::string host = "127.0.0.1";
  int port = 8080;
};

std::atomic<ReviewService*> g_serving{nullptr};

extern "C" void StopServing(int) {
  if (ReviewService* s = g_serving.load()) s->Stop();
}

void RunServeCommand(const ServeArgs& a, std::ostream& out, std::ostream& err) {
  AuditReport report = ReportFromJson(csv::ReadWholeFile(a.report));
  GraphArgs graph_args = a.graph;
  if (!graph_args.num_classes) graph_args.num_classes = report.num_classes;
  const Graph g = graph_args.Load();
  ReviewService service(std::move(report), g, a.verdicts, &err);
  const int port = service.Bind(a.host, a.port);
  out << "serving http://" << a.host << ':' << port << "/api/report (verdict log "
      << a.verdicts << ")" << std::endl;
  g_serving = &service;
  auto old_int = std::signal(SIGINT, StopServing);
  auto old_term = std::signal(SIGTERM, StopServing);
  service.Listen();
  std::signal(SIGINT, old_int);
  std::signal(SIGTERM, old_term);
  g_serving = nullptr;
}

int ExitCodeFor(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::kUsage:
      return kExitUsage;
    case ErrorKind::kData:
      return kExitData;
    case ErrorKind::kInternal:
      return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"labelaudit: find and clean mislabelled nodes in graph datasets"};
  app.require_subcommand(1);
  app.set_config("--config", "", "INI/TOML key-value file; command-line flags take precedence");
  app.allow_config_extras(false);
  app.set_help_all_flag("--help-all", "Show help for every command");
  std::uint64_t seed = 0;
  std::string threshold = "fixed:0.97";
  const auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "Seed for all randomness")->capture_default_str();
  };
  const char* threshold_help =
      "fixed:<x> | bayes:<rate> | conformal-fp:<alpha>,<p> | conformal-fn:<alpha>,<p>";

  AuditArgs audit;
  auto* audit_cmd = app.add_subcommand("audit", "Score every labelled node and write a ranked report");
  audit.graph.Add(audit_cmd);
  audit_cmd->add_option("--softmax", audit.softmax, "Base-classifier prediction CSV");
  audit_cmd->add_flag("--train-base", audit.train_base,
                      "Train the built-in base classifier on --features");
  AddBaseOptions(audit_cmd, audit.base);
  audit_cmd->add_option("--k", audit.k_hops, "Propagation hops K")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  audit_cmd->add_option("--threshold", threshold, threshold_help)->capture_default_str();
  audit_cmd->add_option("--synthetic-ratio", audit.synthetic_ratio)->capture_default_str();
  AddDetectorOptions(audit_cmd, audit.detector);
  audit_cmd->add_option("--dataset", audit.dataset, "Dataset name recorded in the report");
  audit_cmd->add_option("--out", audit.out, "Report path")->capture_default_str();
  audit_cmd->add_option("--softmax-out", audit.softmax_out, "Also write the predictions");
  audit_cmd->add_option("--features-out", audit.features_out,
                        "Also write the agreement features");
  audit_cmd->add_option("--detector-out", audit.detector_out, "Also write the detector");
  add_seed(audit_cmd);

  InjectArgs inject;
  auto* inject_cmd = app.add_subcommand("inject", "Inject synthetic label noise");
  inject.graph.Add(inject_cmd);
  inject_cmd->add_option("--noise", inject.noise)
      ->check(CLI::IsMember({"sym", "asym"}))
      ->capture_default_str();
  inject_cmd->add_option("--eps", inject.eps, "Noise rate")->capture_default_str();
  inject_cmd->add_option("--split", inject.splits, "Splits to corrupt")
      ->delimiter(',')
      ->capture_default_str();
  inject_cmd->add_option("--out", inject.out, "Corrupted label CSV")->capture_default_str();
  inject_cmd->add_option("--labels-out", inject.labels_out,
                         "Also write a label file with the noisy labels");
  add_seed(inject_cmd);

  SbmConfig sbm;
  std::string sbm_dir = "sbm";
  auto* sbm_cmd = app.add_subcommand("gen-sbm", "Generate a stochastic block model dataset");
  AddSbmOptions(sbm_cmd, sbm);
  sbm_cmd->add_option("--out-dir", sbm_dir)->capture_default_str();
  add_seed(sbm_cmd);

  EvaluateArgs evaluate;
  auto* eval_cmd =
      app.add_subcommand("evaluate", "Run the SBM noise-injection benchmark against the argmax baseline");
  AddSbmOptions(eval_cmd, evaluate.base.sbm);
  AddBaseOptions(eval_cmd, evaluate.base.base);
  AddDetectorOptions(eval_cmd, evaluate.base.detector);
  eval_cmd->add_option("--noise", evaluate.noises)
      ->delimiter(',')
      ->check(CLI::IsMember({"sym", "asym"}))
      ->capture_default_str();
  eval_cmd->add_option("--eps", evaluate.eps)->delimiter(',')->capture_default_str();
  eval_cmd->add_option("--k", evaluate.base.k_hops)->capture_default_str();
  eval_cmd->add_option("--seeds", evaluate.seeds)->delimiter(',')->capture_default_str();
  eval_cmd->add_option("--threshold", threshold, "fixed:<x> | bayes:<rate>")
      ->capture_default_str();
  eval_cmd->add_option("--out-csv", evaluate.csv_out)->capture_default_str();
  eval_cmd->add_option("--out-summary", evaluate.summary_out)->capture_default_str();
  eval_cmd->add_option("--fp-curve", evaluate.fp_curve_out,
                       "Write the conformal FP-rate curve of the first run");
  eval_cmd->add_option("--fp-alphas", evaluate.fp_alphas)->delimiter(',');

  ConformalArgs conformal;
  auto* conf_cmd = app.add_subcommand("conformal", "Calibrate a conformal flag threshold");
  conf_cmd->add_option("--report", conformal.report, "Calibrate on a report's scores");
  conf_cmd->add_option("--scores", conformal.scores, "Score CSV (node_id,score)");
  conf_cmd->add_option("--mode", conformal.mode)
      ->check(CLI::IsMember({"fp", "fn"}))
      ->capture_default_str();
  conf_cmd->add_option("--alpha", conformal.alpha)->capture_default_str();
  conf_cmd->add_option("--p", conformal.p, "Expected mislabel rate")->capture_default_str();
  conf_cmd->add_option("--out", conformal.out, "Write the threshold JSON here");

  ExportArgs exp;
  auto* exp_cmd = app.add_subcommand("export-clean", "Apply reviewer verdicts and write cleaned files");
  exp_cmd->add_option("--report", exp.report)->required();
  exp_cmd->add_option("--verdicts", exp.verdicts, "Verdict log (JSON lines)");
  exp_cmd->add_option("--labels-out", exp.labels_out)->capture_default_str();
  exp_cmd->add_option("--splits-out", exp.splits_out)->capture_default_str();

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "Run the review HTTP API");
  serve_cmd->add_option("--report", serve.report)->required();
  serve.graph.Add(serve_cmd);
  serve_cmd->add_option("--verdicts", serve.verdicts)->capture_default_str();
  serve_cmd->add_option("--host", serve.host)->capture_default_str();
  serve_cmd->add_option("--port", serve.port, "0 picks a free port")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*audit_cmd) {
      audit.threshold = threshold;
      RunAuditCommand(audit, seed, out);
    } else if (*inject_cmd) {
      RunInjectCommand(inject, seed, out);
    } else if (*sbm_cmd) {
      RunGenSbmCommand(sbm, sbm_dir, seed, out);
    } else if (*eval_cmd) {
      RunEvaluateCommand(evaluate, threshold, out);
    } else if (*conf_cmd) {
      RunConformalCommand(conformal, out);
    } else if (*exp_cmd) {
      RunExportCommand(exp, out, err);
    } else if (*serve_cmd) {
      RunServeCommand(serve, out, err);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return ExitCodeFor(e);
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace labelaudit
