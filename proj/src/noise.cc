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

#include "labelaudit/noise.h"

#include <algorithm>
#include <cmath>

#include "labelaudit/csv.h"
#include "labelaudit/error.h"
#include "labelaudit/rng.h"

namespace labelaudit {
namespace {

constexpr char kModule[] = "noise_injector";
constexpr double kMinOffDiagonalMass = 1e-12;

CorruptedLabels Identity(std::span<const int> labels, std::uint64_t seed) {
  CorruptedLabels out;
  out.original.assign(labels.begin(), labels.end());
  out.labels_c = out.original;
  out.flipped.assign(labels.size(), false);
  out.seed = seed;
  return out;
}

void Assign(CorruptedLabels& out, std::size_t v, int label) {
  out.labels_c[v] = label;
  out.flipped[v] = label != out.original[v];
}

std::vector<std::size_t> Labelled(std::span<const int> labels,
                                  std::span<const std::size_t> nodes) {
  std::vector<std::size_t> out;
  for (std::size_t v : nodes) {
    if (v >= labels.size()) throw DataError(kModule, "node id out of range");
    if (labels[v] >= 0) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void CheckArgs(int c, double eps) {
  if (c < 2) throw UsageError(kModule, "need at least two classes to flip labels");
  if (!(eps >= 0.0 && eps <= 1.0)) {
    throw UsageError(kModule, "noise rate must lie in [0, 1]");
  }
}

std::size_t FloorCount(double eps, std::size_t n) {
  return static_cast<std::size_t>(std::floor(eps * static_cast<double>(n)));
}

// A uniformly chosen class in [0, c) other than `from`.
int OtherClass(int from, int c, RandomStream& rng) {
  const int draw = static_cast<int>(rng.UniformInt(static_cast<std::uint64_t>(c - 1)));
  return draw >= from ? draw + 1 : draw;
}

}  // namespace

std::size_t CorruptedLabels::NumFlipped() const {
  return static_cast<std::size_t>(std::count(flipped.begin(), flipped.end(), true));
}

const char* NoiseName(NoiseKind kind) {
  return kind == NoiseKind::kSymmetric ? "sym" : "asym";
}

std::vector<std::size_t> SampleSyntheticSet(std::span<const std::size_t> nodes,
                                            double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio <= 1.0)) {
    throw UsageError(kModule, "synthetic sample ratio must lie in (0, 1]");
  }
  if (nodes.empty()) throw DataError(kModule, "no validation nodes to sample");
  RandomStream rng(seed);
  const auto picks =
      SampleWithoutReplacement(nodes.size(), FloorCount(ratio, nodes.size()), rng);
  std::vector<std::size_t> out;
  out.reserve(picks.size());
  for (std::size_t i : picks) out.push_back(nodes[i]);
  std::sort(out.begin(), out.end());
  return out;
}

CorruptedLabels FlipByTransition(std::span<const int> labels,
                                 std::span<const std::size_t> nodes,
                                 const DenseMatrix& conditional,
                                 std::uint64_t seed) {
  const int c = static_cast<int>(conditional.rows());
  if (conditional.cols() != conditional.rows()) {
    throw DataError(kModule, "conditional transition matrix is not square");
  }
  CheckArgs(c, 0.0);
  RandomStream rng(seed);
  CorruptedLabels out = Identity(labels, seed);
  std::vector<double> weights(static_cast<std::size_t>(c));
  for (std::size_t v : Labelled(labels, nodes)) {
    const int j = labels[v];
    if (j >= c) throw DataError(kModule, "label out of range");
    double mass = 0.0;
    for (int i = 0; i < c; ++i) {
      weights[i] = i == j ? 0.0 : conditional(i, j);
      mass += weights[i];
    }
    const int target = mass < kMinOffDiagonalMass
                           ? OtherClass(j, c, rng)
                           : static_cast<int>(SampleDiscrete(weights, rng));
    Assign(out, v, target);
  }
  return out;
}

CorruptedLabels InjectSymmetric(std::span<const int> labels,
                                std::span<const std::size_t> nodes, int c,
                                double eps, std::uint64_t seed) {
  CheckArgs(c, eps);
  RandomStream rng(seed);
  CorruptedLabels out = Identity(labels, seed);
  const auto pool = Labelled(labels, nodes);
  const auto picks = SampleWithoutReplacement(pool.size(), FloorCount(eps, pool.size()), rng);
  for (std::size_t i : picks) {
    const std::size_t v = pool[i];
    Assign(out, v, OtherClass(labels[v], c, rng));
  }
  return out;
}

CorruptedLabels InjectAsymmetric(std::span<const int> labels,
                                 std::span<const std::size_t> nodes, int c,
                                 double eps, std::uint64_t seed) {
  CheckArgs(c, eps);
  RandomStream rng(seed);
  CorruptedLabels out = Identity(labels, seed);
  std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(c));
  for (std::size_t v : Labelled(labels, nodes)) {
    if (labels[v] >= c) throw DataError(kModule, "label out of range");
    by_class[static_cast<std::size_t>(labels[v])].push_back(v);
  }
  for (int i = 0; i < c; ++i) {
    const auto& members = by_class[static_cast<std::size_t>(i)];
    const auto picks =
        SampleWithoutReplacement(members.size(), FloorCount(eps, members.size()), rng);
    for (std::size_t k : picks) Assign(out, members[k], (i + 1) % c);
  }
  return out;
}

CorruptedLabels InjectNoise(NoiseKind kind, std::span<const int> labels,
                            std::span<const std::size_t> nodes, int c,
                            double eps, std::uint64_t seed) {
  return kind == NoiseKind::kSymmetric
             ? InjectSymmetric(labels, nodes, c, eps, seed)
             : InjectAsymmetric(labels, nodes, c, eps, seed);
}

std::string FormatCorruptedLabels(const CorruptedLabels& corrupted) {
  std::string out = "node_id,original,corrupted,flipped\n";
  for (std::size_t v = 0; v < corrupted.original.size(); ++v) {
    out += std::to_string(v) + ',' + std::to_string(corrupted.original[v]) + ',' +
           std::to_string(corrupted.labels_c[v]) + ',' +
           (corrupted.flipped[v] ? '1' : '0') + '\n';
  }
  return out;
}

CorruptedLabels ParseCorruptedLabels(const std::string& text,
                                     const std::string& path) {
  const auto table =
      csv::ReadString(text, path, {"node_id", "original", "corrupted", "flipped"});
  CorruptedLabels out;
  for (const auto& rec : table.records) {
    if (rec.fields.size() != 4) throw ParseError(path, rec.line, "expected 4 fields");
    const auto id = csv::ParseInt(rec.fields[0], path, rec.line);
    if (id != static_cast<std::int64_t>(out.original.size())) {
      throw ParseError(path, rec.line, "node ids must be consecutive from 0");
    }
    const int original = static_cast<int>(csv::ParseInt(rec.fields[1], path, rec.line));
    const int corrupted = static_cast<int>(csv::ParseInt(rec.fields[2], path, rec.line));
    const auto flag = csv::ParseInt(rec.fields[3], path, rec.line);
    if ((flag != 0 && flag != 1) || (flag == 1) != (original != corrupted)) {
      throw ParseError(path, rec.line, "flipped flag inconsistent with labels");
    }
    out.original.push_back(original);
    out.labels_c.push_back(corrupted);
    out.flipped.push_back(flag == 1);
  }
  return out;
}

}  // namespace labelaudit
