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

#include "doctest.h"
#include "json.hpp"
#include "labelaudit/error.h"
#include "labelaudit/rng.h"

namespace labelaudit {
namespace {

double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::vector<double> TenScores() {
  return {0.95, 0.05, 0.3, 0.8, 0.1, 0.6, 0.2, 0.4, 0.55, 0.7};
}

TEST_CASE("index fixtures") {
  CHECK(ConformalIndex(ConformalMode::kFalsePositive, 10, 0.2, 0.5) == 7);
  CHECK(ConformalIndex(ConformalMode::kFalseNegative, 10, 0.2, 0.5) == 10);

  const auto scores = TenScores();
  auto sorted = scores;
  std::sort(sorted.begin(), sorted.end());
  const auto fp = FpThreshold(scores, 0.2, 0.5);
  CHECK(fp.b_index == 7);
  CHECK(fp.lambda == sorted[6]);

  const auto fn = FnThreshold(scores, 0.2, 0.5);
  CHECK(fn.b_index == 10);
  const auto mod = ModifiedScores(scores);
  CHECK(fn.lambda == *std::max_element(mod.begin(), mod.end()));
}

TEST_CASE("modified scores") {
  const std::vector<double> s = {0.9, 0.5, 0.2};
  const auto m = ModifiedScores(s);
  CHECK(m[0] == doctest::Approx(0.1));
  CHECK(m[1] == 0.0);
  CHECK(m[2] == 0.0);
  const std::vector<double> low = {0.1, 0.5, 0.3, 0.45, 0.0};
  CHECK(FnThreshold(low, 0.2, 0.5).lambda == 0.0);
}

TEST_CASE("p = 0 reduces to the split-conformal quantile") {
  for (std::size_t n = 1; n <= 60; ++n) {
    for (int k = 1; k < 100; ++k) {
      const double alpha = k / 100.0;
      if (!(alpha > 1.0 / static_cast<double>(n + 1))) continue;
      // ceil((n+1)(100-k)/100) in integers.
      const std::size_t want = ((n + 1) * static_cast<std::size_t>(100 - k) + 99) / 100;
      if (want > n) {
        CHECK_THROWS_AS(ConformalIndex(ConformalMode::kFalsePositive, n, 0.0, alpha), Error);
      } else {
        CHECK(ConformalIndex(ConformalMode::kFalsePositive, n, 0.0, alpha) == want);
      }
    }
  }
}

TEST_CASE("errors") {
  const auto s = TenScores();
  CHECK_THROWS_AS(FpThreshold(s, 0.2, 1.0), Error);
  CHECK_THROWS_AS(FpThreshold(s, 0.2, 1.0 / 11), Error);
  CHECK_THROWS_AS(FpThreshold(s, 1.0, 0.5), Error);
  CHECK_THROWS_AS(FpThreshold(std::vector<double>{}, 0.2, 0.5), Error);
  // alpha = 0.1 at N = 10: p = 0 gives B = ceil(9.9) = 10, but p = 0.2
  // gives ceil(9 * 0.9 + 2) = 11 > N.
  CHECK(ConformalIndex(ConformalMode::kFalsePositive, 10, 0.0, 0.1) == 10);
  try {
    ConformalIndex(ConformalMode::kFalsePositive, 10, 0.2, 0.1);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kData);
    CHECK(std::string(e.what()).find("unattainable") != std::string::npos);
  }
}

TEST_CASE("B and lambda are non-increasing in alpha") {
  RandomStream rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 20 + rng.UniformInt(80);
    std::vector<double> s(n);
    for (double& x : s) x = rng.Uniform();
    const double p = 0.3 * rng.Uniform();
    for (auto mode : {ConformalMode::kFalsePositive, ConformalMode::kFalseNegative}) {
      std::size_t prev_b = n + 1;
      double prev_lambda = 2.0;
      for (int k = 1; k < 100; ++k) {
        const double alpha = k / 100.0;
        std::size_t b;
        try {
          b = ConformalIndex(mode, n, p, alpha);
        } catch (const Error&) {
          continue;
        }
        const auto t = mode == ConformalMode::kFalsePositive ? FpThreshold(s, p, alpha)
                                                             : FnThreshold(s, p, alpha);
        CHECK(b <= prev_b);
        CHECK(t.lambda <= prev_lambda);
        prev_b = b;
        prev_lambda = t.lambda;
      }
    }
  }
}

TEST_CASE("flag rules") {
  ConformalThreshold fp;
  fp.lambda = 0.8;
  CHECK(ConformalFlag(fp, 0.81));
  CHECK_FALSE(ConformalFlag(fp, 0.8));
  ConformalThreshold fn;
  fn.mode = ConformalMode::kFalseNegative;
  fn.lambda = 0.2;
  CHECK(ConformalFlag(fn, 0.8));
  CHECK(ConformalFlag(fn, 0.95));
  CHECK_FALSE(ConformalFlag(fn, 0.7));
  fn.lambda = 0.0;
  CHECK_FALSE(ConformalFlag(fn, 0.3));
  CHECK(ConformalFlag(fn, 1.0));
}

TEST_CASE("threshold report JSON") {
  const auto j = nlohmann::json::parse(ConformalToJson(FpThreshold(TenScores(), 0.2, 0.5)));
  CHECK(j.at("mode") == "false_positive");
  CHECK(j.at("N") == 10);
  CHECK(j.at("B") == 7);
  CHECK(j.at("alpha") == 0.5);
}

// Two exchangeable but dependent score models: a latent shift shared by the
// whole draw, and an AR(1) chain whose indices are then permuted.
enum class Dependence { kSharedShift, kPermutedChain };

struct Draw {
  std::vector<double> calibration;
  double fresh_clean;
  double fresh_mislabelled;
};

std::vector<double> GroupScores(std::size_t m, double center, Dependence dep,
                                double shift, RandomStream& rng) {
  std::vector<double> out(m);
  double state = rng.Normal();
  for (std::size_t i = 0; i < m; ++i) {
    double noise;
    if (dep == Dependence::kSharedShift) {
      noise = shift + rng.Normal();
    } else {
      state = 0.8 * state + 0.6 * rng.Normal();
      noise = state;
    }
    out[i] = Sigmoid(center + noise);
  }
  if (dep == Dependence::kPermutedChain) Shuffle(std::span<double>(out), rng);
  return out;
}

Draw MakeDraw(std::size_t n_u, std::size_t n_v, Dependence dep, RandomStream& rng) {
  const double shift = 0.5 * rng.Normal();
  auto clean = GroupScores(n_u + 1, -1.5, dep, shift, rng);
  auto bad = GroupScores(n_v + 1, 1.5, dep, shift, rng);
  Draw d;
  d.fresh_clean = clean.back();
  d.fresh_mislabelled = bad.back();
  clean.pop_back();
  bad.pop_back();
  d.calibration = clean;
  d.calibration.insert(d.calibration.end(), bad.begin(), bad.end());
  return d;
}

TEST_CASE("Monte-Carlo coverage under exchangeable scores") {
  const std::size_t n = 200, n_v = 20, n_u = n - n_v;
  const double p = static_cast<double>(n_v) / n;
  const int resamples = 10000;
  for (auto dep : {Dependence::kSharedShift, Dependence::kPermutedChain}) {
    for (double alpha : {0.05, 0.1, 0.2}) {
      RandomStream rng(static_cast<std::uint64_t>(alpha * 1000) + 31 * static_cast<int>(dep));
      int fp = 0, fn = 0;
      for (int r = 0; r < resamples; ++r) {
        const Draw d = MakeDraw(n_u, n_v, dep, rng);
        const auto tp = FpThreshold(d.calibration, p, alpha);
        const auto tn = FnThreshold(d.calibration, p, alpha);
        fp += d.fresh_clean > tp.lambda;
        const std::vector<double> fresh = {d.fresh_mislabelled};
        fn += ModifiedScores(fresh)[0] > tn.lambda;
      }
      const double fp_rate = static_cast<double>(fp) / resamples;
      const double fn_rate = static_cast<double>(fn) / resamples;
      CAPTURE(alpha);
      CHECK(fp_rate <= alpha + 2 * std::sqrt(alpha * (1 - alpha) / n_u));
      CHECK(fn_rate <= alpha + 2 * std::sqrt(alpha * (1 - alpha) / n_v));
    }
  }
}

}  // namespace
}  // namespace labelaudit
