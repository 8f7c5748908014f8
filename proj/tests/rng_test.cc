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

#include "labelaudit/rng.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"

namespace labelaudit {
namespace {

// Known-answer vectors published with the Random123 reference code.
TEST_CASE("Philox4x32-10 known answers") {
  CHECK(Philox4x32({0, 0, 0, 0}, {0, 0}) ==
        PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                   {0xffffffff, 0xffffffff}) ==
        PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                   {0xa4093822, 0x299f31d0}) ==
        PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and split streams differ") {
  RandomStream a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.NextU64() == b.NextU64());

  RandomStream base(7);
  RandomStream c1 = base.Split(1), c1_again = base.Split(1), c2 = base.Split(2);
  int same = 0;
  for (int i = 0; i < 64; ++i) {
    const auto x = c1.NextU32();
    CHECK(x == c1_again.NextU32());
    same += x == c2.NextU32();
  }
  CHECK(same < 2);
}

TEST_CASE("uniform draws stay in range with plausible moments") {
  RandomStream rng(3);
  const int n = 200000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.Uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / n - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));

  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) ++counts[rng.UniformInt(7)];
  for (int c : counts) CHECK(std::abs(c - 10000) < 4 * 100);  // sd ~ 93
}

TEST_CASE("normal draws have unit variance") {
  RandomStream rng(11);
  const int n = 100000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.Normal();
    sum += z;
    sq += z * z;
  }
  CHECK(std::abs(sum / n) < 0.02);
  CHECK(std::abs(sq / n - 1.0) < 0.02);
}

TEST_CASE("sampling without replacement yields distinct indices") {
  RandomStream rng(5);
  const auto sample = SampleWithoutReplacement(50, 20, rng);
  REQUIRE(sample.size() == 20);
  std::set<std::size_t> unique(sample.begin(), sample.end());
  CHECK(unique.size() == 20);
  CHECK(*unique.rbegin() < 50);
  CHECK_THROWS(SampleWithoutReplacement(3, 4, rng));
}

TEST_CASE("discrete sampling skips zero weights") {
  RandomStream rng(9);
  const std::vector<double> w = {0.0, 2.0, 0.0, 1.0};
  std::vector<int> counts(4, 0);
  for (int i = 0; i < 30000; ++i) ++counts[SampleDiscrete(w, rng)];
  CHECK(counts[0] == 0);
  CHECK(counts[2] == 0);
  CHECK(std::abs(counts[1] - 20000) < 4 * 82);
}

}  // namespace
}  // namespace labelaudit
