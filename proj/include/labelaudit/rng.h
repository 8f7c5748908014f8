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

// Counter-based random streams (Philox4x32-10).
//
// Every draw is a pure function of (seed, stream id, counter), so results
// do not depend on the standard library's distribution implementations and
// are identical across platforms. Independent sub-streams are obtained with
// Split(); they share the key and occupy disjoint counter ranges.

#ifndef LABELAUDIT_RNG_H_
#define LABELAUDIT_RNG_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace labelaudit {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

// The raw Philox4x32 bijection with 10 rounds.
PhiloxCounter Philox4x32(PhiloxCounter counter, PhiloxKey key);

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint32_t NextU32();
  std::uint64_t NextU64();

  // Uniform on [0, 1) with 53 random bits.
  double Uniform();
  // Uniform on [0, bound); bound must be positive. Unbiased (Lemire).
  std::uint64_t UniformInt(std::uint64_t bound);
  // Standard normal via Box-Muller; the second variate is cached.
  double Normal();
  bool Bernoulli(double p) { return Uniform() < p; }

  // Child stream with an independent counter range. Deterministic in
  // (this stream's seed and id, child).
  RandomStream Split(std::uint64_t child) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  void Refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  PhiloxCounter buffer_{};
  int used_ = 4;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

// Fisher-Yates shuffle driven by the stream.
template <typename T>
void Shuffle(std::span<T> items, RandomStream& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.UniformInt(i));
    std::swap(items[i - 1], items[j]);
  }
}

// k distinct indices from [0, n), in the order drawn.
std::vector<std::size_t> SampleWithoutReplacement(std::size_t n,
                                                  std::size_t k,
                                                  RandomStream& rng);

// Index drawn with probability proportional to weights[i]. Weights must be
// non-negative with a positive sum.
std::size_t SampleDiscrete(std::span<const double> weights, RandomStream& rng);

}  // namespace labelaudit

#endif  // LABELAUDIT_RNG_H_
