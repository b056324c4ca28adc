// Copyright 2026 The DRGL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DRGL_RANDOM_H_
#define DRGL_RANDOM_H_

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace drgl {

// Portable seeded generator.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. The distributions on top of it are implemented here rather than
// taken from <random>, because the standard library distributions are
// implementation-defined and would make corruptions differ between
// toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform();

  // Standard normal deviate (Box-Muller, pairs cached).
  double normal();

  // Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  bool bernoulli(double p) { return uniform() < p; }

  // Fisher-Yates shuffle driven by below().
  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

// SplitMix64 finalizer over (base, stream); used to derive independent
// sub-seeds, e.g. one per repetition and per pipeline stage.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace drgl

#endif  // DRGL_RANDOM_H_
