// Copyright 2026 The Leanbridge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LEANBRIDGE_COMMON_RANDOM_H_
#define LEANBRIDGE_COMMON_RANDOM_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>

namespace leanbridge {

// 64-bit FNV-1a. Used for prompt keys, checksums and seed forking, so the
// value must never change between releases.
std::uint64_t Fnv1a64(std::string_view bytes,
                      std::uint64_t basis = 0xcbf29ce484222325ULL);

std::uint64_t SplitMix64(std::uint64_t x);

// Derives an independent stream seed from the root seed and a stable label
// ("train-retriever", "sample", ...).
std::uint64_t ForkSeed(std::uint64_t root, std::string_view label);

// Platform-stable generator. std::uniform_*_distribution is implementation
// defined, so all randomness that reaches an output file goes through here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t Next();
  // Uniform in [0, 1) with 53 bits of mantissa.
  double UniformDouble();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * UniformDouble(); }
  // Uniform in [0, bound); bound > 0.
  std::uint64_t UniformIndex(std::uint64_t bound);
  // Standard normal via Box-Muller.
  double Normal();

  template <typename T>
  void Shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = UniformIndex(i);
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace leanbridge

#endif  // LEANBRIDGE_COMMON_RANDOM_H_
