// Copyright 2026 The hamlearn Authors
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

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace hamlearn {

/** splitmix64 finalizer; the workhorse for stream derivation. */
std::uint64_t mix64(std::uint64_t x);

/**
 * Derives an independent stream seed from a root seed and a label path,
 * e.g. (partition, node, replicate). Equal paths give equal streams.
 */
std::uint64_t derive_stream(std::uint64_t root,
                            std::initializer_list<std::uint64_t> path);

/**
 * Deterministic random source. All distributions are implemented in terms
 * of raw 64-bit draws so results are identical across platforms and
 * standard library implementations.
 */
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : engine_(mix64(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  /** Uniform double in [0, 1). */
  double uniform();

  /** Uniform double in [lo, hi). */
  double uniform(double lo, double hi);

  /** Uniform integer in [0, n). */
  std::uint64_t uniform_int(std::uint64_t n);

  /** Standard normal via Box-Muller. */
  double gaussian();

  /** Exact Binomial(n, p) sample; O(1) for large n via BTRS. */
  long long binomial(long long n, double p);

  /** Multinomial counts for `trials` draws over `probs` (need not sum to 1). */
  std::vector<long long> multinomial(long long trials,
                                     const std::vector<double>& probs);

 private:
  std::mt19937_64 engine_;
  bool have_spare_gaussian_ = false;
  double spare_gaussian_ = 0.0;

  long long binomial_inversion(long long n, double p);
  long long binomial_btrs(long long n, double p);
};

}  // namespace hamlearn
