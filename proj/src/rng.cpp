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

#include "hamlearn/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hamlearn {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_stream(std::uint64_t root,
                            std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = mix64(root);
  for (std::uint64_t part : path) h = mix64(h ^ mix64(part + 0x2545f4914f6cdd1dULL));
  return h;
}

double RandomSource::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomSource::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

std::uint64_t RandomSource::uniform_int(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_int needs n > 0");
  // Rejection to remove modulo bias.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t draw;
  do {
    draw = next_u64();
  } while (draw >= limit);
  return draw % n;
}

double RandomSource::gaussian() {
  if (have_spare_gaussian_) {
    have_spare_gaussian_ = false;
    return spare_gaussian_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_gaussian_ = radius * std::sin(angle);
  have_spare_gaussian_ = true;
  return radius * std::cos(angle);
}

namespace {

// Correction term in Stirling's series, log(k!) = stirling + tail(k).
double stirling_approx_tail(double k) {
  static const double kTable[] = {
      0.0810614667953272,  0.0413406959554092,  0.0276779256849983,
      0.02079067210376509, 0.0166446911898211,  0.0138761288230707,
      0.0118967099458917,  0.0104112652619720,  0.00925546218271273,
      0.00833056343336287};
  if (k < 10.0) return kTable[static_cast<int>(k)];
  const double kp1sq = (k + 1.0) * (k + 1.0);
  return (1.0 / 12.0 - (1.0 / 360.0 - 1.0 / 1260.0 / kp1sq) / kp1sq) / (k + 1.0);
}

}  // namespace

long long RandomSource::binomial_inversion(long long n, double p) {
  const double q = 1.0 - p;
  const double s = p / q;
  double pmf = std::exp(static_cast<double>(n) * std::log1p(-p));
  double u = uniform();
  long long k = 0;
  while (u > pmf && k < n) {
    u -= pmf;
    pmf *= s * static_cast<double>(n - k) / static_cast<double>(k + 1);
    ++k;
    if (pmf <= 0.0) break;  // numerical tail exhausted
  }
  return k;
}

// Transformed-rejection sampler (Hormann's BTRS) for n * min(p, 1-p) >= 10.
long long RandomSource::binomial_btrs(long long n, double p) {
  const double nd = static_cast<double>(n);
  const double stddev = std::sqrt(nd * p * (1.0 - p));
  const double b = 1.15 + 2.53 * stddev;
  const double a = -0.0873 + 0.0248 * b + 0.01 * p;
  const double c = nd * p + 0.5;
  const double v_r = 0.92 - 4.2 / b;
  const double r = p / (1.0 - p);
  const double alpha = (2.83 + 5.1 / b) * stddev;
  const double m = std::floor((nd + 1.0) * p);
  for (;;) {
    const double u = uniform() - 0.5;
    double v = uniform();
    const double us = 0.5 - std::abs(u);
    const double kd = std::floor((2.0 * a / us + b) * u + c);
    if (us >= 0.07 && v <= v_r) return static_cast<long long>(kd);
    if (kd < 0.0 || kd > nd) continue;
    v = std::log(v * alpha / (a / (us * us) + b));
    const double upper =
        (m + 0.5) * std::log((m + 1.0) / (r * (nd - m + 1.0))) +
        (nd + 1.0) * std::log((nd - m + 1.0) / (nd - kd + 1.0)) +
        (kd + 0.5) * std::log(r * (nd - kd + 1.0) / (kd + 1.0)) +
        stirling_approx_tail(m) + stirling_approx_tail(nd - m) -
        stirling_approx_tail(kd) - stirling_approx_tail(nd - kd);
    if (v <= upper) return static_cast<long long>(kd);
  }
}

long long RandomSource::binomial(long long n, double p) {
  if (n < 0) throw std::invalid_argument("binomial needs n >= 0");
  if (n == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  if (p > 0.5) return n - binomial(n, 1.0 - p);
  if (static_cast<double>(n) * p < 10.0) return binomial_inversion(n, p);
  return binomial_btrs(n, p);
}

std::vector<long long> RandomSource::multinomial(
    long long trials, const std::vector<double>& probs) {
  std::vector<long long> counts(probs.size(), 0);
  double total = 0.0;
  for (double q : probs) {
    if (q < 0.0) throw std::invalid_argument("negative probability");
    total += q;
  }
  if (total <= 0.0) throw std::invalid_argument("probabilities sum to zero");
  long long remaining = trials;
  double mass = total;
  for (std::size_t i = 0; i + 1 < probs.size() && remaining > 0; ++i) {
    if (mass <= 0.0) break;
    const double conditional = std::min(1.0, probs[i] / mass);
    counts[i] = binomial(remaining, conditional);
    remaining -= counts[i];
    mass -= probs[i];
  }
  if (!counts.empty()) counts.back() += remaining;
  return counts;
}

}  // namespace hamlearn
