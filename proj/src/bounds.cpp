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

#include "hamlearn/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "hamlearn/chebyshev.hpp"

namespace hamlearn {

std::string mode_name(Mode mode) {
  switch (mode) {
    case Mode::kGeneralUnitary:
      return "unitary";
    case Mode::kCommutingUnitary:
      return "commuting";
    default:
      return "gibbs";
  }
}

Mode mode_from_name(const std::string& name) {
  if (name == "unitary" || name == "general") return Mode::kGeneralUnitary;
  if (name == "commuting") return Mode::kCommutingUnitary;
  if (name == "gibbs") return Mode::kGibbs;
  throw std::invalid_argument("unknown mode '" + name + "'");
}

Scales Scales::make(Mode mode, double degree, double theta_inf) {
  if (degree < 0.0) throw std::invalid_argument("degree must be nonnegative");
  if (theta_inf <= 0.0) {
    throw std::invalid_argument("|Theta|_inf must be positive");
  }
  Scales s;
  s.mode = mode;
  s.degree = degree;
  s.theta_inf = theta_inf;
  switch (mode) {
    case Mode::kGeneralUnitary:
      s.gamma = 2.0 * degree * theta_inf;
      break;
    case Mode::kCommutingUnitary:
      s.gamma = 2.0 * (degree + 1.0) * theta_inf;
      break;
    case Mode::kGibbs: {
      const double spread = std::max(degree * degree - 1.0, 1.0);
      s.gamma = 2.0 * std::exp(2.0) * spread * theta_inf;
      break;
    }
  }
  if (s.gamma <= 0.0) {
    throw std::invalid_argument(
        "degenerate scales: gamma = 0 (isolated-term Hamiltonian)");
  }
  s.tau = 1.0 / s.gamma;
  return s;
}

double log_commutator_norm_bound(int order, const Scales& scales) {
  if (order < 0) throw std::invalid_argument("order must be nonnegative");
  const double m = static_cast<double>(order);
  switch (scales.mode) {
    case Mode::kGeneralUnitary:
      return m * std::log(2.0 * scales.degree * scales.theta_inf) +
             std::lgamma(m + 2.0);
    case Mode::kCommutingUnitary:
      return m * std::log(2.0 * (scales.degree + 1.0) * scales.theta_inf);
    default: {
      const double spread = std::max(scales.degree * scales.degree - 1.0, 1.0);
      return m * std::log(scales.theta_inf) + std::lgamma(m + 2.0) +
             (m + 1.0) * std::log(2.0 * std::exp(2.0) * spread);
    }
  }
}

double commutator_norm_bound(int order, const Scales& scales) {
  const double logv = log_commutator_norm_bound(order, scales);
  if (logv > std::log(std::numeric_limits<double>::max())) {
    return std::numeric_limits<double>::infinity();
  }
  return std::exp(logv);
}

double count_bound(int size, int children_per_node) {
  if (size < 1 || children_per_node < 1) {
    throw std::invalid_argument("need size >= 1 and d >= 1");
  }
  double product = 1.0;
  for (int k = 1; k < size; ++k) {
    product *= static_cast<double>(k) * (children_per_node - 1) + 1.0;
  }
  return product;
}

double relaxed_count_bound(int size, int children_per_node) {
  if (size < 1 || children_per_node < 1) {
    throw std::invalid_argument("need size >= 1 and d >= 1");
  }
  return std::pow(static_cast<double>(children_per_node - 1), size - 1) *
         std::tgamma(static_cast<double>(size) + 1.0);
}

namespace {

void extend_tuples(const std::vector<std::vector<int>>& children, int remaining,
                   std::vector<int>& partial, std::set<int>& frontier,
                   std::vector<std::vector<int>>& out, std::size_t cap) {
  if (remaining == 0) {
    // partial was filled from the innermost slot; reverse into (s_1..s_m).
    out.emplace_back(partial.rbegin(), partial.rend());
    if (out.size() > cap) {
      throw std::runtime_error("tuple enumeration exceeded cap");
    }
    return;
  }
  const std::vector<int> frontier_now(frontier.begin(), frontier.end());
  for (int v : frontier_now) {
    partial.push_back(v);
    std::set<int> next = frontier;
    next.erase(v);
    for (int child : children[v]) next.insert(child);
    extend_tuples(children, remaining - 1, partial, next, out, cap);
    partial.pop_back();
  }
}

}  // namespace

std::vector<std::vector<int>> enumerate_nonvanishing_tuples(
    const Hamiltonian& h, const PauliString& probe, int size, std::size_t cap) {
  if (size < 0) throw std::invalid_argument("tuple size must be nonnegative");
  const int r = h.term_count();
  std::vector<std::vector<int>> supports(r);
  for (int i = 0; i < r; ++i) supports[i] = h.term(i).word.support();

  auto overlaps = [](const std::vector<int>& a, const std::vector<int>& b) {
    return std::find_first_of(a.begin(), a.end(), b.begin(), b.end()) != a.end();
  };

  // Support-tree children: every term overlapping a node, the node itself
  // included.
  std::vector<std::vector<int>> children(r);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      if (overlaps(supports[i], supports[j])) children[i].push_back(j);
    }
  }

  std::set<int> frontier;
  const std::vector<int> probe_support = probe.support();
  for (int j = 0; j < r; ++j) {
    if (overlaps(probe_support, supports[j])) frontier.insert(j);
  }

  std::vector<std::vector<int>> out;
  std::vector<int> partial;
  extend_tuples(children, size, partial, frontier, out, cap);
  return out;
}

double bias_bound_rel(double window, int node_count, const Scales& scales) {
  if (window <= 0.0) throw std::invalid_argument("window must be positive");
  if (node_count < 2) throw std::invalid_argument("need L >= 2");
  const double L = static_cast<double>(node_count);
  const double x = window * scales.gamma;  // A / tau
  double logv = std::log(4.0) + 2.0 * std::log(L) + L * std::log(x / 4.0) -
                std::log(x);
  if (scales.mode == Mode::kCommutingUnitary) {
    logv -= std::lgamma(L + 1.0);
  } else {
    logv += std::log(L + 1.0);
  }
  if (logv > std::log(std::numeric_limits<double>::max())) {
    return std::numeric_limits<double>::infinity();
  }
  return std::exp(logv);
}

ErrorBound error_bound(double window, int node_count, double sigma2,
                       const Scales& scales) {
  if (sigma2 < 0.0) throw std::invalid_argument("sigma2 must be nonnegative");
  const double L = static_cast<double>(node_count);
  const double x = window * scales.gamma;
  ErrorBound bound;
  bound.noise_term = 8.0 / (x * x) * std::pow(L - 0.5, 4.0) / 5.0 * sigma2;
  const double bias = bias_bound_rel(window, node_count, scales);
  bound.bias_sq_term = 2.0 * bias * bias;
  return bound;
}

long long LearnPlan::shots_per_replicate() const {
  if (!allocation.empty()) {
    return std::accumulate(allocation.begin(), allocation.end(), 0LL);
  }
  return shots_per_node * node_count;
}

LearnPlan plan(double epsilon_rel, double delta, const Scales& scales,
               const PlanOptions& options) {
  if (epsilon_rel <= 0.0) throw std::invalid_argument("epsilon must be positive");
  if (delta <= 0.0 || delta >= 1.0) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }

  const double window_cap =
      (scales.mode == Mode::kCommutingUnitary ? 40.0 : 4.0) * scales.tau;
  const double window_min = 1e-3 * scales.tau;
  const double ratio = std::log(window_cap / window_min);

  bool found = false;
  double best_cost = std::numeric_limits<double>::infinity();
  int best_L = 0;
  double best_A = 0.0;
  long long best_N = 0;
  double best_bias = 0.0;

  for (int L = 2; L <= options.node_cap; ++L) {
    for (int i = 0; i < options.grid_points; ++i) {
      const double A =
          window_min * std::exp(ratio * static_cast<double>(i) /
                                static_cast<double>(options.grid_points));
      const double bias = bias_bound_rel(A, L, scales);
      if (!(bias < epsilon_rel)) continue;
      const double x = A * scales.gamma;
      const double Ld = static_cast<double>(L);
      const double single_shot_var =
          8.0 * std::pow(Ld, 4.0) / (5.0 * x * x) * options.sigma2_max;
      const double margin = epsilon_rel - bias;
      const double n_real = 34.0 * single_shot_var / (margin * margin);
      if (!std::isfinite(n_real) || n_real > 9.0e18) continue;
      const long long N = static_cast<long long>(std::ceil(n_real));
      const double cost = static_cast<double>(N) * Ld;
      const bool better =
          cost < best_cost ||
          (cost == best_cost && (L < best_L || (L == best_L && A < best_A)));
      if (better) {
        found = true;
        best_cost = cost;
        best_L = L;
        best_A = A;
        best_N = std::max(1LL, N);
        best_bias = bias;
      }
    }
  }
  if (!found) {
    throw InfeasiblePlanError(
        "no (A, L) with modeling-error bound below epsilon = " +
        std::to_string(epsilon_rel) + " (L <= " +
        std::to_string(options.node_cap) + ", A < " +
        std::to_string(window_cap) + "); the bias constraint binds");
  }

  LearnPlan result;
  result.mode = scales.mode;
  result.window = best_A;
  result.node_count = best_L;
  result.shots_per_node = best_N;
  result.group_count =
      static_cast<int>(std::ceil(2.0 * std::log(2.0 / delta)));
  result.gamma = scales.gamma;
  result.tau = scales.tau;
  result.degree_used = scales.degree;
  result.theta_inf = scales.theta_inf;
  result.epsilon_rel = epsilon_rel;
  result.delta = delta;
  result.predicted_bias_rel = best_bias;
  const double x = best_A * scales.gamma;
  result.predicted_noise_rel =
      std::sqrt(8.0 * std::pow(static_cast<double>(best_L), 4.0) /
                (5.0 * x * x) * options.sigma2_max /
                static_cast<double>(best_N));
  if (options.shot_allocation) {
    result.allocation =
        allocate_shots(best_L, best_N * static_cast<long long>(best_L));
  } else {
    result.allocation.assign(best_L, best_N);
  }
  return result;
}

LearnPlan plan_for_coefficient_error(double epsilon, double delta,
                                     const Scales& scales,
                                     const PlanOptions& options) {
  const double epsilon_rel = epsilon * scales.theta_inf / scales.gamma;
  return plan(epsilon_rel, delta, scales, options);
}

std::vector<long long> allocate_shots(int node_count, long long n_max) {
  if (node_count < 1) throw std::invalid_argument("need at least one node");
  if (n_max < node_count) {
    throw std::invalid_argument("n_max must be at least the node count");
  }
  const std::vector<double> weights = derivative_node_weights(node_count);
  double total = 0.0;
  for (double c : weights) total += std::sqrt(c);

  std::vector<long long> counts(node_count, 1);
  if (total > 0.0) {
    std::vector<double> raw(node_count);
    long long assigned = 0;
    for (int i = 0; i < node_count; ++i) {
      raw[i] = std::sqrt(weights[i]) / total * static_cast<double>(n_max);
      counts[i] = std::max<long long>(1, static_cast<long long>(raw[i]));
      assigned += counts[i];
    }
    // Largest-remainder correction toward an exact total.
    std::vector<int> order(node_count);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      const double ra = raw[a] - std::floor(raw[a]);
      const double rb = raw[b] - std::floor(raw[b]);
      return ra > rb;
    });
    std::size_t cursor = 0;
    while (assigned < n_max) {
      ++counts[order[cursor % order.size()]];
      ++assigned;
      ++cursor;
    }
    cursor = 0;
    while (assigned > n_max) {
      long long& c = counts[order[order.size() - 1 - (cursor % order.size())]];
      if (c > 1) {
        --c;
        --assigned;
      }
      ++cursor;
    }
  } else {
    counts.assign(node_count, n_max / node_count);
    for (long long i = 0; i < n_max % node_count; ++i) ++counts[i];
  }

  // Uniform fallback when rounding does not actually help.
  std::vector<long long> uniform(node_count, n_max / node_count);
  for (long long i = 0; i < n_max % node_count; ++i) ++uniform[i];
  const double window = 1.0;  // the comparison is window independent
  if (allocation_variance_bound(node_count, window, counts) >
      allocation_variance_bound(node_count, window, uniform)) {
    return uniform;
  }
  return counts;
}

double allocation_variance_bound(int node_count, double window,
                                 const std::vector<long long>& allocation) {
  if (static_cast<int>(allocation.size()) != node_count) {
    throw std::invalid_argument("allocation length mismatch");
  }
  const std::vector<double> weights = derivative_node_weights(node_count);
  double acc = 0.0;
  for (int i = 0; i < node_count; ++i) {
    if (allocation[i] < 1) throw std::invalid_argument("allocation entry < 1");
    acc += weights[i] / static_cast<double>(allocation[i]);
  }
  const double L = static_cast<double>(node_count);
  return 16.0 * acc / (L * L * window * window);
}

}  // namespace hamlearn
