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
#include <stdexcept>
#include <string>
#include <vector>

#include "hamlearn/pauli.hpp"

namespace hamlearn {

/** Which derivative-growth regime the bounds assume. */
enum class Mode { kGeneralUnitary, kCommutingUnitary, kGibbs };

std::string mode_name(Mode mode);
Mode mode_from_name(const std::string& name);

/**
 * Typical coefficient scale gamma and time scale tau = 1/gamma.
 *
 * gamma is mode dependent: 2 D |Theta|_inf for general unitary dynamics,
 * 2 (D+1) |Theta|_inf for commuting Hamiltonians, and
 * 2 e^2 (D^2 - 1) |Theta|_inf for Gibbs states (with D^2 - 1 floored at 1
 * so degenerate single-neighbor structures keep a positive scale).
 */
struct Scales {
  Mode mode = Mode::kGeneralUnitary;
  double degree = 0.0;     // D, or the average degree when heuristics are on
  double theta_inf = 0.0;  // |Theta|_inf
  double gamma = 0.0;
  double tau = 0.0;

  static Scales make(Mode mode, double degree, double theta_inf);
};

/**
 * log of the iterated-commutator/derivative norm bound for order m:
 *   general:   (2 D T)^m (m+1)!
 *   commuting: (2 (D+1) T)^m
 *   gibbs:     T^m (m+1)! (2 e^2 (D^2-1))^{m+1}
 */
double log_commutator_norm_bound(int order, const Scales& scales);

/** Linear-scale version; +inf when the bound overflows a double. */
double commutator_norm_bound(int order, const Scales& scales);

/**
 * Number of labeled rooted subtrees of size m in an infinite d-regular
 * tree with ancestor-increasing labels: prod_{k=1}^{m-1} (k(d-1)+1).
 */
double count_bound(int size, int children_per_node);

/** The relaxed form (d-1)^{m-1} m!. */
double relaxed_count_bound(int size, int children_per_node);

/**
 * All candidate non-vanishing term tuples (s_1, ..., s_m) built from the
 * support tree of `probe`: a superset of the tuples whose nested commutator
 * with the probe is nonzero. Intended as a test oracle for small m.
 */
std::vector<std::vector<int>> enumerate_nonvanishing_tuples(
    const Hamiltonian& h, const PauliString& probe, int size,
    std::size_t cap = 1000000);

/**
 * The two bracketed error contributions, each scaled by 8/(A gamma)^2:
 * noise = 8 (L-1/2)^4 sigma^2 / (5 (A gamma)^2) and the squared modeling
 * error 2 (bias_rel)^2 with the mode-specific bias below.
 */
struct ErrorBound {
  double noise_term = 0.0;
  double bias_sq_term = 0.0;
};

/**
 * Relative modeling-error bound for the derivative at zero:
 *   general/gibbs: 4 L^2 (L+1) (A gamma / 4)^L / (A gamma)
 *   commuting:     4 L^2 (A gamma / 4)^L / ((A gamma) L!)
 */
double bias_bound_rel(double window, int node_count, const Scales& scales);

ErrorBound error_bound(double window, int node_count, double sigma2,
                       const Scales& scales);

struct InfeasiblePlanError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/** Planner output: hyperparameters plus the per-node shot allocation. */
struct LearnPlan {
  Mode mode = Mode::kGeneralUnitary;
  double window = 0.0;          // A (time or beta)
  int node_count = 0;           // L
  long long shots_per_node = 0; // N
  int group_count = 0;          // K (median of means)
  std::vector<long long> allocation;  // N_ell, sums to N * L
  double gamma = 0.0;
  double tau = 0.0;
  double degree_used = 0.0;
  double theta_inf = 0.0;
  double epsilon_rel = 0.0;     // target for |c1 - c1_hat| / gamma
  double delta = 0.0;
  double predicted_bias_rel = 0.0;
  double predicted_noise_rel = 0.0;  // sqrt of the per-group noise variance
  bool used_average_degree = false;

  long long shots_per_replicate() const;
};

struct PlanOptions {
  double sigma2_max = 1.0;
  int node_cap = 40;        // L_cap
  int grid_points = 200;    // log-spaced A grid
  bool shot_allocation = true;
};

/**
 * Scans L in [2, L_cap] and a log-spaced A grid ([1e-3 tau, 4 tau) in
 * general/Gibbs mode, [1e-3 tau, 40 tau) when commuting), keeps pairs with
 * bias_bound_rel < epsilon_rel, sets
 * N = ceil(34 sigma^2 (8 L^4 / 5 (A gamma)^2) / (epsilon_rel - bias)^2),
 * and returns the feasible triple minimizing N*L (ties: smaller L, then
 * smaller A). K = ceil(2 ln(2/delta)).
 */
LearnPlan plan(double epsilon_rel, double delta, const Scales& scales,
               const PlanOptions& options = {});

/**
 * Same planner, but the target is a coefficient error epsilon * |Theta|_inf
 * (so epsilon_rel = epsilon * theta_inf / gamma).
 */
LearnPlan plan_for_coefficient_error(double epsilon, double delta,
                                     const Scales& scales,
                                     const PlanOptions& options = {});

/**
 * Shot allocation over the L nodes proportional to sqrt(c_ell) with
 * c_ell = (sum_{m=1}^{L-1} (-1)^m m^2 T_m(z_ell))^2, floored at one shot
 * and corrected to sum to n_max exactly. Falls back to the uniform split
 * whenever integer rounding would not improve on it.
 */
std::vector<long long> allocate_shots(int node_count, long long n_max);

/** Eq. noise bound (16/L^2 A^2) sum_ell c_ell / N_ell for an allocation. */
double allocation_variance_bound(int node_count, double window,
                                 const std::vector<long long>& allocation);

}  // namespace hamlearn
