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
#include <iosfwd>
#include <string>
#include <vector>

namespace hamlearn {

/**
 * Roots of T_L, ascending: z_m = -cos((2m-1) pi / (2L)), m = 1..L.
 */
std::vector<double> cheb_roots(int node_count);

/** T_m(z) by the three-term recurrence. */
double cheb_eval(int degree, double z);

/**
 * A degree L-1 polynomial in the Chebyshev basis, defined on the window
 * [0, A] via z = 2t/A - 1.
 */
struct ChebFit {
  double window = 0.0;               // A
  std::vector<double> coeffs;        // b_0 .. b_{L-1}

  int node_count() const { return static_cast<int>(coeffs.size()); }
  double eval_z(double z) const;
  double eval_abscissa(double t) const;
};

/**
 * Interpolation coefficients from samples at cheb_roots(L):
 * b_0 = (1/L) sum_i y_i, b_m = (2/L) sum_i y_i T_m(z_i).
 */
ChebFit interp_coeffs(const std::vector<double>& ys, double window);

/**
 * f'(0) in the original variable, using T_m'(-1) = (-1)^{m+1} m^2:
 * c_1 = -(2/A) sum_{m>=1} (-1)^m b_m m^2.
 */
double derivative_at_zero(const ChebFit& fit);

/** One measured node of a derivative-estimation dataset. */
struct DatasetEntry {
  int index = 0;          // ell, 1-based
  double z = 0.0;         // Chebyshev node
  double abscissa = 0.0;  // t (or beta) in [0, A]
  double mean = 0.0;      // y_ell
  long long shots = 1;    // N_ell
  double variance = 0.0;  // sigma_ell^2 estimate of the mean
};

/**
 * Expectation estimates at the Chebyshev nodes of a window [0, A], plus
 * per-node shot counts and variance estimates.
 */
struct DerivativeDataset {
  double window = 0.0;
  std::vector<DatasetEntry> entries;

  int node_count() const { return static_cast<int>(entries.size()); }
  std::vector<double> means() const;

  /** CSV with columns ell,z,t,y,N,sigma2. */
  void write_csv(std::ostream& out) const;
  std::string to_csv() const;
};

/**
 * Weighted least-squares fit over T_0..T_{L-1} subject to f(t=0) = 0,
 * i.e. sum_m (-1)^m b_m = 0. Weights are 1/sigma_ell^2, or uniform when
 * all variances coincide (including the noiseless all-zero case). The
 * constraint is used to eliminate b_0 so an ordinary solve remains.
 */
ChebFit constrained_fit(const DerivativeDataset& dataset);

/**
 * Variance of the derivative estimator under independent node noise:
 * (16 / L^2 A^2) sum_ell sigma_ell^2 (sum_{m=1}^{L-1} (-1)^m m^2 T_m(z_ell))^2.
 */
double derivative_variance(int node_count, double window,
                           const std::vector<double>& node_variances);

/** Equal-noise closed form 4(L-1)(2L-1)(3L^2-3L-1) sigma^2 / (15 A^2). */
double derivative_variance_closed_form(int node_count, double window,
                                       double sigma2);

/** Node weights (sum_{m=1}^{L-1} (-1)^m m^2 T_m(z_ell))^2 used above. */
std::vector<double> derivative_node_weights(int node_count);

}  // namespace hamlearn
