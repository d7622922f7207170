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

#include "hamlearn/chebyshev.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

namespace hamlearn {

std::vector<double> cheb_roots(int node_count) {
  if (node_count < 1) throw std::invalid_argument("node count must be positive");
  std::vector<double> roots(node_count);
  for (int m = 1; m <= node_count; ++m) {
    roots[m - 1] =
        -std::cos((2.0 * m - 1.0) * std::numbers::pi / (2.0 * node_count));
  }
  return roots;
}

double cheb_eval(int degree, double z) {
  if (degree < 0) throw std::invalid_argument("degree must be nonnegative");
  if (degree == 0) return 1.0;
  double prev = 1.0;
  double curr = z;
  for (int k = 2; k <= degree; ++k) {
    const double next = 2.0 * z * curr - prev;
    prev = curr;
    curr = next;
  }
  return curr;
}

double ChebFit::eval_z(double z) const {
  double value = 0.0;
  for (int m = 0; m < node_count(); ++m) value += coeffs[m] * cheb_eval(m, z);
  return value;
}

double ChebFit::eval_abscissa(double t) const {
  if (window <= 0.0) throw std::invalid_argument("window must be positive");
  return eval_z(2.0 * t / window - 1.0);
}

ChebFit interp_coeffs(const std::vector<double>& ys, double window) {
  const int L = static_cast<int>(ys.size());
  if (L < 1) throw std::invalid_argument("need at least one sample");
  const std::vector<double> roots = cheb_roots(L);
  ChebFit fit;
  fit.window = window;
  fit.coeffs.assign(L, 0.0);
  for (int i = 0; i < L; ++i) fit.coeffs[0] += ys[i];
  fit.coeffs[0] /= L;
  for (int m = 1; m < L; ++m) {
    double acc = 0.0;
    for (int i = 0; i < L; ++i) acc += ys[i] * cheb_eval(m, roots[i]);
    fit.coeffs[m] = 2.0 * acc / L;
  }
  return fit;
}

double derivative_at_zero(const ChebFit& fit) {
  if (fit.window <= 0.0) throw std::invalid_argument("window must be positive");
  double acc = 0.0;
  double sign = -1.0;
  for (int m = 1; m < fit.node_count(); ++m) {
    acc += sign * fit.coeffs[m] * static_cast<double>(m) * m;
    sign = -sign;
  }
  return -2.0 * acc / fit.window;
}

std::vector<double> DerivativeDataset::means() const {
  std::vector<double> ys;
  ys.reserve(entries.size());
  for (const auto& e : entries) ys.push_back(e.mean);
  return ys;
}

void DerivativeDataset::write_csv(std::ostream& out) const {
  out << "ell,z,t,y,N,sigma2\n";
  out.precision(17);
  for (const auto& e : entries) {
    out << e.index << ',' << e.z << ',' << e.abscissa << ',' << e.mean << ','
        << e.shots << ',' << e.variance << '\n';
  }
}

std::string DerivativeDataset::to_csv() const {
  std::ostringstream out;
  write_csv(out);
  return out.str();
}

ChebFit constrained_fit(const DerivativeDataset& dataset) {
  const int L = dataset.node_count();
  if (L < 2) throw std::invalid_argument("constrained fit needs L >= 2");

  std::vector<double> weights(L, 1.0);
  bool uniform = true;
  for (const auto& e : dataset.entries) {
    if (e.variance < 0.0) throw std::invalid_argument("negative variance");
    if (e.variance != dataset.entries.front().variance) uniform = false;
  }
  if (!uniform) {
    double sum = 0.0;
    for (int i = 0; i < L; ++i) {
      const double v = dataset.entries[i].variance;
      weights[i] = v > 0.0 ? 1.0 / v : 0.0;
      sum += weights[i];
    }
    if (sum <= 0.0) throw std::invalid_argument("degenerate weights (all zero)");
    // A zero-variance node is exact: give it the largest finite weight seen.
    double wmax = 0.0;
    for (double w : weights) wmax = std::max(wmax, w);
    for (int i = 0; i < L; ++i) {
      if (dataset.entries[i].variance == 0.0) weights[i] = wmax;
    }
  }

  // Eliminate b_0 = -sum_{m>=1} (-1)^m b_m; basis becomes
  // T_m(z) - (-1)^m for m = 1..L-1.
  Eigen::MatrixXd design(L, L - 1);
  Eigen::VectorXd target(L);
  for (int i = 0; i < L; ++i) {
    const double z = dataset.entries[i].z;
    const double sqw = std::sqrt(weights[i]);
    for (int m = 1; m < L; ++m) {
      const double sign = (m % 2 == 0) ? 1.0 : -1.0;
      design(i, m - 1) = sqw * (cheb_eval(m, z) - sign);
    }
    target(i) = sqw * dataset.entries[i].mean;
  }
  const Eigen::VectorXd solution = design.colPivHouseholderQr().solve(target);

  ChebFit fit;
  fit.window = dataset.window;
  fit.coeffs.assign(L, 0.0);
  double b0 = 0.0;
  for (int m = 1; m < L; ++m) {
    fit.coeffs[m] = solution(m - 1);
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    b0 -= sign * fit.coeffs[m];
  }
  fit.coeffs[0] = b0;
  return fit;
}

std::vector<double> derivative_node_weights(int node_count) {
  const std::vector<double> roots = cheb_roots(node_count);
  std::vector<double> weights(node_count, 0.0);
  for (int i = 0; i < node_count; ++i) {
    double acc = 0.0;
    double sign = -1.0;
    for (int m = 1; m < node_count; ++m) {
      acc += sign * static_cast<double>(m) * m * cheb_eval(m, roots[i]);
      sign = -sign;
    }
    weights[i] = acc * acc;
  }
  return weights;
}

double derivative_variance(int node_count, double window,
                           const std::vector<double>& node_variances) {
  if (static_cast<int>(node_variances.size()) != node_count) {
    throw std::invalid_argument("variance list length mismatch");
  }
  if (window <= 0.0) throw std::invalid_argument("window must be positive");
  const std::vector<double> weights = derivative_node_weights(node_count);
  double acc = 0.0;
  for (int i = 0; i < node_count; ++i) acc += node_variances[i] * weights[i];
  const double L = static_cast<double>(node_count);
  return 16.0 * acc / (L * L * window * window);
}

double derivative_variance_closed_form(int node_count, double window,
                                       double sigma2) {
  if (window <= 0.0) throw std::invalid_argument("window must be positive");
  const double L = static_cast<double>(node_count);
  return 4.0 * (L - 1.0) * (2.0 * L - 1.0) * (3.0 * L * L - 3.0 * L - 1.0) *
         sigma2 / (15.0 * window * window);
}

}  // namespace hamlearn
