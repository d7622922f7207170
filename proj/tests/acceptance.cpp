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

// End-to-end verification suite. Each numbered check prints one PASS/FAIL
// line; the process exits with the number of failed checks.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hamlearn/bounds.hpp"
#include "hamlearn/chebyshev.hpp"
#include "hamlearn/graph.hpp"
#include "hamlearn/json_io.hpp"
#include "hamlearn/learner.hpp"
#include "hamlearn/oracle.hpp"
#include "support/random_instances.hpp"

using namespace hamlearn;
using hamlearn::testing::random_sparse_hamiltonian;

namespace {

struct Failure {
  std::string detail;
};

class Check {
 public:
  explicit Check(std::string context) : context_(std::move(context)) {}

  void require(bool ok, const std::string& detail) {
    if (!ok) throw Failure{context_ + ": " + detail};
  }

  template <typename T>
  void require_le(T value, T limit, const std::string& what) {
    if (!(value <= limit)) {
      std::ostringstream msg;
      msg << context_ << ": " << what << " = " << value << " exceeds " << limit;
      throw Failure{msg.str()};
    }
  }

 private:
  std::string context_;
};

double run_parallel_trials(int trials,
                           const std::function<void(int)>& body) {
  const auto start = std::chrono::steady_clock::now();
  const int workers = static_cast<int>(
      std::max(1u, std::thread::hardware_concurrency()));
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::mutex error_mutex;
  std::string first_error;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const int trial = next.fetch_add(1);
        if (trial >= trials) return;
        try {
          body(trial);
        } catch (const Failure& failure) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (first_error.empty()) first_error = failure.detail;
          return;
        } catch (const std::exception& err) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (first_error.empty()) first_error = err.what();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (!first_error.empty()) throw Failure{first_error};
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

// P(Bin(n, p) >= k), exact.
double binomial_upper_tail(int n, double p, int k) {
  double tail = 0.0;
  for (int x = k; x <= n; ++x) {
    const double log_pmf = std::lgamma(n + 1.0) - std::lgamma(x + 1.0) -
                           std::lgamma(n - x + 1.0) + x * std::log(p) +
                           (n - x) * std::log1p(-p);
    tail += std::exp(log_pmf);
  }
  return tail;
}

// ---------------------------------------------------------------------------
// 1. Term selection exactness.
// ---------------------------------------------------------------------------
std::string criterion_term_selection() {
  Check check("term selection");
  RandomSource rng(1001);
  double worst = 0.0;
  for (int instance = 0; instance < 20; ++instance) {
    const Hamiltonian h = random_sparse_hamiltonian(rng, 8);
    for (int i = 0; i < h.term_count(); ++i) {
      const SpamSetting setting = spam_for_term(h, i);
      std::complex<double> acc = 0.0;
      for (const auto& term : h.terms()) {
        const OperatorSum comm = commutator(term.word, setting.probe);
        for (const auto& [word, coeff] : comm.terms()) {
          acc += term.coeff * coeff * setting.rho0.pauli_expectation(word);
        }
      }
      const double derivative = (std::complex<double>(0, 1) * acc).real();
      worst = std::max(worst, std::abs(derivative - h.term(i).coeff));
    }
  }
  check.require_le(worst, 1e-9, "max |Tr(i[H,P'] rho0) - theta_i|");
  std::ostringstream detail;
  detail << "max deviation " << worst;
  return detail.str();
}

// ---------------------------------------------------------------------------
// 2. Chebyshev machinery.
// ---------------------------------------------------------------------------
std::string criterion_chebyshev() {
  Check check("chebyshev");
  double worst_orth = 0.0;
  for (int L = 1; L <= 12; ++L) {
    const auto roots = cheb_roots(L);
    for (int i = 0; i < L; ++i) {
      for (int j = 0; j < L; ++j) {
        double acc = 0.0;
        for (double z : roots) acc += cheb_eval(i, z) * cheb_eval(j, z);
        double expected = 0.0;
        if (i == j) expected = (i == 0) ? L : L / 2.0;
        worst_orth = std::max(worst_orth, std::abs(acc - expected));
      }
    }
  }
  check.require_le(worst_orth, 1e-9, "orthogonality deviation");

  RandomSource rng(1002);
  double worst_rel = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int L = 2 + static_cast<int>(rng.uniform_int(9));
    const double window = rng.uniform(0.3, 2.5);
    std::vector<double> mono(L);
    for (auto& c : mono) c = rng.uniform(-2.0, 2.0);
    std::vector<double> ys;
    for (double z : cheb_roots(L)) {
      const double t = window / 2.0 * (1.0 + z);
      double value = 0.0;
      for (std::size_t k = mono.size(); k-- > 0;) value = value * t + mono[k];
      ys.push_back(value);
    }
    const double got = derivative_at_zero(interp_coeffs(ys, window));
    const double expected = mono[1];
    worst_rel = std::max(worst_rel, std::abs(got - expected) /
                                        std::max(1.0, std::abs(expected)));
  }
  check.require_le(worst_rel, 1e-8, "derivative recovery relative error");

  double worst_var = 0.0;
  for (int L = 2; L <= 10; ++L) {
    const double direct = derivative_variance(L, 1.3, std::vector<double>(L, 1.0));
    const double closed = derivative_variance_closed_form(L, 1.3, 1.0);
    worst_var = std::max(worst_var, std::abs(direct - closed) /
                                        std::max(1.0, closed));
  }
  check.require_le(worst_var, 1e-12, "variance closed-form mismatch");

  std::ostringstream detail;
  detail << "orthogonality " << worst_orth << ", derivative " << worst_rel
         << ", variance " << worst_var;
  return detail.str();
}

// ---------------------------------------------------------------------------
// 3. Variance formula under synthetic noise.
// ---------------------------------------------------------------------------
std::string criterion_variance() {
  Check check("variance formula");
  const int L = 4;
  const double window = 1.0;
  const int replicates = 10000;
  RandomSource rng(1003);
  double mean = 0.0;
  double sq = 0.0;
  for (int rep = 0; rep < replicates; ++rep) {
    std::vector<double> ys(L);
    for (auto& y : ys) y = rng.gaussian();
    const double c1 = derivative_at_zero(interp_coeffs(ys, window));
    mean += c1;
    sq += c1 * c1;
  }
  mean /= replicates;
  const double var = sq / replicates - mean * mean;
  const double predicted = derivative_variance_closed_form(L, window, 1.0);
  // Standard error of a sample variance of a Gaussian statistic.
  const double se = predicted * std::sqrt(2.0 / (replicates - 1.0));
  check.require_le(std::abs(var - predicted), 3.0 * se,
                   "empirical vs predicted variance gap");
  std::ostringstream detail;
  detail << "empirical " << var << " vs predicted " << predicted << " (se "
         << se << ")";
  return detail.str();
}

// ---------------------------------------------------------------------------
// 4. Counting and norm bounds on random TFIMs.
// ---------------------------------------------------------------------------
std::string criterion_bounds() {
  Check check("counting and norm bounds");
  RandomSource rng(1004);
  double worst_margin = 0.0;
  for (int instance = 0; instance < 1000; ++instance) {
    const int n = 2 + static_cast<int>(rng.uniform_int(6));
    const bool commuting = instance % 10 < 3;
    std::vector<double> couplings(n - 1);
    std::vector<double> fields(n);
    for (auto& j : couplings) j = rng.uniform(-1.0, 1.0);
    for (auto& b : fields) b = rng.uniform(-1.0, 1.0);

    Hamiltonian h = Hamiltonian::tfim(couplings, fields);
    if (commuting) {
      // Longitudinal-field chain: every term is a Z word, all commute.
      std::vector<HamiltonianTerm> terms;
      for (int i = 0; i + 1 < n; ++i) {
        PauliString bond(n);
        bond.set_letter(i, Pauli::Z);
        bond.set_letter(i + 1, Pauli::Z);
        terms.push_back({bond, couplings[i]});
      }
      for (int i = 0; i < n; ++i) {
        terms.push_back({PauliString::single_site(n, i, Pauli::Z), fields[i]});
      }
      h = Hamiltonian(n, std::move(terms));
    }

    const InteractionGraph g = InteractionGraph::build(h);
    const double degree = g.max_degree();
    const double theta = h.theta_inf_norm();
    const int site = static_cast<int>(rng.uniform_int(n));
    const PauliString probe = PauliString::single_site(
        h.qubit_count(), site, static_cast<Pauli>(1 + rng.uniform_int(2)));

    std::vector<HamiltonianTerm> local_terms;
    for (const auto& term : h.terms()) {
      for (int q : term.word.support()) {
        if (q == site) {
          local_terms.push_back(term);
          break;
        }
      }
    }

    for (int m = 1; m <= 4; ++m) {
      const double count_cap = std::pow(degree, m) * std::tgamma(m + 2.0);
      const auto tuples = enumerate_nonvanishing_tuples(h, probe, m);
      check.require_le(static_cast<double>(tuples.size()), count_cap,
                       "tuple count vs D^m (m+1)!");

      const OperatorSum iterated = iterated_commutator(h, probe, m);
      const double norm = spectral_norm(iterated);
      const double general_cap =
          std::pow(2.0 * degree * theta, m) * std::tgamma(m + 2.0);
      check.require_le(norm, general_cap * (1.0 + 1e-9) + 1e-12,
                       "||[H^m P]|| vs general bound");
      worst_margin = std::max(worst_margin, norm / std::max(1e-300, general_cap));

      if (commuting) {
        const double commuting_cap = std::pow(2.0 * (degree + 1.0) * theta, m);
        check.require_le(norm, commuting_cap * (1.0 + 1e-9) + 1e-12,
                         "||[H^m P]|| vs commuting bound");
        OperatorSum difference = iterated;
        if (!local_terms.empty()) {
          OperatorSum restricted = iterated_commutator(
              Hamiltonian(h.qubit_count(), local_terms), probe, m);
          restricted *= -1.0;
          difference += restricted;
        }
        double entrywise = 0.0;
        for (const auto& [word, coeff] : difference.terms()) {
          entrywise = std::max(entrywise, std::abs(coeff));
        }
        check.require_le(entrywise, 1e-9, "[H^m P] vs [H_1^m P] entrywise");
      }
    }
  }
  std::ostringstream detail;
  detail << "1000 instances, m <= 4; worst norm/bound ratio " << worst_margin;
  return detail.str();
}

// ---------------------------------------------------------------------------
// 5. Planner scaling across an epsilon sweep.
// ---------------------------------------------------------------------------
std::string criterion_planner() {
  Check check("planner scaling");
  const Scales scales = Scales::make(Mode::kGeneralUnitary, 4.0, 1.0);
  PlanOptions options;
  options.shot_allocation = false;

  std::vector<double> epsilons;
  std::vector<double> log_inv_eps;
  std::vector<double> l_star;
  std::vector<double> n_star;
  const int points = 13;
  for (int i = 0; i < points; ++i) {
    const double eps = std::pow(10.0, -1.0 - 2.0 * i / (points - 1.0));
    const LearnPlan p = plan(eps, 0.15, scales, options);
    epsilons.push_back(eps);
    log_inv_eps.push_back(std::log(1.0 / eps));
    l_star.push_back(p.node_count);
    n_star.push_back(static_cast<double>(p.shots_per_node));

    const double window_ratio = p.window * scales.gamma;
    check.require(window_ratio >= 0.1 && window_ratio <= 4.0,
                  "A*/tau outside [0.1, 4] at eps = " + std::to_string(eps));
  }
  for (std::size_t i = 1; i < l_star.size(); ++i) {
    check.require(l_star[i] >= l_star[i - 1],
                  "L* not monotone in log(1/eps)");
  }

  // Least-squares log fit L* = a + b log(1/eps).
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < l_star.size(); ++i) {
    sx += log_inv_eps[i];
    sy += l_star[i];
    sxx += log_inv_eps[i] * log_inv_eps[i];
    sxy += log_inv_eps[i] * l_star[i];
  }
  const double npts = static_cast<double>(l_star.size());
  const double slope = (npts * sxy - sx * sy) / (npts * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / npts;
  check.require(slope > 0.0, "log fit slope not positive");
  for (std::size_t i = 0; i < l_star.size(); ++i) {
    const double fitted = intercept + slope * log_inv_eps[i];
    const double ratio = l_star[i] / fitted;
    check.require(ratio > 1.0 / 3.0 && ratio < 3.0,
                  "L* departs from the log fit by more than 3x");
  }

  // N* <= C polylog(1/eps) / eps^2 with C fitted on the large-eps half.
  auto polylog = [](double log_inv) { return std::pow(1.0 + log_inv, 4.0); };
  double c_fit = 0.0;
  for (std::size_t i = 0; i < l_star.size() / 2; ++i) {
    c_fit = std::max(c_fit, n_star[i] * epsilons[i] * epsilons[i] /
                                polylog(log_inv_eps[i]));
  }
  for (std::size_t i = 0; i < l_star.size(); ++i) {
    check.require_le(n_star[i] * epsilons[i] * epsilons[i],
                     3.0 * c_fit * polylog(log_inv_eps[i]),
                     "N* eps^2 / polylog at eps = " + std::to_string(epsilons[i]));
  }

  std::ostringstream detail;
  detail << "L* " << l_star.front() << " -> " << l_star.back() << ", slope "
         << slope << ", C " << c_fit;
  return detail.str();
}

// ---------------------------------------------------------------------------
// 6. End-to-end learning on the 8-qubit TFIM ensemble.
// ---------------------------------------------------------------------------
std::string criterion_end_to_end() {
  Check check("end-to-end learning");
  const int trials = 40;
  const double epsilon = 0.1;
  const double delta = 0.15;
  std::vector<int> failed(trials, 0);
  std::vector<double> max_errors(trials, 0.0);

  run_parallel_trials(trials, [&](int trial) {
    const Hamiltonian h = random_tfim(8, 2000 + trial);
    const Scales scales = Scales::make(
        Mode::kGeneralUnitary, InteractionGraph::build(h).max_degree(),
        h.theta_inf_norm());
    const LearnPlan plan =
        plan_for_coefficient_error(epsilon, delta, scales);
    const QuantumOracle oracle(h, OracleKind::kUnitary, 3000 + trial);
    const LearnReport report = partition_infer(oracle, plan);
    max_errors[trial] = *report.max_abs_error;
    if (*report.max_abs_error > epsilon * h.theta_inf_norm()) failed[trial] = 1;
  });

  int failures = 0;
  for (int f : failed) failures += f;
  // Accept unless the failure count is incompatible (95%) with rate 0.15.
  int allowed = trials;
  for (int k = 0; k <= trials; ++k) {
    if (binomial_upper_tail(trials, delta, k) < 0.05) {
      allowed = k - 1;
      break;
    }
  }
  check.require_le(failures, allowed, "failed trials (binomial 95% bound)");
  std::ostringstream detail;
  detail << failures << "/" << trials << " failures (allowed " << allowed
         << "), median max error "
         << max_errors[trials / 2];
  return detail.str();
}

// ---------------------------------------------------------------------------
// 7. Optimization efficacy at a fixed query budget.
// ---------------------------------------------------------------------------
std::string criterion_optimizations() {
  Check check("optimization efficacy");
  for (int L = 2; L <= 12; ++L) {
    const long long budget = 10000LL * L;
    const auto alloc = allocate_shots(L, budget);
    std::vector<long long> uniform(L, budget / L);
    for (long long i = 0; i < budget % L; ++i) ++uniform[i];
    check.require_le(allocation_variance_bound(L, 1.0, alloc),
                     allocation_variance_bound(L, 1.0, uniform) * (1.0 + 1e-12),
                     "allocation bound vs uniform at L = " + std::to_string(L));
  }

  const int trials = 40;
  std::vector<double> with_opts(trials, 0.0);
  std::vector<double> without_opts(trials, 0.0);
  run_parallel_trials(trials, [&](int trial) {
    const Hamiltonian h = random_tfim(8, 2000 + trial);
    const Scales scales = Scales::make(
        Mode::kGeneralUnitary, InteractionGraph::build(h).max_degree(),
        h.theta_inf_norm());
    PlanOptions plan_options;
    plan_options.shot_allocation = true;
    const LearnPlan plan_on =
        plan_for_coefficient_error(0.1, 0.15, scales, plan_options);
    LearnPlan plan_off = plan_on;  // identical budget, uniform split
    plan_off.allocation.assign(plan_off.node_count, plan_off.shots_per_node);

    const QuantumOracle oracle(h, OracleKind::kUnitary, 3000 + trial);
    LearnerOptions on;
    on.constrained_fit = true;
    LearnerOptions off;
    off.constrained_fit = false;
    with_opts[trial] = *partition_infer(oracle, plan_on, on).max_abs_error;
    without_opts[trial] = *partition_infer(oracle, plan_off, off).max_abs_error;
  });

  const double median_on = median(with_opts);
  const double median_off = median(without_opts);
  check.require(median_on < median_off,
                "median max error with opts 2+3 not below the baseline");
  std::ostringstream detail;
  detail << "median " << median_on << " (opts on) vs " << median_off
         << " (off), ratio " << median_off / median_on;
  return detail.str();
}

// ---------------------------------------------------------------------------
// 8. Gibbs protocol on a noiseless 5-qubit TFIM.
// ---------------------------------------------------------------------------
std::string criterion_gibbs() {
  Check check("gibbs protocol");
  const Hamiltonian h = random_tfim(5, 77);
  const QuantumOracle oracle(h, OracleKind::kGibbs, 78);

  for (int i = 0; i < h.term_count(); ++i) {
    const double fd = oracle.gibbs_finite_difference(i, 1e-3);
    check.require_le(std::abs(fd + h.term(i).coeff), 1e-4,
                     "finite-difference derivative vs -theta_i");
  }

  const Scales scales = Scales::make(
      Mode::kGibbs, InteractionGraph::build(h).max_degree(),
      h.theta_inf_norm());
  const LearnPlan plan = plan_for_coefficient_error(0.1, 0.15, scales);
  LearnerOptions options;
  options.noiseless = true;
  const LearnReport report = gibbs_infer(oracle, plan, options);
  const double bias_abs = plan.predicted_bias_rel * plan.gamma;
  double worst = 0.0;
  for (const auto& term : report.terms) {
    worst = std::max(worst, std::abs(term.theta_hat - *term.theta_true));
  }
  check.require_le(worst, bias_abs, "noiseless max error vs bias bound");
  std::ostringstream detail;
  detail << "max error " << worst << " vs bias bound " << bias_abs;
  return detail.str();
}

// ---------------------------------------------------------------------------
// 9. Coloring on random sparse instances plus the 5-color TFIM example.
// ---------------------------------------------------------------------------
std::string criterion_coloring() {
  Check check("coloring");
  RandomSource rng(1009);
  for (int instance = 0; instance < 200; ++instance) {
    const Hamiltonian h = random_sparse_hamiltonian(rng, 8);
    const InteractionGraph g = InteractionGraph::build(h);
    const InteractionGraph g2 = g.squared();
    const Coloring coloring = greedy_color(g2);
    check.require(is_valid_coloring(g2, coloring), "invalid squared coloring");
    const int degree = g.max_degree();
    if (degree >= 2) {
      check.require_le(coloring.color_count(), degree * degree - degree + 2,
                       "color count vs D^2 - D + 2");
    }
  }

  const Hamiltonian tfim = Hamiltonian::tfim(std::vector<double>(8, 1.0),
                                             std::vector<double>(9, 1.0));
  const InteractionGraph g2 = InteractionGraph::build(tfim).squared();
  const Coloring natural = greedy_color(g2, VertexOrdering::kNaturalIndex);
  check.require(is_valid_coloring(g2, natural), "invalid TFIM coloring");
  check.require(natural.color_count() == 5,
                "natural-order greedy does not reach 5 colors");
  return "200 instances valid and bounded; TFIM-9 5-coloring found";
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int id;
    std::string name;
    std::function<std::string()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "term selection exactness", criterion_term_selection},
      {2, "chebyshev machinery", criterion_chebyshev},
      {3, "variance formula", criterion_variance},
      {4, "counting and norm bounds", criterion_bounds},
      {5, "planner scaling", criterion_planner},
      {6, "end-to-end learning", criterion_end_to_end},
      {7, "optimization efficacy", criterion_optimizations},
      {8, "gibbs protocol", criterion_gibbs},
      {9, "coloring", criterion_coloring},
  };

  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);

  int failures = 0;
  for (const auto& criterion : criteria) {
    if (only != 0 && criterion.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
      detail = criterion.run();
    } catch (const Failure& failure) {
      ok = false;
      detail = failure.detail;
    } catch (const std::exception& err) {
      ok = false;
      detail = err.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("[%s] %d. %s (%.1fs) %s\n", ok ? "PASS" : "FAIL", criterion.id,
                criterion.name.c_str(), seconds, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures;
}
