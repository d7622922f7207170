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

#include <doctest.h>

#include <cmath>

#include "hamlearn/graph.hpp"
#include "hamlearn/json_io.hpp"
#include "hamlearn/learner.hpp"
#include "support/random_instances.hpp"

using namespace hamlearn;
using hamlearn::testing::random_sparse_hamiltonian;

namespace {

PauliString ps(const std::string& text, int n) {
  return PauliString::parse(text, n);
}

// Tr(i [H, P'] rho0) computed with the exact Pauli algebra.
double first_derivative_algebraic(const Hamiltonian& h, const PauliString& probe,
                                  const ProductState& rho0) {
  std::complex<double> acc = 0.0;
  for (const auto& term : h.terms()) {
    const OperatorSum comm = commutator(term.word, probe);
    for (const auto& [word, coeff] : comm.terms()) {
      acc += term.coeff * coeff * rho0.pauli_expectation(word);
    }
  }
  return (std::complex<double>(0, 1) * acc).real();
}

LearnPlan tiny_plan(double window, int nodes, long long shots, int groups) {
  LearnPlan plan;
  plan.window = window;
  plan.node_count = nodes;
  plan.shots_per_node = shots;
  plan.group_count = groups;
  return plan;
}

}  // namespace

TEST_CASE("spam_for_term picks the documented probes and states") {
  SUBCASE("P_i = Z0") {
    const Hamiltonian h(1, {{ps("Z0", 1), 0.4}});
    const SpamSetting s = spam_for_term(h, 0);
    CHECK(s.probe == ps("X0", 1));
    CHECK(s.block.word == ps("Y0", 1));
    CHECK(s.block.coeff == doctest::Approx(-0.5));
    CHECK(s.rho0.pauli_expectation(ps("Y0", 1)) == doctest::Approx(-0.5));
    // Normalization: Tr(i [P_i, P'] rho0) = 1.
    const OperatorSum comm = commutator(ps("Z0", 1), ps("X0", 1));
    double trace = 0.0;
    for (const auto& [word, coeff] : comm.terms()) {
      trace += (std::complex<double>(0, 1) * coeff *
                s.rho0.pauli_expectation(word))
                   .real();
    }
    CHECK(trace == doctest::Approx(1.0));
  }
  SUBCASE("P_i = Z0 Z1") {
    const Hamiltonian h(2, {{ps("Z0 Z1", 2), 0.4}});
    const SpamSetting s = spam_for_term(h, 0);
    CHECK(s.probe == ps("X0", 2));
    CHECK(s.block.word == ps("Y0 Z1", 2));
    CHECK(s.block.coeff == doctest::Approx(-0.5));
    CHECK(first_derivative_algebraic(h, s.probe, s.rho0) ==
          doctest::Approx(0.4).epsilon(1e-12));
  }
  SUBCASE("X-letter targets skip to the Y probe") {
    const Hamiltonian h(2, {{ps("X0 X1", 2), 0.4}});
    const SpamSetting s = spam_for_term(h, 0);
    CHECK(s.probe == ps("Y0", 2));
  }
  SUBCASE("moat covers exactly the overlapping remainder") {
    const Hamiltonian h = Hamiltonian::tfim({0.3, -0.2, 0.5}, {0.1, 0.2, 0.3, 0.4});
    // Term 1 is Z1 Z2; neighbors are Z0 Z1, Z2 Z3, X1, X2.
    const SpamSetting s = spam_for_term(h, 1);
    CHECK(s.moat == std::vector<int>{0, 3});
  }
}

TEST_CASE("term selection is exact on TFIM and random sparse instances") {
  const Hamiltonian tfim = Hamiltonian::tfim({0.8, -0.6, 0.4, 0.9, -0.2},
                                             {0.3, -0.7, 0.5, 0.1, -0.9, 0.6});
  for (int i = 0; i < tfim.term_count(); ++i) {
    const SpamSetting s = spam_for_term(tfim, i);
    CHECK(first_derivative_algebraic(tfim, s.probe, s.rho0) ==
          doctest::Approx(tfim.term(i).coeff).epsilon(1e-9).scale(1.0));
  }
  RandomSource rng(61);
  for (int trial = 0; trial < 25; ++trial) {
    const Hamiltonian h = random_sparse_hamiltonian(rng, 8);
    for (int i = 0; i < h.term_count(); ++i) {
      const SpamSetting s = spam_for_term(h, i);
      const double got = first_derivative_algebraic(h, s.probe, s.rho0);
      CHECK(std::abs(got - h.term(i).coeff) < 1e-9);
    }
  }
}

TEST_CASE("estimate_derivative") {
  SUBCASE("noiseless single qubit recovers the analytic slope") {
    const double theta = 0.41;
    const Hamiltonian h(1, {{ps("Z0", 1), theta}});
    const QuantumOracle oracle(h, OracleKind::kUnitary, 3);
    const ProductState rho0 = ProductState::single_site(1, 0, Pauli::X);
    // f(t) = <Y(t)> = sin(2 theta t), so f'(0) = 2 theta.
    LearnerOptions opts;
    opts.noiseless = true;
    const LearnPlan plan = tiny_plan(0.05, 5, 1, 1);
    const double estimate =
        estimate_derivative(oracle, rho0, ps("Y0", 1), plan, opts, {0, 0});
    CHECK(estimate == doctest::Approx(2.0 * theta).epsilon(1e-8));
  }
  SUBCASE("zero Hamiltonian estimates exactly zero") {
    const Hamiltonian h(1, {{ps("Z0", 1), 0.0}});
    const QuantumOracle oracle(h, OracleKind::kUnitary, 3);
    const ProductState rho0 = ProductState::single_site(1, 0, Pauli::X);
    LearnerOptions opts;
    opts.noiseless = true;
    opts.constrained_fit = false;
    const LearnPlan plan = tiny_plan(0.5, 4, 1, 1);
    CHECK(estimate_derivative(oracle, rho0, ps("Y0", 1), plan, opts, {0, 0}) ==
          doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("noisy replicates are centered on the noiseless value") {
    const double theta = -0.3;
    const Hamiltonian h(1, {{ps("Z0", 1), theta}});
    const QuantumOracle oracle(h, OracleKind::kUnitary, 4);
    const ProductState rho0 = ProductState::single_site(1, 0, Pauli::X);
    LearnerOptions noiseless;
    noiseless.noiseless = true;
    noiseless.constrained_fit = false;
    const LearnPlan plan = tiny_plan(0.4, 4, 400, 1);
    const double reference =
        estimate_derivative(oracle, rho0, ps("Y0", 1), plan, noiseless, {0, 0});

    LearnerOptions noisy;
    noisy.constrained_fit = false;
    const int reps = 400;
    double mean = 0.0, sq = 0.0;
    for (int k = 0; k < reps; ++k) {
      const double est = estimate_derivative(oracle, rho0, ps("Y0", 1), plan,
                                             noisy, {0, static_cast<std::uint64_t>(k)});
      mean += est;
      sq += est * est;
    }
    mean /= reps;
    const double se =
        std::sqrt((sq / reps - mean * mean) / static_cast<double>(reps));
    CHECK(std::abs(mean - reference) < 3.0 * se + 1e-6);
  }
}

TEST_CASE("naive_infer on a noiseless TFIM stays within the bias bound") {
  const Hamiltonian h = Hamiltonian::tfim({0.8, -0.6, 0.4}, {0.3, -0.7, 0.5, 0.1});
  const QuantumOracle oracle(h, OracleKind::kUnitary, 5);
  const Scales scales = Scales::make(
      Mode::kGeneralUnitary, InteractionGraph::build(h).max_degree(),
      h.theta_inf_norm());
  const LearnPlan plan = plan_for_coefficient_error(0.05, 0.15, scales);
  LearnerOptions opts;
  opts.noiseless = true;
  const LearnReport report = naive_infer(oracle, plan, opts);
  const double bias_abs = plan.predicted_bias_rel * plan.gamma;
  for (const auto& term : report.terms) {
    CHECK(std::abs(term.theta_hat - *term.theta_true) <= bias_abs + 1e-12);
  }
  CHECK(report.max_abs_error.has_value());
}

TEST_CASE("naive and partition inference coincide on singleton partitions") {
  // Two overlapping terms: the squared graph is K2, so both partitions are
  // singletons keyed by their own term index.
  const Hamiltonian h(3, {{ps("Z0 Z1", 3), 0.45}, {ps("X1", 3), -0.8}});
  const QuantumOracle oracle(h, OracleKind::kUnitary, 6);
  const Scales scales = Scales::make(Mode::kGeneralUnitary, 1.0,
                                     h.theta_inf_norm());
  LearnPlan plan = plan_for_coefficient_error(0.2, 0.15, scales);
  // Keep the runtime small; the equality is exact regardless of N.
  plan.shots_per_node = 500;
  plan.allocation = allocate_shots(plan.node_count,
                                   500 * static_cast<long long>(plan.node_count));
  LearnerOptions opts;
  const LearnReport a = naive_infer(oracle, plan, opts);
  const LearnReport b = partition_infer(oracle, plan, opts);
  CHECK(b.partition_count == 2);
  for (int i = 0; i < h.term_count(); ++i) {
    CHECK(a.terms[i].theta_hat == b.terms[i].theta_hat);
    CHECK(a.terms[i].replicates == b.terms[i].replicates);
  }
}

TEST_CASE("partition_infer") {
  SUBCASE("noiseless 9-qubit TFIM recovers every coefficient") {
    std::vector<double> couplings = {0.8, -0.6, 0.4, 0.9, -0.2, 0.7, -0.5, 0.3};
    std::vector<double> fields = {0.3, -0.7, 0.5, 0.1, -0.9, 0.6, 0.2, -0.4, 0.8};
    const Hamiltonian h = Hamiltonian::tfim(couplings, fields);
    const QuantumOracle oracle(h, OracleKind::kUnitary, 7);
    const Scales scales = Scales::make(
        Mode::kGeneralUnitary, InteractionGraph::build(h).max_degree(),
        h.theta_inf_norm());
    const LearnPlan plan = plan_for_coefficient_error(0.05, 0.15, scales);
    LearnerOptions opts;
    opts.noiseless = true;
    const LearnReport report = partition_infer(oracle, plan, opts);
    const double bias_abs = plan.predicted_bias_rel * plan.gamma;
    for (const auto& term : report.terms) {
      CHECK(std::abs(term.theta_hat - *term.theta_true) <= bias_abs + 1e-12);
    }
  }
  SUBCASE("seeded runs are identical; different seeds differ") {
    const Hamiltonian h = Hamiltonian::tfim({0.8, -0.6}, {0.3, -0.7, 0.5});
    const Scales scales = Scales::make(
        Mode::kGeneralUnitary, InteractionGraph::build(h).max_degree(),
        h.theta_inf_norm());
    LearnPlan plan = plan_for_coefficient_error(0.3, 0.15, scales);
    plan.shots_per_node = 300;
    plan.allocation.assign(plan.node_count, 300);
    const QuantumOracle oracle_a(h, OracleKind::kUnitary, 99);
    const QuantumOracle oracle_b(h, OracleKind::kUnitary, 99);
    const QuantumOracle oracle_c(h, OracleKind::kUnitary, 100);
    const LearnReport ra = partition_infer(oracle_a, plan);
    const LearnReport rb = partition_infer(oracle_b, plan);
    const LearnReport rc = partition_infer(oracle_c, plan);
    bool all_equal = true;
    bool any_differs = false;
    for (int i = 0; i < h.term_count(); ++i) {
      all_equal = all_equal && ra.terms[i].theta_hat == rb.terms[i].theta_hat;
      any_differs = any_differs || ra.terms[i].theta_hat != rc.terms[i].theta_hat;
    }
    CHECK(all_equal);
    CHECK(any_differs);
  }
  SUBCASE("query ledger counts N L K partitions exactly") {
    const Hamiltonian h = Hamiltonian::tfim({0.8, -0.6}, {0.3, -0.7, 0.5});
    const QuantumOracle oracle(h, OracleKind::kUnitary, 8);
    LearnPlan plan = tiny_plan(0.1, 3, 50, 4);
    const LearnReport report = partition_infer(oracle, plan);
    CHECK(report.total_queries ==
          50LL * 3 * 4 * report.partition_count);
  }
  SUBCASE("moat keeps distant perturbations out of the estimates") {
    // Chain long enough that term 0 has terms at graph distance >= 2.
    std::vector<double> couplings = {0.5, 0.4, 0.3, 0.2, 0.6};
    std::vector<double> fields = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
    const Hamiltonian base = Hamiltonian::tfim(couplings, fields);

    // Perturb the last coupling (graph distance >= 3 from term 0).
    auto perturbed_terms = base.terms();
    for (auto& term : perturbed_terms) {
      if (term.word == ps("Z4 Z5", 6)) term.coeff += 0.37;
    }
    const Hamiltonian perturbed(6, perturbed_terms);

    LearnerOptions opts;
    opts.noiseless = true;
    const LearnPlan plan = tiny_plan(1e-2, 5, 1, 1);
    const SpamSetting s = spam_for_term(base, 0);
    const QuantumOracle oracle_base(base, OracleKind::kUnitary, 1);
    const QuantumOracle oracle_pert(perturbed, OracleKind::kUnitary, 1);
    const double est_base =
        estimate_derivative(oracle_base, s.rho0, s.probe, plan, opts, {0, 0});
    const double est_pert =
        estimate_derivative(oracle_pert, s.rho0, s.probe, plan, opts, {0, 0});
    CHECK(std::abs(est_base - est_pert) < 1e-9);
  }
}

TEST_CASE("median of means meets its failure-rate guarantee") {
  // Group means deviate beyond the tolerance with probability exactly 1/4
  // (Gaussian with sd = tol / z_{0.875}); the median of K = 6 groups must
  // fail with rate at most delta + 3 sqrt(delta / trials).
  const double delta = 0.15;
  const int groups = static_cast<int>(std::ceil(2.0 * std::log(2.0 / delta)));
  REQUIRE(groups == 6);
  const double tol = 1.0;
  const double z875 = 1.150349380376008;  // Phi^{-1}(0.875)
  const double sd = tol / z875;
  RandomSource rng(62);
  const int trials = 400;
  int failures = 0;
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<double> means;
    for (int k = 0; k < groups; ++k) means.push_back(sd * rng.gaussian());
    if (std::abs(median(means)) > tol) ++failures;
  }
  const double rate = static_cast<double>(failures) / trials;
  CHECK(rate <= delta + 3.0 * std::sqrt(delta / trials));
}

TEST_CASE("gibbs_infer") {
  SUBCASE("single qubit recovers theta from the tanh slope") {
    const double theta = 0.57;
    const Hamiltonian h(1, {{ps("Z0", 1), theta}});
    const QuantumOracle oracle(h, OracleKind::kGibbs, 20);
    LearnerOptions opts;
    opts.noiseless = true;
    const LearnPlan plan = tiny_plan(0.01, 4, 1, 1);
    const LearnReport report = gibbs_infer(oracle, plan, opts);
    CHECK(report.terms[0].theta_hat == doctest::Approx(theta).epsilon(1e-6));
  }
  SUBCASE("zero coefficient stays zero under noise") {
    const Hamiltonian h(2, {{ps("Z0 Z1", 2), 0.0}, {ps("X0", 2), 0.0}});
    const QuantumOracle oracle(h, OracleKind::kGibbs, 21);
    const LearnPlan plan = tiny_plan(0.05, 3, 2000, 3);
    const LearnReport report = gibbs_infer(oracle, plan);
    for (const auto& term : report.terms) {
      CHECK(std::abs(term.theta_hat) < 1.0);
    }
  }
  SUBCASE("noiseless 5-qubit TFIM stays within the planner bias bound") {
    const Hamiltonian h = Hamiltonian::tfim({0.8, -0.6, 0.4, 0.9},
                                            {0.3, -0.7, 0.5, 0.1, -0.9});
    const QuantumOracle oracle(h, OracleKind::kGibbs, 22);
    const Scales scales = Scales::make(
        Mode::kGibbs, InteractionGraph::build(h).max_degree(),
        h.theta_inf_norm());
    const LearnPlan plan = plan_for_coefficient_error(0.1, 0.15, scales);
    LearnerOptions opts;
    opts.noiseless = true;
    const LearnReport report = gibbs_infer(oracle, plan, opts);
    const double bias_abs = plan.predicted_bias_rel * plan.gamma;
    for (const auto& term : report.terms) {
      CHECK(std::abs(term.theta_hat - *term.theta_true) <= bias_abs + 1e-12);
    }
    CHECK(gibbs_infer(oracle, plan, opts).partition_count <=
          InteractionGraph::build(h).max_degree() + 1);
  }
}

TEST_CASE("report JSON export carries the full record") {
  const Hamiltonian h = Hamiltonian::tfim({0.8, -0.6}, {0.3, -0.7, 0.5});
  const QuantumOracle oracle(h, OracleKind::kUnitary, 30);
  LearnPlan plan;
  plan.window = 0.1;
  plan.node_count = 3;
  plan.shots_per_node = 50;
  plan.group_count = 3;
  const LearnReport report = partition_infer(oracle, plan);
  const nlohmann::json doc = report_to_json(report);
  CHECK(doc["protocol"] == "partition");
  CHECK(doc["terms"].size() == 5);
  CHECK(doc["plan"]["L"] == 3);
  CHECK(doc["total_queries"].get<long long>() == report.total_queries);
  for (const auto& term : doc["terms"]) {
    CHECK(term.contains("theta_hat"));
    CHECK(term["replicates"].size() == 3);
  }
}
