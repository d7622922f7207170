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

#include <optional>
#include <string>
#include <vector>

#include "hamlearn/bounds.hpp"
#include "hamlearn/graph.hpp"
#include "hamlearn/oracle.hpp"
#include "hamlearn/pauli.hpp"

namespace hamlearn {

/**
 * State preparation and measurement choice for one target term: the probe
 * P' (a single-qubit Pauli with [P_i, P'] != 0), the polarized block on
 * supp(P_i), and the moat qubits that must stay maximally mixed.
 *
 * The block is (I + c W)/2^{|X|} with W the word of i[P_i, P']/2 and the
 * polarization |c| = 1/2 chosen so that Tr(i[P_i, P'] rho0) = 1, which
 * makes the time derivative of <P'(t)> at zero equal exactly theta_i.
 */
struct SpamSetting {
  int term_index = 0;
  PauliString probe;
  ProductState::Block block;
  std::vector<int> moat;
  ProductState rho0;  // block + maximally mixed everywhere else
};

SpamSetting spam_for_term(const Hamiltonian& h, int term_index);

struct LearnerOptions {
  bool constrained_fit = true;  // fit with the f(0) = 0 constraint
  bool noiseless = false;
  bool record_truth = true;
  VertexOrdering ordering = VertexOrdering::kDegreeDescending;
};

/**
 * One dataset + Chebyshev fit: returns the estimated first derivative of
 * the SPAM function at zero. Streams are derived from the oracle seed and
 * the given labels.
 */
double estimate_derivative(const QuantumOracle& oracle,
                           const ProductState& rho0, const PauliString& probe,
                           const LearnPlan& plan, const LearnerOptions& options,
                           std::initializer_list<std::uint64_t> stream);

struct TermReport {
  int term_index = 0;
  std::string pauli;
  double theta_hat = 0.0;
  std::vector<double> replicates;
  std::optional<double> theta_true;
};

struct LearnReport {
  std::string protocol;
  LearnPlan plan;
  std::vector<TermReport> terms;
  int partition_count = 0;
  long long total_queries = 0;
  std::optional<double> max_abs_error;
  double wall_seconds = 0.0;
  std::uint64_t seed = 0;
};

/** One estimate_derivative pass per term; Omega(r) oracle batches. */
LearnReport naive_infer(const QuantumOracle& oracle, const LearnPlan& plan,
                        const LearnerOptions& options = {});

/**
 * Simultaneous inference over the partitions of a greedy coloring of the
 * squared interaction graph, with K-replicate median of means per term.
 */
LearnReport partition_infer(const QuantumOracle& oracle, const LearnPlan& plan,
                            const LearnerOptions& options = {});

/**
 * Gibbs-state protocol: partitions from a coloring of the interaction
 * graph itself, the terms measured directly at beta nodes, and
 * theta_i = -d<P_i>_beta/dbeta at zero.
 */
LearnReport gibbs_infer(const QuantumOracle& oracle, const LearnPlan& plan,
                        const LearnerOptions& options = {});

double median(std::vector<double> values);

}  // namespace hamlearn
