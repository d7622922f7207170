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
#include <vector>

#include <Eigen/Dense>

#include "hamlearn/bounds.hpp"
#include "hamlearn/chebyshev.hpp"
#include "hamlearn/pauli.hpp"
#include "hamlearn/rng.hpp"

namespace hamlearn {

struct OracleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/**
 * A product of block factors (I + c W) / 2^{|block|} over disjoint site
 * sets, with every unlisted qubit maximally mixed. Single-qubit factors
 * (I +- sigma)/2 are blocks of size one; |c| <= 1 keeps each factor a
 * valid density matrix.
 */
class ProductState {
 public:
  struct Block {
    std::vector<int> sites;
    PauliString word;     // support contained in `sites`
    double coeff = 0.0;   // c in (I + c W) / 2^{|sites|}
  };

  explicit ProductState(int qubit_count);

  static ProductState maximally_mixed(int qubit_count);
  /** (I + sign * sigma)/2 on one site, everything else maximally mixed. */
  static ProductState single_site(int qubit_count, int site, Pauli p,
                                  double sign = 1.0);

  void add_block(std::vector<int> sites, const PauliString& word, double coeff);

  int qubit_count() const { return n_; }
  const std::vector<Block>& blocks() const { return blocks_; }

  /** Exact Tr(W rho) by block factorization; no dense matrices. */
  double pauli_expectation(const PauliString& word) const;

  Eigen::MatrixXcd dense() const;

 private:
  int n_;
  std::vector<Block> blocks_;
  std::vector<bool> claimed_;
};

enum class OracleKind { kUnitary, kGibbs };

/** Per-observable +-1 tallies from simultaneous measurements at one node. */
struct ShotBatch {
  double abscissa = 0.0;
  std::vector<PauliString> observables;
  std::vector<long long> plus_counts;
  long long shots = 0;

  double mean(int observable_index) const;
};

/**
 * Joint outcome distribution of a set of disjoint-support observables at
 * one abscissa. Bitstring probabilities from the rotated density matrix
 * diagonal are aggregated by the sign pattern of the observables, so the
 * tallies drawn here have exactly the same joint law as per-shot bitstring
 * sampling.
 */
class NodeDistribution {
 public:
  NodeDistribution(std::vector<double> class_probs,
                   std::vector<double> exact_means);

  int observable_count() const { return k_; }
  const std::vector<double>& class_probs() const { return class_probs_; }
  double exact_mean(int observable_index) const;

  /** Per-observable +1 counts from `shots` joint samples. */
  std::vector<long long> sample_plus_counts(long long shots,
                                            RandomSource& rng) const;

 private:
  std::vector<double> class_probs_;
  std::vector<double> exact_means_;
  int k_;
};

class QuantumOracle;

/**
 * Reusable sampling pipeline for one (initial state, observable set) pair:
 * the eigenbasis projections are computed once, after which each abscissa
 * costs a single dense multiply (none at all for Gibbs states).
 */
class EvolutionSampler {
 public:
  EvolutionSampler(const QuantumOracle& oracle, const ProductState& rho0,
                   std::vector<PauliString> observables);

  NodeDistribution at(double abscissa) const;
  int observable_count() const { return static_cast<int>(masks_.size()); }

 private:
  const QuantumOracle& oracle_;
  std::vector<PauliString> observables_;
  std::vector<std::uint64_t> masks_;
  Eigen::MatrixXcd rotated_eigvecs_;  // R V
  Eigen::MatrixXcd rho0_eigbasis_;    // V^dag rho0 V (unitary kind only)
};

/**
 * Exact desk-scale black box: unitary dynamics e^{-iHt} rho0 e^{iHt} or
 * Gibbs states e^{-beta H}/Z for Hamiltonians on at most kMaxDenseQubits
 * qubits, with shot-noise sampling driven by a seeded, stream-derived RNG.
 */
class QuantumOracle {
 public:
  QuantumOracle(Hamiltonian h, OracleKind kind, std::uint64_t seed);

  int qubit_count() const { return h_.qubit_count(); }
  const Hamiltonian& hamiltonian() const { return h_; }
  OracleKind kind() const { return kind_; }
  std::uint64_t seed() const { return seed_; }

  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  const Eigen::MatrixXcd& eigenvectors() const { return eigenvectors_; }

  /** Tr(obs rho(x)); rho0 is ignored for Gibbs oracles. */
  double exact_expectation(const ProductState& rho0, const PauliString& obs,
                           double x) const;

  /** Dense rho(x) for diagnostics and tests. */
  Eigen::MatrixXcd state_dense(const ProductState& rho0, double x) const;

  /**
   * N simultaneous measurements of disjoint-support observables at one
   * abscissa. `stream` labels the RNG stream, derived from the oracle seed.
   */
  ShotBatch sample_shots(const ProductState& rho0,
                         const std::vector<PauliString>& observables, double x,
                         long long shots,
                         std::initializer_list<std::uint64_t> stream) const;

  /**
   * One dataset per observable at the plan's Chebyshev nodes, with the
   * plan's per-node shot allocation. Noiseless mode records the exact
   * expectations with zero variance.
   */
  std::vector<DerivativeDataset> build_dataset(
      const ProductState& rho0, const std::vector<PauliString>& observables,
      const LearnPlan& plan, bool noiseless,
      std::initializer_list<std::uint64_t> stream) const;

  /** Central-difference d<P_i>_beta / d beta at beta = 0 (test oracle). */
  double gibbs_finite_difference(int term_index, double dbeta) const;

  RandomSource stream_source(std::initializer_list<std::uint64_t> path) const;

 private:
  Hamiltonian h_;
  OracleKind kind_;
  std::uint64_t seed_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXcd eigenvectors_;

  friend class EvolutionSampler;
};

/** sigma^2 = max((1 - y^2)/N, 1/(4 N^2)), the guarded Bernoulli plug-in. */
double shot_variance_estimate(double mean, long long shots);

}  // namespace hamlearn
