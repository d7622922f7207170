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

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hamlearn {

/** Symbols for the single-site Pauli operators (and identity). */
enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char pauli_letter(Pauli p);

/**
 * An n-qubit Pauli word, encoded with one x-bit and one z-bit per site
 * (I=00, X=10, Y=11, Z=01). Site q lives in bit q%64 of word q/64.
 *
 * Text format: whitespace-separated site-indexed letters, e.g. "X2 Z5",
 * with 0-based sites and identity implied on all other sites. The
 * all-identity word renders as "I".
 */
class PauliString {
 public:
  explicit PauliString(int qubit_count = 0);

  /** Parses the "X2 Z5" text format for an n-qubit word. */
  static PauliString parse(const std::string& text, int qubit_count);

  static PauliString single_site(int qubit_count, int site, Pauli p);

  int qubit_count() const { return n_; }
  Pauli letter(int site) const;
  void set_letter(int site, Pauli p);

  bool is_identity() const;
  /** Sites with a non-identity letter, ascending. */
  std::vector<int> support() const;
  int weight() const;
  std::uint64_t support_mask() const;  // requires n <= 64

  bool commutes_with(const PauliString& other) const;

  /** Keeps letters on `sites`, resets everything else to identity. */
  PauliString restricted_to(const std::vector<int>& sites) const;

  std::string str() const;

  bool operator==(const PauliString& other) const;
  bool operator!=(const PauliString& other) const { return !(*this == other); }
  bool operator<(const PauliString& other) const;

  /** Dense 2^n x 2^n matrix realization (n bounded by kMaxDenseQubits). */
  Eigen::MatrixXcd dense() const;

  /**
   * Applies the word to basis state |index>: the image is |index ^ x_mask>
   * with the returned amplitude. Requires n <= 64.
   */
  std::complex<double> amplitude_on_basis(std::uint64_t index) const;
  std::uint64_t x_mask() const;

 private:
  int n_ = 0;
  std::vector<std::uint64_t> x_;
  std::vector<std::uint64_t> z_;

  friend PauliString word_product(const PauliString&, const PauliString&,
                                  int& phase_exponent);
};

/** Largest qubit count for which dense realizations are allowed. */
inline constexpr int kMaxDenseQubits = 10;

/** A Pauli word together with a global phase i^k, k in {0,1,2,3}. */
struct PhasedPauli {
  int phase_exponent = 0;
  PauliString word;

  std::complex<double> phase() const;
};

/** Group product a*b with the accumulated phase. */
PhasedPauli multiply(const PauliString& a, const PauliString& b);

PhasedPauli multiply(const PhasedPauli& a, const PhasedPauli& b);

/**
 * A complex linear combination of Pauli words. Coefficients with magnitude
 * at or below kZeroTolerance are dropped on insertion.
 */
class OperatorSum {
 public:
  static constexpr double kZeroTolerance = 1e-12;

  explicit OperatorSum(int qubit_count = 0);

  int qubit_count() const { return n_; }
  std::size_t term_count() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  void add(const PauliString& word, std::complex<double> coeff);
  std::complex<double> coefficient(const PauliString& word) const;

  const std::map<PauliString, std::complex<double>>& terms() const {
    return terms_;
  }

  OperatorSum& operator+=(const OperatorSum& other);
  OperatorSum& operator*=(std::complex<double> scale);

  Eigen::MatrixXcd dense() const;

 private:
  int n_ = 0;
  std::map<PauliString, std::complex<double>> terms_;
};

/** [a, b] = ab - ba: empty when a and b commute, otherwise one word. */
OperatorSum commutator(const PauliString& a, const PauliString& b);

/** [a, s] extended term-by-term over an operator sum. */
OperatorSum commutator(const PauliString& a, const OperatorSum& s);

/** One term of a Hamiltonian in the Pauli basis. */
struct HamiltonianTerm {
  PauliString word;
  double coeff = 0.0;
};

/**
 * H = sum_m theta_m P_m with real coefficients. Construction validates that
 * every word is non-identity (traceless H) and that no word repeats.
 */
class Hamiltonian {
 public:
  Hamiltonian(int qubit_count, std::vector<HamiltonianTerm> terms);

  int qubit_count() const { return n_; }
  int term_count() const { return static_cast<int>(terms_.size()); }
  const HamiltonianTerm& term(int i) const { return terms_.at(i); }
  const std::vector<HamiltonianTerm>& terms() const { return terms_; }

  /** max_m |theta_m| */
  double theta_inf_norm() const;

  Eigen::MatrixXcd dense() const;

  /** Transverse field Ising chain sum_i J_i Z_i Z_{i+1} + sum_i B_i X_i. */
  static Hamiltonian tfim(const std::vector<double>& couplings,
                          const std::vector<double>& fields);

 private:
  int n_;
  std::vector<HamiltonianTerm> terms_;
};

/** Exact expansion of [H^m P] by repeated application of [H, .]. */
OperatorSum iterated_commutator(const Hamiltonian& h, const PauliString& p,
                                int order);

/** Largest singular value of the dense realization (n <= kMaxDenseQubits). */
double spectral_norm(const OperatorSum& s);

}  // namespace hamlearn
