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

#include "hamlearn/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace hamlearn {

namespace {

constexpr std::complex<double> kImaginary{0.0, 1.0};

// Exponent k of the phase i^k in sigma_a sigma_b = i^k sigma_{a*b},
// indexed [a][b] with I=0, X=1, Y=2, Z=3.
constexpr int kProductPhase[4][4] = {
    {0, 0, 0, 0},
    {0, 0, 1, 3},
    {0, 3, 0, 1},
    {0, 1, 3, 0},
};

std::complex<double> phase_from_exponent(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0:
      return {1.0, 0.0};
    case 1:
      return {0.0, 1.0};
    case 2:
      return {-1.0, 0.0};
    default:
      return {0.0, -1.0};
  }
}

void check_same_width(const PauliString& a, const PauliString& b) {
  if (a.qubit_count() != b.qubit_count()) {
    throw std::invalid_argument("Pauli strings act on different qubit counts (" +
                                std::to_string(a.qubit_count()) + " vs " +
                                std::to_string(b.qubit_count()) + ")");
  }
}

}  // namespace

char pauli_letter(Pauli p) {
  switch (p) {
    case Pauli::I:
      return 'I';
    case Pauli::X:
      return 'X';
    case Pauli::Y:
      return 'Y';
    default:
      return 'Z';
  }
}

PauliString::PauliString(int qubit_count) : n_(qubit_count) {
  if (qubit_count < 0) throw std::invalid_argument("negative qubit count");
  const std::size_t words = (static_cast<std::size_t>(n_) + 63) / 64;
  x_.assign(words, 0);
  z_.assign(words, 0);
}

PauliString PauliString::parse(const std::string& text, int qubit_count) {
  PauliString result(qubit_count);
  std::istringstream stream(text);
  std::string token;
  while (stream >> token) {
    if (token == "I") continue;  // explicit identity word
    const char letter = static_cast<char>(std::toupper(token.front()));
    Pauli p;
    switch (letter) {
      case 'I':
        p = Pauli::I;
        break;
      case 'X':
        p = Pauli::X;
        break;
      case 'Y':
        p = Pauli::Y;
        break;
      case 'Z':
        p = Pauli::Z;
        break;
      default:
        throw std::invalid_argument("bad Pauli letter in token '" + token + "'");
    }
    if (token.size() < 2) {
      throw std::invalid_argument("missing site index in token '" + token + "'");
    }
    std::size_t consumed = 0;
    int site;
    try {
      site = std::stoi(token.substr(1), &consumed);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad site index in token '" + token + "'");
    }
    if (consumed + 1 != token.size() || site < 0) {
      throw std::invalid_argument("bad site index in token '" + token + "'");
    }
    if (site >= qubit_count) {
      throw std::invalid_argument("site " + std::to_string(site) +
                                  " out of range for " +
                                  std::to_string(qubit_count) + " qubits");
    }
    if (result.letter(site) != Pauli::I) {
      throw std::invalid_argument("duplicate site " + std::to_string(site) +
                                  " in '" + text + "'");
    }
    if (p != Pauli::I) result.set_letter(site, p);
  }
  return result;
}

PauliString PauliString::single_site(int qubit_count, int site, Pauli p) {
  PauliString result(qubit_count);
  result.set_letter(site, p);
  return result;
}

Pauli PauliString::letter(int site) const {
  if (site < 0 || site >= n_) throw std::out_of_range("site out of range");
  const std::uint64_t xb = (x_[site / 64] >> (site % 64)) & 1u;
  const std::uint64_t zb = (z_[site / 64] >> (site % 64)) & 1u;
  if (xb && zb) return Pauli::Y;
  if (xb) return Pauli::X;
  if (zb) return Pauli::Z;
  return Pauli::I;
}

void PauliString::set_letter(int site, Pauli p) {
  if (site < 0 || site >= n_) throw std::out_of_range("site out of range");
  const std::uint64_t bit = std::uint64_t{1} << (site % 64);
  x_[site / 64] &= ~bit;
  z_[site / 64] &= ~bit;
  if (p == Pauli::X || p == Pauli::Y) x_[site / 64] |= bit;
  if (p == Pauli::Z || p == Pauli::Y) z_[site / 64] |= bit;
}

bool PauliString::is_identity() const {
  for (std::size_t i = 0; i < x_.size(); ++i) {
    if (x_[i] != 0 || z_[i] != 0) return false;
  }
  return true;
}

std::vector<int> PauliString::support() const {
  std::vector<int> sites;
  for (int q = 0; q < n_; ++q) {
    if (letter(q) != Pauli::I) sites.push_back(q);
  }
  return sites;
}

int PauliString::weight() const {
  int total = 0;
  for (std::size_t i = 0; i < x_.size(); ++i) {
    total += std::popcount(x_[i] | z_[i]);
  }
  return total;
}

std::uint64_t PauliString::support_mask() const {
  if (n_ > 64) throw std::invalid_argument("support_mask needs n <= 64");
  if (n_ == 0) return 0;
  return x_[0] | z_[0];
}

bool PauliString::commutes_with(const PauliString& other) const {
  check_same_width(*this, other);
  int anticommuting_sites = 0;
  for (std::size_t i = 0; i < x_.size(); ++i) {
    anticommuting_sites += std::popcount(x_[i] & other.z_[i]);
    anticommuting_sites += std::popcount(z_[i] & other.x_[i]);
  }
  return anticommuting_sites % 2 == 0;
}

PauliString PauliString::restricted_to(const std::vector<int>& sites) const {
  PauliString result(n_);
  for (int q : sites) result.set_letter(q, letter(q));
  return result;
}

std::string PauliString::str() const {
  std::ostringstream out;
  bool first = true;
  for (int q = 0; q < n_; ++q) {
    const Pauli p = letter(q);
    if (p == Pauli::I) continue;
    if (!first) out << ' ';
    out << pauli_letter(p) << q;
    first = false;
  }
  if (first) return "I";
  return out.str();
}

bool PauliString::operator==(const PauliString& other) const {
  return n_ == other.n_ && x_ == other.x_ && z_ == other.z_;
}

bool PauliString::operator<(const PauliString& other) const {
  if (n_ != other.n_) return n_ < other.n_;
  if (z_ != other.z_) return z_ < other.z_;
  return x_ < other.x_;
}

std::complex<double> PauliString::amplitude_on_basis(std::uint64_t index) const {
  if (n_ > 64) throw std::invalid_argument("basis action needs n <= 64");
  const std::uint64_t xw = x_.empty() ? 0 : x_[0];
  const std::uint64_t zw = z_.empty() ? 0 : z_[0];
  const int y_count = std::popcount(xw & zw);
  const int sign_flips = std::popcount(zw & index);
  std::complex<double> amp = phase_from_exponent(y_count);
  if (sign_flips % 2 != 0) amp = -amp;
  return amp;
}

std::uint64_t PauliString::x_mask() const {
  if (n_ > 64) throw std::invalid_argument("x_mask needs n <= 64");
  return x_.empty() ? 0 : x_[0];
}

Eigen::MatrixXcd PauliString::dense() const {
  if (n_ > kMaxDenseQubits) {
    throw std::invalid_argument("dense realization limited to " +
                                std::to_string(kMaxDenseQubits) + " qubits");
  }
  const std::uint64_t dim = std::uint64_t{1} << n_;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  const std::uint64_t xw = x_mask();
  for (std::uint64_t col = 0; col < dim; ++col) {
    m(col ^ xw, col) = amplitude_on_basis(col);
  }
  return m;
}

std::complex<double> PhasedPauli::phase() const {
  return phase_from_exponent(phase_exponent);
}

PauliString word_product(const PauliString& a, const PauliString& b,
                         int& phase_exponent) {
  PauliString result(a.n_);
  phase_exponent = 0;
  for (int q = 0; q < a.n_; ++q) {
    const int la = static_cast<int>(a.letter(q));
    const int lb = static_cast<int>(b.letter(q));
    phase_exponent += kProductPhase[la][lb];
  }
  for (std::size_t i = 0; i < a.x_.size(); ++i) {
    result.x_[i] = a.x_[i] ^ b.x_[i];
    result.z_[i] = a.z_[i] ^ b.z_[i];
  }
  phase_exponent %= 4;
  return result;
}

PhasedPauli multiply(const PauliString& a, const PauliString& b) {
  check_same_width(a, b);
  PhasedPauli result;
  result.word = word_product(a, b, result.phase_exponent);
  return result;
}

PhasedPauli multiply(const PhasedPauli& a, const PhasedPauli& b) {
  PhasedPauli result = multiply(a.word, b.word);
  result.phase_exponent =
      (result.phase_exponent + a.phase_exponent + b.phase_exponent) % 4;
  return result;
}

OperatorSum::OperatorSum(int qubit_count) : n_(qubit_count) {}

void OperatorSum::add(const PauliString& word, std::complex<double> coeff) {
  if (word.qubit_count() != n_) {
    throw std::invalid_argument("word width does not match operator sum");
  }
  auto it = terms_.find(word);
  if (it == terms_.end()) {
    if (std::abs(coeff) > kZeroTolerance) terms_.emplace(word, coeff);
    return;
  }
  it->second += coeff;
  if (std::abs(it->second) <= kZeroTolerance) terms_.erase(it);
}

std::complex<double> OperatorSum::coefficient(const PauliString& word) const {
  auto it = terms_.find(word);
  return it == terms_.end() ? std::complex<double>{0.0, 0.0} : it->second;
}

OperatorSum& OperatorSum::operator+=(const OperatorSum& other) {
  if (other.n_ != n_) throw std::invalid_argument("operator sum width mismatch");
  for (const auto& [word, coeff] : other.terms_) add(word, coeff);
  return *this;
}

OperatorSum& OperatorSum::operator*=(std::complex<double> scale) {
  if (std::abs(scale) <= kZeroTolerance) {
    terms_.clear();
    return *this;
  }
  for (auto& [word, coeff] : terms_) coeff *= scale;
  return *this;
}

Eigen::MatrixXcd OperatorSum::dense() const {
  if (n_ > kMaxDenseQubits) {
    throw std::invalid_argument("dense realization limited to " +
                                std::to_string(kMaxDenseQubits) + " qubits");
  }
  const std::uint64_t dim = std::uint64_t{1} << n_;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [word, coeff] : terms_) {
    const std::uint64_t xw = word.x_mask();
    for (std::uint64_t col = 0; col < dim; ++col) {
      m(col ^ xw, col) += coeff * word.amplitude_on_basis(col);
    }
  }
  return m;
}

OperatorSum commutator(const PauliString& a, const PauliString& b) {
  check_same_width(a, b);
  OperatorSum result(a.qubit_count());
  if (a.commutes_with(b)) return result;
  // For anticommuting words, [a,b] = 2ab.
  const PhasedPauli product = multiply(a, b);
  result.add(product.word, 2.0 * product.phase());
  return result;
}

OperatorSum commutator(const PauliString& a, const OperatorSum& s) {
  OperatorSum result(s.qubit_count());
  for (const auto& [word, coeff] : s.terms()) {
    if (a.commutes_with(word)) continue;
    const PhasedPauli product = multiply(a, word);
    result.add(product.word, 2.0 * coeff * product.phase());
  }
  return result;
}

Hamiltonian::Hamiltonian(int qubit_count, std::vector<HamiltonianTerm> terms)
    : n_(qubit_count), terms_(std::move(terms)) {
  if (n_ < 1) throw std::invalid_argument("Hamiltonian needs at least 1 qubit");
  if (terms_.empty()) throw std::invalid_argument("Hamiltonian has no terms");
  for (const auto& term : terms_) {
    if (term.word.qubit_count() != n_) {
      throw std::invalid_argument("term width does not match qubit count");
    }
    if (term.word.is_identity()) {
      throw std::invalid_argument(
          "identity term not allowed (Hamiltonian must be traceless)");
    }
  }
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    for (std::size_t j = i + 1; j < terms_.size(); ++j) {
      if (terms_[i].word == terms_[j].word) {
        throw std::invalid_argument("duplicate Pauli term '" +
                                    terms_[i].word.str() + "'");
      }
    }
  }
}

double Hamiltonian::theta_inf_norm() const {
  double norm = 0.0;
  for (const auto& term : terms_) norm = std::max(norm, std::abs(term.coeff));
  return norm;
}

Eigen::MatrixXcd Hamiltonian::dense() const {
  OperatorSum sum(n_);
  for (const auto& term : terms_) sum.add(term.word, term.coeff);
  return sum.dense();
}

Hamiltonian Hamiltonian::tfim(const std::vector<double>& couplings,
                              const std::vector<double>& fields) {
  const int n = static_cast<int>(fields.size());
  if (couplings.size() + 1 != fields.size()) {
    throw std::invalid_argument("tfim needs |couplings| = |fields| - 1");
  }
  std::vector<HamiltonianTerm> terms;
  for (int i = 0; i + 1 < n; ++i) {
    PauliString word(n);
    word.set_letter(i, Pauli::Z);
    word.set_letter(i + 1, Pauli::Z);
    terms.push_back({word, couplings[i]});
  }
  for (int i = 0; i < n; ++i) {
    terms.push_back({PauliString::single_site(n, i, Pauli::X), fields[i]});
  }
  return Hamiltonian(n, std::move(terms));
}

OperatorSum iterated_commutator(const Hamiltonian& h, const PauliString& p,
                                int order) {
  if (order < 0) throw std::invalid_argument("order must be nonnegative");
  if (p.qubit_count() != h.qubit_count()) {
    throw std::invalid_argument("probe width does not match Hamiltonian");
  }
  OperatorSum current(h.qubit_count());
  current.add(p, 1.0);
  for (int step = 0; step < order; ++step) {
    OperatorSum next(h.qubit_count());
    for (const auto& term : h.terms()) {
      OperatorSum piece = commutator(term.word, current);
      piece *= term.coeff;
      next += piece;
    }
    current = std::move(next);
  }
  return current;
}

double spectral_norm(const OperatorSum& s) {
  if (s.empty()) return 0.0;
  // Single Pauli word: the norm is just the coefficient magnitude.
  if (s.term_count() == 1) return std::abs(s.terms().begin()->second);
  const Eigen::MatrixXcd m = s.dense();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m.adjoint() * m,
                                                         Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, solver.eigenvalues().maxCoeff()));
}

}  // namespace hamlearn
