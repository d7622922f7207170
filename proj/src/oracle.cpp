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

#include "hamlearn/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>

namespace hamlearn {

namespace {

using Complex = std::complex<double>;

void check_dense_size(int n) {
  if (n > kMaxDenseQubits) {
    throw OracleError("oracle limited to " + std::to_string(kMaxDenseQubits) +
                      " qubits, got " + std::to_string(n));
  }
}

// In-place rho <- rho * (I + c W) for a Pauli word W (signed permutation).
void right_multiply_block(Eigen::MatrixXcd& rho, const PauliString& word,
                          double coeff) {
  const auto dim = rho.cols();
  const std::uint64_t xw = word.x_mask();
  Eigen::MatrixXcd shifted(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const auto src = static_cast<Eigen::Index>(static_cast<std::uint64_t>(col) ^ xw);
    shifted.col(col) =
        rho.col(src) * (coeff * word.amplitude_on_basis(static_cast<std::uint64_t>(col)));
  }
  rho += shifted;
}

// Single-qubit measurement-basis rotation: u sigma u^dag = Z.
Eigen::Matrix2cd basis_rotation(Pauli p) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd u;
  switch (p) {
    case Pauli::X:
      u << inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2;
      break;
    case Pauli::Y:
      u << Complex(inv_sqrt2, 0), Complex(0, -inv_sqrt2), Complex(inv_sqrt2, 0),
          Complex(0, inv_sqrt2);
      break;
    default:
      u.setIdentity();
      break;
  }
  return u;
}

// Applies a single-qubit unitary to the row index of a dense matrix.
void apply_left(Eigen::MatrixXcd& m, const Eigen::Matrix2cd& u, int site) {
  const auto dim = m.rows();
  const Eigen::Index bit = Eigen::Index{1} << site;
  for (Eigen::Index base = 0; base < dim; ++base) {
    if ((base & bit) != 0) continue;
    const Eigen::Index other = base | bit;
    for (Eigen::Index col = 0; col < dim; ++col) {
      const Complex a = m(base, col);
      const Complex b = m(other, col);
      m(base, col) = u(0, 0) * a + u(0, 1) * b;
      m(other, col) = u(1, 0) * a + u(1, 1) * b;
    }
  }
}

bool parity(std::uint64_t bits) { return (std::popcount(bits) & 1) != 0; }

void check_observables(int n, const std::vector<PauliString>& observables) {
  if (observables.empty()) {
    throw std::invalid_argument("need at least one observable");
  }
  std::uint64_t seen = 0;
  for (const auto& obs : observables) {
    if (obs.qubit_count() != n) {
      throw std::invalid_argument("observable width mismatch");
    }
    if (obs.is_identity()) {
      throw std::invalid_argument("identity observable is not measurable");
    }
    const std::uint64_t mask = obs.support_mask();
    if ((seen & mask) != 0) {
      throw std::invalid_argument("observables must have disjoint supports");
    }
    seen |= mask;
  }
}

}  // namespace

ProductState::ProductState(int qubit_count)
    : n_(qubit_count), claimed_(qubit_count, false) {
  if (qubit_count < 1) throw std::invalid_argument("need at least one qubit");
}

ProductState ProductState::maximally_mixed(int qubit_count) {
  return ProductState(qubit_count);
}

ProductState ProductState::single_site(int qubit_count, int site, Pauli p,
                                       double sign) {
  ProductState state(qubit_count);
  state.add_block({site}, PauliString::single_site(qubit_count, site, p), sign);
  return state;
}

void ProductState::add_block(std::vector<int> sites, const PauliString& word,
                             double coeff) {
  if (word.qubit_count() != n_) {
    throw std::invalid_argument("block word width mismatch");
  }
  if (std::abs(coeff) > 1.0 + 1e-12) {
    throw std::invalid_argument("block polarization exceeds 1");
  }
  if (sites.empty()) throw std::invalid_argument("empty block");
  std::sort(sites.begin(), sites.end());
  for (int q : sites) {
    if (q < 0 || q >= n_) throw std::invalid_argument("block site out of range");
    if (claimed_[q]) {
      throw std::invalid_argument("qubit " + std::to_string(q) +
                                  " claimed by two blocks");
    }
  }
  for (int q : word.support()) {
    if (!std::binary_search(sites.begin(), sites.end(), q)) {
      throw std::invalid_argument("block word acts outside its sites");
    }
  }
  for (int q : sites) claimed_[q] = true;
  blocks_.push_back({std::move(sites), word, coeff});
}

double ProductState::pauli_expectation(const PauliString& word) const {
  if (word.qubit_count() != n_) {
    throw std::invalid_argument("word width mismatch");
  }
  // Any letter on an implicitly maximally mixed qubit traces to zero.
  std::vector<bool> in_block(n_, false);
  for (const auto& block : blocks_) {
    for (int q : block.sites) in_block[q] = true;
  }
  for (int q : word.support()) {
    if (!in_block[q]) return 0.0;
  }
  double result = 1.0;
  for (const auto& block : blocks_) {
    const PauliString restricted = word.restricted_to(block.sites);
    if (restricted.is_identity()) continue;
    if (restricted == block.word) {
      result *= block.coeff;
    } else {
      return 0.0;
    }
  }
  return result;
}

Eigen::MatrixXcd ProductState::dense() const {
  check_dense_size(n_);
  const Eigen::Index dim = Eigen::Index{1} << n_;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Identity(dim, dim);
  for (const auto& block : blocks_) {
    if (block.coeff != 0.0 && !block.word.is_identity()) {
      right_multiply_block(rho, block.word, block.coeff);
    }
  }
  rho /= std::pow(2.0, n_);
  return rho;
}

double ShotBatch::mean(int observable_index) const {
  const long long plus = plus_counts.at(observable_index);
  return (2.0 * static_cast<double>(plus) - static_cast<double>(shots)) /
         static_cast<double>(shots);
}

NodeDistribution::NodeDistribution(std::vector<double> class_probs,
                                   std::vector<double> exact_means)
    : class_probs_(std::move(class_probs)), exact_means_(std::move(exact_means)),
      k_(static_cast<int>(exact_means_.size())) {}

double NodeDistribution::exact_mean(int observable_index) const {
  return exact_means_.at(observable_index);
}

std::vector<long long> NodeDistribution::sample_plus_counts(
    long long shots, RandomSource& rng) const {
  if (shots < 1) throw std::invalid_argument("need at least one shot");
  const std::vector<long long> class_counts = rng.multinomial(shots, class_probs_);
  std::vector<long long> plus(k_, 0);
  for (std::size_t c = 0; c < class_counts.size(); ++c) {
    if (class_counts[c] == 0) continue;
    for (int j = 0; j < k_; ++j) {
      if ((c & (std::size_t{1} << j)) == 0) plus[j] += class_counts[c];
    }
  }
  return plus;
}

EvolutionSampler::EvolutionSampler(const QuantumOracle& oracle,
                                   const ProductState& rho0,
                                   std::vector<PauliString> observables)
    : oracle_(oracle), observables_(std::move(observables)) {
  const int n = oracle.qubit_count();
  check_observables(n, observables_);
  masks_.reserve(observables_.size());
  for (const auto& obs : observables_) masks_.push_back(obs.support_mask());

  // R V: rotate every measured site into the Z basis.
  rotated_eigvecs_ = oracle.eigenvectors();
  for (const auto& obs : observables_) {
    for (int q : obs.support()) {
      const Pauli p = obs.letter(q);
      if (p == Pauli::X || p == Pauli::Y) {
        apply_left(rotated_eigvecs_, basis_rotation(p), q);
      }
    }
  }
  if (oracle.kind() == OracleKind::kUnitary) {
    const Eigen::MatrixXcd rho0_dense = rho0.dense();
    rho0_eigbasis_ = oracle.eigenvectors().adjoint() * rho0_dense *
                     oracle.eigenvectors();
  }
}

NodeDistribution EvolutionSampler::at(double abscissa) const {
  const Eigen::Index dim = rotated_eigvecs_.rows();
  const Eigen::VectorXd& evals = oracle_.eigenvalues();
  Eigen::VectorXd diagonal(dim);

  if (oracle_.kind() == OracleKind::kUnitary) {
    Eigen::VectorXcd phases(dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
      phases(j) = std::exp(Complex(0.0, -evals(j) * abscissa));
    }
    const Eigen::VectorXcd conj_phases = phases.conjugate();
    const Eigen::MatrixXcd evolved =
        phases.asDiagonal() * rho0_eigbasis_ * conj_phases.asDiagonal();
    const Eigen::MatrixXcd left = rotated_eigvecs_ * evolved;
    for (Eigen::Index y = 0; y < dim; ++y) {
      diagonal(y) = (left.row(y) * rotated_eigvecs_.row(y).adjoint())(0, 0).real();
    }
  } else {
    const double shift = evals.minCoeff();
    Eigen::VectorXd weights(dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
      weights(j) = std::exp(-abscissa * (evals(j) - shift));
    }
    weights /= weights.sum();
    for (Eigen::Index y = 0; y < dim; ++y) {
      diagonal(y) = rotated_eigvecs_.row(y).cwiseAbs2().dot(weights.transpose());
    }
  }

  // Clamp rounding noise and renormalize.
  double total = 0.0;
  for (Eigen::Index y = 0; y < dim; ++y) {
    if (diagonal(y) < 0.0) diagonal(y) = 0.0;
    total += diagonal(y);
  }
  diagonal /= total;

  const int k = observable_count();
  std::vector<double> class_probs(std::size_t{1} << k, 0.0);
  std::vector<double> means(k, 0.0);
  for (Eigen::Index y = 0; y < dim; ++y) {
    const double p = diagonal(y);
    std::size_t cls = 0;
    for (int j = 0; j < k; ++j) {
      const bool minus = parity(static_cast<std::uint64_t>(y) & masks_[j]);
      if (minus) {
        cls |= std::size_t{1} << j;
        means[j] -= p;
      } else {
        means[j] += p;
      }
    }
    class_probs[cls] += p;
  }
  return NodeDistribution(std::move(class_probs), std::move(means));
}

QuantumOracle::QuantumOracle(Hamiltonian h, OracleKind kind, std::uint64_t seed)
    : h_(std::move(h)), kind_(kind), seed_(seed) {
  check_dense_size(h_.qubit_count());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h_.dense());
  eigenvalues_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
}

double QuantumOracle::exact_expectation(const ProductState& rho0,
                                        const PauliString& obs,
                                        double x) const {
  if (obs.qubit_count() != qubit_count()) {
    throw std::invalid_argument("observable width mismatch");
  }
  if (kind_ == OracleKind::kGibbs) {
    const Eigen::Index dim = eigenvectors_.rows();
    const double shift = eigenvalues_.minCoeff();
    double partition = 0.0;
    double acc = 0.0;
    const std::uint64_t xw = obs.x_mask();
    for (Eigen::Index j = 0; j < dim; ++j) {
      const double w = std::exp(-x * (eigenvalues_(j) - shift));
      partition += w;
      Complex element = 0.0;
      for (Eigen::Index b = 0; b < dim; ++b) {
        const auto a = static_cast<Eigen::Index>(static_cast<std::uint64_t>(b) ^ xw);
        element += std::conj(eigenvectors_(a, j)) *
                   obs.amplitude_on_basis(static_cast<std::uint64_t>(b)) *
                   eigenvectors_(b, j);
      }
      acc += w * element.real();
    }
    return acc / partition;
  }
  const Eigen::MatrixXcd rho = state_dense(rho0, x);
  const Eigen::MatrixXcd obs_dense = obs.dense();
  return (obs_dense * rho).trace().real();
}

Eigen::MatrixXcd QuantumOracle::state_dense(const ProductState& rho0,
                                            double x) const {
  const Eigen::Index dim = eigenvectors_.rows();
  if (kind_ == OracleKind::kGibbs) {
    const double shift = eigenvalues_.minCoeff();
    Eigen::VectorXd weights(dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
      weights(j) = std::exp(-x * (eigenvalues_(j) - shift));
    }
    weights /= weights.sum();
    return eigenvectors_ * weights.asDiagonal() * eigenvectors_.adjoint();
  }
  if (rho0.qubit_count() != qubit_count()) {
    throw std::invalid_argument("state width mismatch");
  }
  Eigen::VectorXcd phases(dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    phases(j) = std::exp(Complex(0.0, -eigenvalues_(j) * x));
  }
  const Eigen::MatrixXcd rho0_eig =
      eigenvectors_.adjoint() * rho0.dense() * eigenvectors_;
  Eigen::MatrixXcd evolved(dim, dim);
  for (Eigen::Index a = 0; a < dim; ++a) {
    for (Eigen::Index b = 0; b < dim; ++b) {
      evolved(a, b) = phases(a) * rho0_eig(a, b) * std::conj(phases(b));
    }
  }
  return eigenvectors_ * evolved * eigenvectors_.adjoint();
}

ShotBatch QuantumOracle::sample_shots(
    const ProductState& rho0, const std::vector<PauliString>& observables,
    double x, long long shots,
    std::initializer_list<std::uint64_t> stream) const {
  if (shots < 1) throw std::invalid_argument("need at least one shot");
  EvolutionSampler sampler(*this, rho0, observables);
  const NodeDistribution dist = sampler.at(x);
  RandomSource rng = stream_source(stream);
  ShotBatch batch;
  batch.abscissa = x;
  batch.observables = observables;
  batch.shots = shots;
  batch.plus_counts = dist.sample_plus_counts(shots, rng);
  return batch;
}

std::vector<DerivativeDataset> QuantumOracle::build_dataset(
    const ProductState& rho0, const std::vector<PauliString>& observables,
    const LearnPlan& plan, bool noiseless,
    std::initializer_list<std::uint64_t> stream) const {
  const int L = plan.node_count;
  if (L < 1) throw std::invalid_argument("plan has no nodes");
  std::vector<long long> shots = plan.allocation;
  if (shots.empty()) shots.assign(L, plan.shots_per_node);
  if (static_cast<int>(shots.size()) != L) {
    throw std::invalid_argument("allocation length does not match node count");
  }

  EvolutionSampler sampler(*this, rho0, observables);
  const std::vector<double> roots = cheb_roots(L);
  const int k = sampler.observable_count();

  std::vector<DerivativeDataset> datasets(k);
  for (auto& ds : datasets) ds.window = plan.window;

  std::vector<std::uint64_t> base(stream);
  for (int ell = 0; ell < L; ++ell) {
    const double x = plan.window / 2.0 * (1.0 + roots[ell]);
    const NodeDistribution dist = sampler.at(x);
    std::vector<double> means(k);
    if (noiseless) {
      for (int j = 0; j < k; ++j) means[j] = dist.exact_mean(j);
    } else {
      std::vector<std::uint64_t> path = base;
      path.push_back(static_cast<std::uint64_t>(ell));
      std::uint64_t label = seed_;
      for (std::uint64_t part : path) label = derive_stream(label, {part});
      RandomSource rng(label);
      const std::vector<long long> plus = dist.sample_plus_counts(shots[ell], rng);
      for (int j = 0; j < k; ++j) {
        means[j] = (2.0 * static_cast<double>(plus[j]) -
                    static_cast<double>(shots[ell])) /
                   static_cast<double>(shots[ell]);
      }
    }
    for (int j = 0; j < k; ++j) {
      DatasetEntry entry;
      entry.index = ell + 1;
      entry.z = roots[ell];
      entry.abscissa = x;
      entry.mean = means[j];
      entry.shots = shots[ell];
      entry.variance = noiseless ? 0.0 : shot_variance_estimate(means[j], shots[ell]);
      datasets[j].entries.push_back(entry);
    }
  }
  return datasets;
}

double QuantumOracle::gibbs_finite_difference(int term_index,
                                              double dbeta) const {
  if (dbeta <= 0.0 || dbeta > 0.01) {
    throw std::invalid_argument("dbeta must lie in (0, 0.01]");
  }
  if (kind_ != OracleKind::kGibbs) {
    throw std::invalid_argument("finite difference needs a Gibbs oracle");
  }
  const PauliString& word = h_.term(term_index).word;
  const ProductState dummy = ProductState::maximally_mixed(qubit_count());
  const double forward = exact_expectation(dummy, word, dbeta);
  const double backward = exact_expectation(dummy, word, -dbeta);
  return (forward - backward) / (2.0 * dbeta);
}

RandomSource QuantumOracle::stream_source(
    std::initializer_list<std::uint64_t> path) const {
  std::uint64_t label = seed_;
  for (std::uint64_t part : path) label = derive_stream(label, {part});
  return RandomSource(label);
}

double shot_variance_estimate(double mean, long long shots) {
  const double n = static_cast<double>(shots);
  const double plug_in = (1.0 - mean * mean) / n;
  return std::max(plug_in, 1.0 / (4.0 * n * n));
}

}  // namespace hamlearn
