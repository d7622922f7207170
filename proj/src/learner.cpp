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

#include "hamlearn/learner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include "hamlearn/chebyshev.hpp"

namespace hamlearn {

namespace {

double fit_and_differentiate(const DerivativeDataset& dataset,
                             bool constrained) {
  const ChebFit fit = constrained ? constrained_fit(dataset)
                                  : interp_coeffs(dataset.means(), dataset.window);
  return derivative_at_zero(fit);
}

struct PartitionRun {
  // replicate_estimates[j][k] = derivative estimate for term j, replicate k
  std::vector<std::vector<double>> replicate_estimates;
  long long queries = 0;
};

/**
 * Shared measurement loop: one sampler per (state, observables) pair, the
 * node distributions computed once and sampled K times with streams
 * derived from (partition key, replicate, node).
 */
PartitionRun run_partition(const QuantumOracle& oracle,
                           const ProductState& rho0,
                           const std::vector<PauliString>& observables,
                           const LearnPlan& plan, const LearnerOptions& options,
                           std::uint64_t partition_key) {
  const int L = plan.node_count;
  std::vector<long long> shots = plan.allocation;
  if (shots.empty()) shots.assign(L, plan.shots_per_node);
  if (static_cast<int>(shots.size()) != L) {
    throw std::invalid_argument("allocation length does not match node count");
  }

  EvolutionSampler sampler(oracle, rho0, observables);
  const std::vector<double> roots = cheb_roots(L);
  std::vector<NodeDistribution> nodes;
  nodes.reserve(L);
  for (int ell = 0; ell < L; ++ell) {
    nodes.push_back(sampler.at(plan.window / 2.0 * (1.0 + roots[ell])));
  }

  const int k_obs = sampler.observable_count();
  const int replicates = options.noiseless ? 1 : plan.group_count;
  PartitionRun run;
  run.replicate_estimates.assign(k_obs, {});

  for (int k = 0; k < replicates; ++k) {
    std::vector<DerivativeDataset> datasets(k_obs);
    for (auto& ds : datasets) ds.window = plan.window;
    for (int ell = 0; ell < L; ++ell) {
      std::vector<double> means(k_obs);
      if (options.noiseless) {
        for (int j = 0; j < k_obs; ++j) means[j] = nodes[ell].exact_mean(j);
      } else {
        RandomSource rng = oracle.stream_source(
            {partition_key, static_cast<std::uint64_t>(k),
             static_cast<std::uint64_t>(ell)});
        const std::vector<long long> plus =
            nodes[ell].sample_plus_counts(shots[ell], rng);
        for (int j = 0; j < k_obs; ++j) {
          means[j] = (2.0 * static_cast<double>(plus[j]) -
                      static_cast<double>(shots[ell])) /
                     static_cast<double>(shots[ell]);
        }
      }
      for (int j = 0; j < k_obs; ++j) {
        DatasetEntry entry;
        entry.index = ell + 1;
        entry.z = roots[ell];
        entry.abscissa = plan.window / 2.0 * (1.0 + roots[ell]);
        entry.mean = means[j];
        entry.shots = shots[ell];
        entry.variance =
            options.noiseless ? 0.0 : shot_variance_estimate(means[j], shots[ell]);
        datasets[j].entries.push_back(entry);
      }
    }
    for (int j = 0; j < k_obs; ++j) {
      run.replicate_estimates[j].push_back(
          fit_and_differentiate(datasets[j], options.constrained_fit));
    }
  }
  // The query ledger counts the full budget even for a noiseless run.
  long long per_replicate = 0;
  for (long long s : shots) per_replicate += s;
  run.queries = per_replicate * plan.group_count;
  return run;
}

}  // namespace

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of empty list");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

SpamSetting spam_for_term(const Hamiltonian& h, int term_index) {
  const PauliString& target = h.term(term_index).word;
  const int n = h.qubit_count();
  const std::vector<int> support = target.support();

  // First single-qubit probe by site, then by letter X < Y < Z, that fails
  // to commute with the target.
  PauliString probe(n);
  bool found = false;
  for (int q : support) {
    for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
      const PauliString candidate = PauliString::single_site(n, q, p);
      if (!candidate.commutes_with(target)) {
        probe = candidate;
        found = true;
        break;
      }
    }
    if (found) break;
  }
  if (!found) throw std::logic_error("no anticommuting probe found");

  // i [P_i, P'] / 2 is a signed Pauli word; half polarization normalizes
  // Tr(i [P_i, P'] rho0) to one.
  const OperatorSum comm = commutator(target, probe);
  const auto& [word, coeff] = *comm.terms().begin();
  const double sign = (std::complex<double>(0.0, 1.0) * coeff / 2.0).real();

  SpamSetting setting{term_index, probe, ProductState::Block{support, word, 0.5 * sign},
                      {}, ProductState(n)};

  std::set<int> moat;
  for (int j = 0; j < h.term_count(); ++j) {
    if (j == term_index) continue;
    const PauliString& other = h.term(j).word;
    bool overlap = false;
    for (int q : other.support()) {
      if (std::binary_search(support.begin(), support.end(), q)) overlap = true;
    }
    if (!overlap) continue;
    for (int q : other.support()) {
      if (!std::binary_search(support.begin(), support.end(), q)) moat.insert(q);
    }
  }
  setting.moat.assign(moat.begin(), moat.end());
  setting.rho0.add_block(setting.block.sites, setting.block.word,
                         setting.block.coeff);
  return setting;
}

double estimate_derivative(const QuantumOracle& oracle,
                           const ProductState& rho0, const PauliString& probe,
                           const LearnPlan& plan, const LearnerOptions& options,
                           std::initializer_list<std::uint64_t> stream) {
  const std::vector<DerivativeDataset> datasets =
      oracle.build_dataset(rho0, {probe}, plan, options.noiseless, stream);
  return fit_and_differentiate(datasets.front(), options.constrained_fit);
}

namespace {

LearnReport assemble_report(const QuantumOracle& oracle, const LearnPlan& plan,
                            const LearnerOptions& options,
                            const std::string& protocol,
                            const std::vector<std::vector<int>>& partitions) {
  const Hamiltonian& h = oracle.hamiltonian();
  LearnReport report;
  report.protocol = protocol;
  report.plan = plan;
  report.partition_count = static_cast<int>(partitions.size());
  report.seed = oracle.seed();
  report.terms.resize(h.term_count());
  for (int t = 0; t < h.term_count(); ++t) {
    TermReport& tr = report.terms[t];
    tr.term_index = t;
    tr.pauli = h.term(t).word.str();
    if (options.record_truth) tr.theta_true = h.term(t).coeff;
  }
  return report;
}

}  // namespace

LearnReport naive_infer(const QuantumOracle& oracle, const LearnPlan& plan,
                        const LearnerOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const Hamiltonian& h = oracle.hamiltonian();
  const int r = h.term_count();

  std::vector<std::vector<int>> partitions;
  for (int i = 0; i < r; ++i) partitions.push_back({i});
  LearnReport report =
      assemble_report(oracle, plan, options, "naive", partitions);

  long long queries = 0;
  for (int i = 0; i < r; ++i) {
    const SpamSetting setting = spam_for_term(h, i);
    const PartitionRun run =
        run_partition(oracle, setting.rho0, {setting.probe}, plan, options,
                      static_cast<std::uint64_t>(i));
    queries += run.queries;
    TermReport& tr = report.terms[i];
    tr.replicates = run.replicate_estimates[0];
    tr.theta_hat = median(tr.replicates);
  }
  report.total_queries = queries;
  if (options.record_truth) {
    double worst = 0.0;
    for (const auto& tr : report.terms) {
      worst = std::max(worst, std::abs(tr.theta_hat - *tr.theta_true));
    }
    report.max_abs_error = worst;
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

LearnReport partition_infer(const QuantumOracle& oracle, const LearnPlan& plan,
                            const LearnerOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const Hamiltonian& h = oracle.hamiltonian();
  const int n = h.qubit_count();

  const InteractionGraph graph = InteractionGraph::build(h);
  const InteractionGraph squared = graph.squared();
  const Coloring coloring = greedy_color(squared, options.ordering);
  if (!is_valid_coloring(squared, coloring)) {
    throw std::logic_error("invalid coloring of the squared graph");
  }

  LearnReport report = assemble_report(oracle, plan, options, "partition",
                                       coloring.partitions);

  long long queries = 0;
  for (const auto& partition : coloring.partitions) {
    ProductState rho0(n);
    std::vector<PauliString> probes;
    std::vector<SpamSetting> settings;
    for (int t : partition) {
      settings.push_back(spam_for_term(h, t));
      const SpamSetting& s = settings.back();
      rho0.add_block(s.block.sites, s.block.word, s.block.coeff);
      probes.push_back(s.probe);
    }
    const std::uint64_t key = static_cast<std::uint64_t>(
        *std::min_element(partition.begin(), partition.end()));
    const PartitionRun run =
        run_partition(oracle, rho0, probes, plan, options, key);
    queries += run.queries;
    for (std::size_t j = 0; j < partition.size(); ++j) {
      TermReport& tr = report.terms[partition[j]];
      tr.replicates = run.replicate_estimates[j];
      tr.theta_hat = median(tr.replicates);
    }
  }
  report.total_queries = queries;
  if (options.record_truth) {
    double worst = 0.0;
    for (const auto& tr : report.terms) {
      worst = std::max(worst, std::abs(tr.theta_hat - *tr.theta_true));
    }
    report.max_abs_error = worst;
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

LearnReport gibbs_infer(const QuantumOracle& oracle, const LearnPlan& plan,
                        const LearnerOptions& options) {
  if (oracle.kind() != OracleKind::kGibbs) {
    throw std::invalid_argument("gibbs_infer needs a Gibbs oracle");
  }
  const auto start = std::chrono::steady_clock::now();
  const Hamiltonian& h = oracle.hamiltonian();
  const int n = h.qubit_count();

  // Terms of one color have disjoint supports, so the terms themselves are
  // measured simultaneously; the squared graph is not needed here.
  const InteractionGraph graph = InteractionGraph::build(h);
  const Coloring coloring = greedy_color(graph, options.ordering);
  if (!is_valid_coloring(graph, coloring)) {
    throw std::logic_error("invalid coloring of the interaction graph");
  }

  LearnReport report = assemble_report(oracle, plan, options, "gibbs",
                                       coloring.partitions);

  const ProductState unused = ProductState::maximally_mixed(n);
  long long queries = 0;
  for (const auto& partition : coloring.partitions) {
    std::vector<PauliString> observables;
    for (int t : partition) observables.push_back(h.term(t).word);
    const std::uint64_t key = static_cast<std::uint64_t>(
        *std::min_element(partition.begin(), partition.end()));
    const PartitionRun run =
        run_partition(oracle, unused, observables, plan, options, key);
    queries += run.queries;
    for (std::size_t j = 0; j < partition.size(); ++j) {
      TermReport& tr = report.terms[partition[j]];
      tr.replicates.clear();
      for (double c1 : run.replicate_estimates[j]) tr.replicates.push_back(-c1);
      tr.theta_hat = median(tr.replicates);
    }
  }
  report.total_queries = queries;
  if (options.record_truth) {
    double worst = 0.0;
    for (const auto& tr : report.terms) {
      worst = std::max(worst, std::abs(tr.theta_hat - *tr.theta_true));
    }
    report.max_abs_error = worst;
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

}  // namespace hamlearn
