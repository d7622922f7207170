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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hamlearn/bounds.hpp"
#include "hamlearn/graph.hpp"
#include "hamlearn/json_io.hpp"
#include "hamlearn/learner.hpp"
#include "hamlearn/oracle.hpp"

namespace {

using nlohmann::json;
using namespace hamlearn;

constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitOracle = 4;

struct ExperimentConfig {
  std::string hamiltonian_file;
  int tfim_n = 0;  // > 0 selects the TFIM ensemble
  std::string mode = "unitary";
  double epsilon = 0.1;
  double delta = 0.15;
  int trials = 1;
  std::uint64_t seed = 1;
  bool opt_avg_degree = false;
  bool opt_alloc = true;
  bool opt_constrained = true;
  bool noise = true;
  double theta_inf_override = 0.0;  // 0 = use the instance norm
  std::string out_dir = "out";
  int workers = 0;  // 0 = hardware concurrency
  std::string ordering = "degree";
  std::string protocol = "partition";  // or "naive" (unitary modes only)
};

void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& err) {
    throw std::invalid_argument("config parse error: " + std::string(err.what()));
  }
  if (doc.contains("hamiltonian")) {
    const auto& src = doc["hamiltonian"];
    if (src.contains("file")) cfg.hamiltonian_file = src["file"].get<std::string>();
    if (src.contains("tfim_n")) cfg.tfim_n = src["tfim_n"].get<int>();
  }
  if (doc.contains("mode")) cfg.mode = doc["mode"].get<std::string>();
  if (doc.contains("epsilon")) cfg.epsilon = doc["epsilon"].get<double>();
  if (doc.contains("delta")) cfg.delta = doc["delta"].get<double>();
  if (doc.contains("trials")) cfg.trials = doc["trials"].get<int>();
  if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
  if (doc.contains("noise")) cfg.noise = doc["noise"].get<bool>();
  if (doc.contains("out")) cfg.out_dir = doc["out"].get<std::string>();
  if (doc.contains("theta_inf")) {
    cfg.theta_inf_override = doc["theta_inf"].get<double>();
  }
  if (doc.contains("workers")) cfg.workers = doc["workers"].get<int>();
  if (doc.contains("ordering")) cfg.ordering = doc["ordering"].get<std::string>();
  if (doc.contains("protocol")) cfg.protocol = doc["protocol"].get<std::string>();
  if (doc.contains("optimizations")) {
    const auto& opt = doc["optimizations"];
    if (opt.contains("avg_degree")) cfg.opt_avg_degree = opt["avg_degree"].get<bool>();
    if (opt.contains("shot_allocation")) {
      cfg.opt_alloc = opt["shot_allocation"].get<bool>();
    }
    if (opt.contains("constrained_fit")) {
      cfg.opt_constrained = opt["constrained_fit"].get<bool>();
    }
  }
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.epsilon <= 0.0) throw std::invalid_argument("epsilon must be > 0");
  if (cfg.delta <= 0.0 || cfg.delta >= 1.0) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
  if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (cfg.hamiltonian_file.empty() == (cfg.tfim_n == 0)) {
    throw std::invalid_argument(
        "exactly one Hamiltonian source is needed (--ham or --tfim)");
  }
  if (cfg.ordering != "degree" && cfg.ordering != "natural") {
    throw std::invalid_argument("ordering must be 'degree' or 'natural'");
  }
  if (cfg.protocol != "partition" && cfg.protocol != "naive") {
    throw std::invalid_argument("protocol must be 'partition' or 'naive'");
  }
  mode_from_name(cfg.mode);  // throws on unknown names
}

Hamiltonian instance_for_trial(const ExperimentConfig& cfg, int trial) {
  if (cfg.tfim_n > 0) {
    return random_tfim(cfg.tfim_n, cfg.seed + static_cast<std::uint64_t>(trial));
  }
  // File instances stay fixed across trials unless the file itself declares
  // an ensemble, which is re-drawn with a per-trial seed offset.
  return load_hamiltonian(cfg.hamiltonian_file,
                          static_cast<std::uint64_t>(trial));
}

VertexOrdering ordering_for(const ExperimentConfig& cfg) {
  return cfg.ordering == "natural" ? VertexOrdering::kNaturalIndex
                                   : VertexOrdering::kDegreeDescending;
}

Scales scales_for(const ExperimentConfig& cfg, const Hamiltonian& h) {
  const Mode mode = mode_from_name(cfg.mode);
  if (mode == Mode::kCommutingUnitary) {
    for (int i = 0; i < h.term_count(); ++i) {
      for (int j = i + 1; j < h.term_count(); ++j) {
        if (!h.term(i).word.commutes_with(h.term(j).word)) {
          throw std::invalid_argument(
              "commuting mode requires pairwise commuting terms; '" +
              h.term(i).word.str() + "' and '" + h.term(j).word.str() +
              "' do not commute");
        }
      }
    }
  }
  const InteractionGraph graph = InteractionGraph::build(h);
  const double degree = cfg.opt_avg_degree
                            ? graph.average_degree()
                            : static_cast<double>(graph.max_degree());
  const double theta = cfg.theta_inf_override > 0.0 ? cfg.theta_inf_override
                                                    : h.theta_inf_norm();
  return Scales::make(mode, degree, theta);
}

LearnPlan plan_for(const ExperimentConfig& cfg, const Hamiltonian& h) {
  PlanOptions options;
  options.shot_allocation = cfg.opt_alloc;
  LearnPlan plan = plan_for_coefficient_error(cfg.epsilon, cfg.delta,
                                              scales_for(cfg, h), options);
  plan.used_average_degree = cfg.opt_avg_degree;
  return plan;
}

void ensure_out_dir(const ExperimentConfig& cfg) {
  std::filesystem::create_directories(cfg.out_dir);
}

std::string path_in_out(const ExperimentConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

int cmd_graph(const ExperimentConfig& cfg) {
  const Hamiltonian h = instance_for_trial(cfg, 0);
  const InteractionGraph g = InteractionGraph::build(h);
  const InteractionGraph g2 = g.squared();
  const Coloring coloring = greedy_color(g2, ordering_for(cfg));

  ensure_out_dir(cfg);
  write_text_file(path_in_out(cfg, "graph.json"), graph_to_json(g).dump(2) + "\n");
  write_text_file(path_in_out(cfg, "graph_squared.json"),
                  graph_to_json(g2).dump(2) + "\n");
  write_text_file(path_in_out(cfg, "coloring.json"),
                  coloring_to_json(coloring).dump(2) + "\n");

  const json stats = {{"terms", h.term_count()},
                      {"qubits", h.qubit_count()},
                      {"max_degree", g.max_degree()},
                      {"average_degree", g.average_degree()},
                      {"squared_max_degree", g2.max_degree()},
                      {"colors", coloring.color_count()}};
  std::cout << stats.dump(2) << "\n";
  return 0;
}

int cmd_plan(const ExperimentConfig& cfg) {
  const Hamiltonian h = instance_for_trial(cfg, 0);
  const Scales scales = scales_for(cfg, h);
  const LearnPlan plan = plan_for(cfg, h);

  ensure_out_dir(cfg);
  json plan_doc = plan_to_json(plan);
  const ErrorBound split =
      error_bound(plan.window, plan.node_count,
                  1.0 / static_cast<double>(plan.shots_per_node), scales);
  plan_doc["error_split"] = {{"noise_term", split.noise_term},
                             {"bias_sq_term", split.bias_sq_term}};
  write_text_file(path_in_out(cfg, "plan.json"), plan_doc.dump(2) + "\n");

  // Epsilon sweep table mirroring the hyperparameter-settings curves.
  std::ostringstream sweep;
  sweep << "epsilon,A_over_tau,L,N,K,NL\n";
  sweep.precision(12);
  for (int i = 0; i <= 12; ++i) {
    const double eps =
        std::pow(10.0, -1.0 - 2.0 * static_cast<double>(i) / 12.0);
    try {
      PlanOptions options;
      options.shot_allocation = false;
      const LearnPlan p =
          plan_for_coefficient_error(eps, cfg.delta, scales, options);
      sweep << eps << ',' << p.window * scales.gamma << ',' << p.node_count
            << ',' << p.shots_per_node << ',' << p.group_count << ','
            << static_cast<double>(p.shots_per_node) * p.node_count << "\n";
    } catch (const InfeasiblePlanError&) {
      sweep << eps << ",,,,,\n";
    }
  }
  write_text_file(path_in_out(cfg, "plan_sweep.csv"), sweep.str());

  std::cout << plan_doc.dump(2) << "\n";
  return 0;
}

int cmd_bounds(const ExperimentConfig& cfg) {
  const Hamiltonian h = instance_for_trial(cfg, 0);
  const Scales scales = scales_for(cfg, h);
  ensure_out_dir(cfg);
  std::ostringstream out;
  out << "A_over_tau,L,noise_term,bias_sq_term\n";
  out.precision(12);
  for (int L : {2, 3, 4, 6, 8, 12, 16}) {
    for (int i = 0; i <= 60; ++i) {
      const double x = 1e-3 * std::pow(4.0 / 1e-3, i / 60.0);
      const ErrorBound b = error_bound(x * scales.tau, L, 1.0, scales);
      out << x << ',' << L << ',' << b.noise_term << ',' << b.bias_sq_term
          << "\n";
    }
  }
  write_text_file(path_in_out(cfg, "bounds.csv"), out.str());
  std::cout << "wrote " << path_in_out(cfg, "bounds.csv") << "\n";
  return 0;
}

double percentile(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  const double pos = q * (static_cast<double>(values.size()) - 1.0);
  const auto lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] * (1.0 - frac) + values[hi] * frac;
}

int cmd_learn(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  ensure_out_dir(cfg);
  const Mode mode = mode_from_name(cfg.mode);
  const OracleKind kind =
      mode == Mode::kGibbs ? OracleKind::kGibbs : OracleKind::kUnitary;

  std::vector<json> trial_docs(cfg.trials);
  std::vector<double> max_errors(cfg.trials, 0.0);
  std::vector<double> theta_norms(cfg.trials, 0.0);
  std::vector<long long> queries(cfg.trials, 0);
  std::mutex failure_mutex;
  std::optional<std::pair<int, std::string>> first_failure;

  const int worker_count =
      cfg.workers > 0
          ? cfg.workers
          : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::atomic<int> next_trial{0};
  auto work = [&]() {
    for (;;) {
      const int trial = next_trial.fetch_add(1);
      if (trial >= cfg.trials) return;
      try {
        const Hamiltonian h = instance_for_trial(cfg, trial);
        const LearnPlan plan = plan_for(cfg, h);
        const QuantumOracle oracle(
            h, kind, cfg.seed + static_cast<std::uint64_t>(trial));
        LearnerOptions options;
        options.constrained_fit = cfg.opt_constrained;
        options.noiseless = !cfg.noise;
        options.ordering = ordering_for(cfg);
        const LearnReport report =
            mode == Mode::kGibbs ? gibbs_infer(oracle, plan, options)
            : cfg.protocol == "naive"
                ? naive_infer(oracle, plan, options)
                : partition_infer(oracle, plan, options);
        trial_docs[trial] = report_to_json(report);
        // Keep output files byte-identical across reruns of the same seed.
        trial_docs[trial].erase("wall_seconds");
        max_errors[trial] = report.max_abs_error.value_or(0.0);
        theta_norms[trial] = h.theta_inf_norm();
        queries[trial] = report.total_queries;
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!first_failure) {
          try {
            throw;
          } catch (const std::exception& err) {
            first_failure = {trial, err.what()};
          }
        }
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < worker_count; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (first_failure) {
    throw OracleError("trial " + std::to_string(first_failure->first) +
                      " failed: " + first_failure->second);
  }

  std::ostringstream csv;
  csv << "trial,term,pauli,theta_true,theta_hat,abs_error\n";
  csv.precision(17);
  int failures = 0;
  for (int trial = 0; trial < cfg.trials; ++trial) {
    char name[32];
    std::snprintf(name, sizeof(name), "trial_%03d.json", trial);
    write_text_file(path_in_out(cfg, name), trial_docs[trial].dump(2) + "\n");
    if (max_errors[trial] > cfg.epsilon * theta_norms[trial]) ++failures;
    for (const auto& term : trial_docs[trial]["terms"]) {
      const double truth = term.value("theta_true", 0.0);
      const double hat = term["theta_hat"].get<double>();
      csv << trial << ',' << term["index"].get<int>() << ','
          << term["pauli"].get<std::string>() << ',' << truth << ',' << hat
          << ',' << std::abs(hat - truth) << "\n";
    }
  }
  write_text_file(path_in_out(cfg, "report.csv"), csv.str());

  const json summary = {
      {"trials", cfg.trials},
      {"mode", cfg.mode},
      {"epsilon", cfg.epsilon},
      {"delta", cfg.delta},
      {"seed", cfg.seed},
      {"noise", cfg.noise},
      {"failure_fraction",
       static_cast<double>(failures) / static_cast<double>(cfg.trials)},
      {"max_abs_error_percentiles",
       {{"p01", percentile(max_errors, 0.01)},
        {"p16", percentile(max_errors, 0.16)},
        {"p50", percentile(max_errors, 0.50)},
        {"p84", percentile(max_errors, 0.84)},
        {"p99", percentile(max_errors, 0.99)}}},
      {"total_queries", queries},
  };
  write_text_file(path_in_out(cfg, "summary.json"), summary.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";
  std::cerr << cfg.trials << " trials in "
            << std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             start)
                   .count()
            << " s\n";
  return 0;
}

void merge_flags(const CLI::App& app, const ExperimentConfig& flags,
                 ExperimentConfig& cfg) {
  if (app.count("--ham")) cfg.hamiltonian_file = flags.hamiltonian_file;
  if (app.count("--tfim")) cfg.tfim_n = flags.tfim_n;
  if (app.count("--mode")) cfg.mode = flags.mode;
  if (app.count("--epsilon")) cfg.epsilon = flags.epsilon;
  if (app.count("--delta")) cfg.delta = flags.delta;
  if (app.count("--trials")) cfg.trials = flags.trials;
  if (app.count("--seed")) cfg.seed = flags.seed;
  if (app.count("--opt-avg-degree") || app.count("--no-opt-avg-degree")) {
    cfg.opt_avg_degree = flags.opt_avg_degree;
  }
  if (app.count("--opt-alloc") || app.count("--no-opt-alloc")) {
    cfg.opt_alloc = flags.opt_alloc;
  }
  if (app.count("--opt-constrained") || app.count("--no-opt-constrained")) {
    cfg.opt_constrained = flags.opt_constrained;
  }
  if (app.count("--no-noise")) cfg.noise = flags.noise;
  if (app.count("--theta-inf")) cfg.theta_inf_override = flags.theta_inf_override;
  if (app.count("--out")) cfg.out_dir = flags.out_dir;
  if (app.count("--workers")) cfg.workers = flags.workers;
  if (app.count("--ordering")) cfg.ordering = flags.ordering;
  if (app.count("--protocol")) cfg.protocol = flags.protocol;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Black-box Hamiltonian learning from unitary dynamics or "
               "Gibbs states, with an exact desk-scale oracle"};
  app.require_subcommand(1);

  ExperimentConfig flags;
  std::string config_path;

  app.add_option("--config", config_path, "JSON config file (flags override)");
  app.add_option("--ham", flags.hamiltonian_file, "Hamiltonian spec JSON file");
  app.add_option("--tfim", flags.tfim_n, "TFIM ensemble on this many qubits");
  app.add_option("--mode", flags.mode, "unitary | gibbs | commuting");
  app.add_option("--epsilon", flags.epsilon,
                 "target coefficient error in units of |Theta|_inf");
  app.add_option("--delta", flags.delta, "failure probability budget");
  app.add_option("--trials", flags.trials, "number of seeded trials");
  app.add_option("--seed", flags.seed, "root RNG seed");
  app.add_flag("--opt-avg-degree,!--no-opt-avg-degree", flags.opt_avg_degree,
               "plan with the average interaction degree");
  app.add_flag("--opt-alloc,!--no-opt-alloc", flags.opt_alloc,
               "per-node shot allocation");
  app.add_flag("--opt-constrained,!--no-opt-constrained", flags.opt_constrained,
               "fit with the f(0) = 0 constraint");
  app.add_flag("!--no-noise", flags.noise, "disable shot noise");
  app.add_option("--theta-inf", flags.theta_inf_override,
                 "override |Theta|_inf used for planning");
  app.add_option("--out", flags.out_dir, "output directory");
  app.add_option("--workers", flags.workers, "worker threads for trials");
  app.add_option("--ordering", flags.ordering,
                 "coloring vertex order: degree | natural");
  app.add_option("--protocol", flags.protocol,
                 "unitary learner: partition | naive");

  auto* graph_cmd =
      app.add_subcommand("graph", "dump interaction graphs and a coloring");
  auto* plan_cmd =
      app.add_subcommand("plan", "derive hyperparameters from the bounds");
  auto* learn_cmd = app.add_subcommand("learn", "run learning trials");
  auto* bounds_cmd = app.add_subcommand("bounds", "dump error-bound curves");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    ExperimentConfig cfg;
    if (!config_path.empty()) apply_config_file(cfg, config_path);
    merge_flags(app, flags, cfg);
    validate(cfg);

    if (graph_cmd->parsed()) return cmd_graph(cfg);
    if (plan_cmd->parsed()) return cmd_plan(cfg);
    if (bounds_cmd->parsed()) return cmd_bounds(cfg);
    if (learn_cmd->parsed()) return cmd_learn(cfg);
    throw std::invalid_argument("no subcommand");
  } catch (const InfeasiblePlanError& err) {
    std::cerr << "infeasible plan: " << err.what() << "\n";
    return kExitInfeasible;
  } catch (const OracleError& err) {
    std::cerr << "oracle failure: " << err.what() << "\n";
    return kExitOracle;
  } catch (const std::invalid_argument& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}
