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

#include "hamlearn/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "hamlearn/rng.hpp"

namespace hamlearn {

namespace {

Hamiltonian hamiltonian_from_ensemble(const nlohmann::json& spec,
                                      std::uint64_t seed_offset) {
  const std::string family = spec.value("family", "");
  if (family != "tfim") {
    throw std::invalid_argument("unknown ensemble family '" + family + "'");
  }
  const std::string dist = spec.value("dist", "unif(-1,1)");
  if (dist != "unif(-1,1)") {
    throw std::invalid_argument("unsupported ensemble dist '" + dist + "'");
  }
  if (!spec.contains("n")) throw std::invalid_argument("ensemble needs n");
  const int n = spec["n"].get<int>();
  const std::uint64_t seed = spec.value("seed", std::uint64_t{0}) + seed_offset;
  return random_tfim(n, seed);
}

}  // namespace

Hamiltonian random_tfim(int qubit_count, std::uint64_t seed) {
  if (qubit_count < 2) throw std::invalid_argument("tfim needs n >= 2");
  RandomSource rng(derive_stream(seed, {0x7f1a9eULL}));
  std::vector<double> couplings(qubit_count - 1);
  std::vector<double> fields(qubit_count);
  for (auto& j : couplings) j = rng.uniform(-1.0, 1.0);
  for (auto& b : fields) b = rng.uniform(-1.0, 1.0);
  return Hamiltonian::tfim(couplings, fields);
}

Hamiltonian hamiltonian_from_json(const nlohmann::json& doc,
                                  std::uint64_t seed_offset) {
  if (doc.contains("ensemble")) {
    return hamiltonian_from_ensemble(doc["ensemble"], seed_offset);
  }
  if (!doc.contains("n") || !doc.contains("terms")) {
    throw std::invalid_argument("Hamiltonian spec needs 'n' and 'terms'");
  }
  const int n = doc["n"].get<int>();
  std::vector<HamiltonianTerm> terms;
  for (const auto& item : doc["terms"]) {
    if (!item.contains("pauli") || !item.contains("coeff")) {
      throw std::invalid_argument("term needs 'pauli' and 'coeff'");
    }
    HamiltonianTerm term;
    term.word = PauliString::parse(item["pauli"].get<std::string>(), n);
    term.coeff = item["coeff"].get<double>();
    terms.push_back(std::move(term));
  }
  return Hamiltonian(n, std::move(terms));
}

Hamiltonian load_hamiltonian(const std::string& path,
                             std::uint64_t seed_offset) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& err) {
    throw std::invalid_argument("parse error in '" + path + "': " + err.what());
  }
  return hamiltonian_from_json(doc, seed_offset);
}

nlohmann::json hamiltonian_to_json(const Hamiltonian& h) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& term : h.terms()) {
    terms.push_back({{"pauli", term.word.str()}, {"coeff", term.coeff}});
  }
  return {{"n", h.qubit_count()}, {"terms", terms}};
}

nlohmann::json graph_to_json(const InteractionGraph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [u, v] : g.edges()) {
    edges.push_back({u + 1, v + 1});
  }
  return {{"vertices", g.vertex_count()},
          {"edges", edges},
          {"max_degree", g.max_degree()},
          {"average_degree", g.average_degree()}};
}

nlohmann::json coloring_to_json(const Coloring& coloring) {
  nlohmann::json out = nlohmann::json::object();
  for (std::size_t c = 0; c < coloring.partitions.size(); ++c) {
    nlohmann::json members = nlohmann::json::array();
    for (int v : coloring.partitions[c]) members.push_back(v + 1);
    out[std::to_string(c)] = members;
  }
  return out;
}

nlohmann::json plan_to_json(const LearnPlan& plan) {
  return {{"mode", mode_name(plan.mode)},
          {"A", plan.window},
          {"L", plan.node_count},
          {"N", plan.shots_per_node},
          {"K", plan.group_count},
          {"allocation", plan.allocation},
          {"gamma", plan.gamma},
          {"tau", plan.tau},
          {"degree_used", plan.degree_used},
          {"theta_inf", plan.theta_inf},
          {"epsilon_relative", plan.epsilon_rel},
          {"delta", plan.delta},
          {"predicted_bias_relative", plan.predicted_bias_rel},
          {"predicted_noise_relative", plan.predicted_noise_rel},
          {"used_average_degree", plan.used_average_degree}};
}

nlohmann::json report_to_json(const LearnReport& report) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& tr : report.terms) {
    nlohmann::json item = {{"index", tr.term_index + 1},
                           {"pauli", tr.pauli},
                           {"theta_hat", tr.theta_hat},
                           {"replicates", tr.replicates}};
    if (tr.theta_true.has_value()) item["theta_true"] = *tr.theta_true;
    terms.push_back(std::move(item));
  }
  nlohmann::json out = {{"protocol", report.protocol},
                        {"plan", plan_to_json(report.plan)},
                        {"terms", terms},
                        {"partitions", report.partition_count},
                        {"total_queries", report.total_queries},
                        {"wall_seconds", report.wall_seconds},
                        {"seed", report.seed}};
  if (report.max_abs_error.has_value()) {
    out["max_abs_error"] = *report.max_abs_error;
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp + "'");
    out << contents;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw std::runtime_error("cannot rename '" + tmp + "' to '" + path + "'");
  }
}

}  // namespace hamlearn
