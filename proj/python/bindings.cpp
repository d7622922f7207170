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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hamlearn/bounds.hpp"
#include "hamlearn/chebyshev.hpp"
#include "hamlearn/graph.hpp"
#include "hamlearn/json_io.hpp"
#include "hamlearn/learner.hpp"
#include "hamlearn/oracle.hpp"

namespace py = pybind11;
using namespace hamlearn;

namespace {

py::object json_to_py(const nlohmann::json& doc) {
  return py::module_::import("json").attr("loads")(doc.dump());
}

LearnerOptions make_options(bool noiseless, bool constrained, bool natural_order) {
  LearnerOptions options;
  options.noiseless = noiseless;
  options.constrained_fit = constrained;
  options.ordering = natural_order ? VertexOrdering::kNaturalIndex
                                   : VertexOrdering::kDegreeDescending;
  return options;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Black-box Hamiltonian learning: Pauli algebra, Chebyshev "
            "derivative estimation, measurement parallelization, bound-driven "
            "planning, and exact desk-scale oracles";

  py::class_<PauliString>(m, "PauliString")
      .def(py::init([](const std::string& text, int n) {
             return PauliString::parse(text, n);
           }),
           py::arg("text"), py::arg("n"))
      .def_property_readonly("n", &PauliString::qubit_count)
      .def("support", &PauliString::support)
      .def("is_identity", &PauliString::is_identity)
      .def("commutes_with", &PauliString::commutes_with)
      .def("__str__", &PauliString::str)
      .def("__repr__",
           [](const PauliString& p) { return "PauliString('" + p.str() + "')"; })
      .def("__eq__", [](const PauliString& a, const PauliString& b) {
        return a == b;
      });

  py::class_<Hamiltonian>(m, "Hamiltonian")
      .def_static(
          "from_json",
          [](const std::string& text) {
            return hamiltonian_from_json(nlohmann::json::parse(text));
          },
          py::arg("text"))
      .def_static(
          "from_terms",
          [](int n, const std::vector<std::pair<std::string, double>>& terms) {
            std::vector<HamiltonianTerm> parsed;
            for (const auto& [pauli, coeff] : terms) {
              parsed.push_back({PauliString::parse(pauli, n), coeff});
            }
            return Hamiltonian(n, std::move(parsed));
          },
          py::arg("n"), py::arg("terms"))
      .def_static("tfim_random", &random_tfim, py::arg("n"), py::arg("seed"))
      .def_property_readonly("n", &Hamiltonian::qubit_count)
      .def_property_readonly("r", &Hamiltonian::term_count)
      .def("theta_inf", &Hamiltonian::theta_inf_norm)
      .def("terms",
           [](const Hamiltonian& h) {
             std::vector<std::pair<std::string, double>> out;
             for (const auto& term : h.terms()) {
               out.emplace_back(term.word.str(), term.coeff);
             }
             return out;
           })
      .def("to_json", [](const Hamiltonian& h) {
        return json_to_py(hamiltonian_to_json(h));
      });

  py::class_<InteractionGraph>(m, "InteractionGraph")
      .def_static("build", &InteractionGraph::build, py::arg("hamiltonian"))
      .def("squared", &InteractionGraph::squared)
      .def_property_readonly("vertices", &InteractionGraph::vertex_count)
      .def("edges", &InteractionGraph::edges)
      .def("max_degree", &InteractionGraph::max_degree)
      .def("average_degree", &InteractionGraph::average_degree);

  py::class_<Coloring>(m, "Coloring")
      .def_readonly("color_of", &Coloring::color_of)
      .def_readonly("partitions", &Coloring::partitions)
      .def_property_readonly("colors", &Coloring::color_count);

  m.def(
      "greedy_color",
      [](const InteractionGraph& g, bool natural_order) {
        return greedy_color(g, natural_order ? VertexOrdering::kNaturalIndex
                                             : VertexOrdering::kDegreeDescending);
      },
      py::arg("graph"), py::arg("natural_order") = false);
  m.def("is_valid_coloring", &is_valid_coloring);

  m.def("cheb_roots", &cheb_roots, py::arg("node_count"));
  m.def("cheb_eval", &cheb_eval, py::arg("degree"), py::arg("z"));

  py::class_<ChebFit>(m, "ChebFit")
      .def_readonly("window", &ChebFit::window)
      .def_readonly("coeffs", &ChebFit::coeffs)
      .def("eval_z", &ChebFit::eval_z)
      .def("eval_abscissa", &ChebFit::eval_abscissa)
      .def("derivative_at_zero",
           [](const ChebFit& fit) { return derivative_at_zero(fit); });

  m.def("interp_coeffs", &interp_coeffs, py::arg("ys"), py::arg("window"));
  m.def(
      "constrained_fit",
      [](const std::vector<double>& ys, double window,
         const std::vector<double>& variances) {
        DerivativeDataset dataset;
        dataset.window = window;
        const auto roots = cheb_roots(static_cast<int>(ys.size()));
        for (std::size_t i = 0; i < ys.size(); ++i) {
          DatasetEntry entry;
          entry.index = static_cast<int>(i) + 1;
          entry.z = roots[i];
          entry.abscissa = window / 2.0 * (1.0 + roots[i]);
          entry.mean = ys[i];
          entry.variance = variances.empty() ? 0.0 : variances.at(i);
          dataset.entries.push_back(entry);
        }
        return constrained_fit(dataset);
      },
      py::arg("ys"), py::arg("window"),
      py::arg("variances") = std::vector<double>{});

  py::class_<Scales>(m, "Scales")
      .def_static(
          "make",
          [](const std::string& mode, double degree, double theta_inf) {
            return Scales::make(mode_from_name(mode), degree, theta_inf);
          },
          py::arg("mode"), py::arg("degree"), py::arg("theta_inf"))
      .def_readonly("gamma", &Scales::gamma)
      .def_readonly("tau", &Scales::tau);

  m.def(
      "commutator_norm_bound",
      [](int order, const Scales& scales) {
        return commutator_norm_bound(order, scales);
      },
      py::arg("order"), py::arg("scales"));
  m.def("count_bound", &count_bound, py::arg("size"), py::arg("children"));
  m.def(
      "error_bound",
      [](double window, int node_count, double sigma2, const Scales& scales) {
        const ErrorBound b = error_bound(window, node_count, sigma2, scales);
        return py::make_tuple(b.noise_term, b.bias_sq_term);
      },
      py::arg("window"), py::arg("node_count"), py::arg("sigma2"),
      py::arg("scales"));
  m.def("allocate_shots", &allocate_shots, py::arg("node_count"),
        py::arg("n_max"));

  py::class_<LearnPlan>(m, "LearnPlan")
      .def_readonly("window", &LearnPlan::window)
      .def_readonly("node_count", &LearnPlan::node_count)
      .def_readonly("shots_per_node", &LearnPlan::shots_per_node)
      .def_readonly("group_count", &LearnPlan::group_count)
      .def_readonly("allocation", &LearnPlan::allocation)
      .def_readonly("gamma", &LearnPlan::gamma)
      .def_readonly("tau", &LearnPlan::tau)
      .def_readonly("predicted_bias_rel", &LearnPlan::predicted_bias_rel)
      .def("to_json", [](const LearnPlan& plan) {
        return json_to_py(plan_to_json(plan));
      });

  m.def(
      "plan",
      [](double epsilon, double delta, const Scales& scales,
         bool shot_allocation, bool relative) {
        PlanOptions options;
        options.shot_allocation = shot_allocation;
        return relative ? plan(epsilon, delta, scales, options)
                        : plan_for_coefficient_error(epsilon, delta, scales,
                                                     options);
      },
      py::arg("epsilon"), py::arg("delta"), py::arg("scales"),
      py::arg("shot_allocation") = true,
      py::arg("relative") = false,
      "Hyperparameters (A, L, N, K) minimizing the N*L bound; epsilon is a "
      "coefficient error in |Theta|_inf units unless relative=True");

  py::class_<ProductState>(m, "ProductState")
      .def(py::init<int>(), py::arg("n"))
      .def_static("maximally_mixed", &ProductState::maximally_mixed)
      .def_static("single_site",
                  [](int n, int site, const std::string& letter, double sign) {
                    Pauli p;
                    switch (letter.empty() ? 'I' : letter[0]) {
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
                        throw std::invalid_argument("letter must be X, Y or Z");
                    }
                    return ProductState::single_site(n, site, p, sign);
                  },
                  py::arg("n"), py::arg("site"), py::arg("letter"),
                  py::arg("sign") = 1.0)
      .def("add_block",
           [](ProductState& state, const std::vector<int>& sites,
              const PauliString& word, double coeff) {
             state.add_block(sites, word, coeff);
           })
      .def("pauli_expectation", &ProductState::pauli_expectation);

  py::class_<QuantumOracle>(m, "QuantumOracle")
      .def(py::init([](const Hamiltonian& h, const std::string& kind,
                       std::uint64_t seed) {
             if (kind != "unitary" && kind != "gibbs") {
               throw std::invalid_argument("kind must be 'unitary' or 'gibbs'");
             }
             return QuantumOracle(
                 h, kind == "gibbs" ? OracleKind::kGibbs : OracleKind::kUnitary,
                 seed);
           }),
           py::arg("hamiltonian"), py::arg("kind"), py::arg("seed"))
      .def("exact_expectation", &QuantumOracle::exact_expectation,
           py::arg("rho0"), py::arg("observable"), py::arg("x"))
      .def(
          "sample_means",
          [](const QuantumOracle& oracle, const ProductState& rho0,
             const std::vector<PauliString>& observables, double x,
             long long shots, std::uint64_t stream) {
            const ShotBatch batch =
                oracle.sample_shots(rho0, observables, x, shots, {stream});
            std::vector<double> means;
            for (std::size_t j = 0; j < observables.size(); ++j) {
              means.push_back(batch.mean(static_cast<int>(j)));
            }
            return means;
          },
          py::arg("rho0"), py::arg("observables"), py::arg("x"),
          py::arg("shots"), py::arg("stream") = 0)
      .def("gibbs_finite_difference", &QuantumOracle::gibbs_finite_difference,
           py::arg("term_index"), py::arg("dbeta") = 1e-3);

  m.def(
      "spam_for_term",
      [](const Hamiltonian& h, int term_index) {
        const SpamSetting setting = spam_for_term(h, term_index);
        py::dict out;
        out["term_index"] = setting.term_index;
        out["probe"] = setting.probe.str();
        out["moat"] = setting.moat;
        out["block_word"] = setting.block.word.str();
        out["block_coeff"] = setting.block.coeff;
        return out;
      },
      py::arg("hamiltonian"), py::arg("term_index"));

  const auto learn_binding = [](const char* protocol) {
    return [protocol](const Hamiltonian& h, const LearnPlan& plan,
                      std::uint64_t seed, bool noiseless, bool constrained,
                      bool natural_order) {
      const std::string name(protocol);
      const OracleKind kind =
          name == "gibbs" ? OracleKind::kGibbs : OracleKind::kUnitary;
      const QuantumOracle oracle(h, kind, seed);
      const LearnerOptions options =
          make_options(noiseless, constrained, natural_order);
      LearnReport report;
      if (name == "gibbs") {
        report = gibbs_infer(oracle, plan, options);
      } else if (name == "naive") {
        report = naive_infer(oracle, plan, options);
      } else {
        report = partition_infer(oracle, plan, options);
      }
      return json_to_py(report_to_json(report));
    };
  };
  m.def("naive_infer", learn_binding("naive"), py::arg("hamiltonian"),
        py::arg("plan"), py::arg("seed") = 1, py::arg("noiseless") = false,
        py::arg("constrained") = true, py::arg("natural_order") = false);
  m.def("partition_infer", learn_binding("partition"), py::arg("hamiltonian"),
        py::arg("plan"), py::arg("seed") = 1, py::arg("noiseless") = false,
        py::arg("constrained") = true, py::arg("natural_order") = false);
  m.def("gibbs_infer", learn_binding("gibbs"), py::arg("hamiltonian"),
        py::arg("plan"), py::arg("seed") = 1, py::arg("noiseless") = false,
        py::arg("constrained") = true, py::arg("natural_order") = false);
}
