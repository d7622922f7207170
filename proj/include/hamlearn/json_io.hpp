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
#include <string>

#include <json.hpp>

#include "hamlearn/bounds.hpp"
#include "hamlearn/graph.hpp"
#include "hamlearn/learner.hpp"
#include "hamlearn/pauli.hpp"

namespace hamlearn {

/**
 * Hamiltonian spec file:
 *   { "n": 3, "terms": [ { "pauli": "Z0 Z1", "coeff": 0.4 }, ... ] }
 * or an ensemble draw:
 *   { "ensemble": { "family": "tfim", "n": 8, "dist": "unif(-1,1)",
 *                   "seed": 7 } }
 * Ensemble seeds may be offset per trial via `seed_offset`.
 */
Hamiltonian hamiltonian_from_json(const nlohmann::json& doc,
                                  std::uint64_t seed_offset = 0);

Hamiltonian load_hamiltonian(const std::string& path,
                             std::uint64_t seed_offset = 0);

nlohmann::json hamiltonian_to_json(const Hamiltonian& h);

/** TFIM with couplings and fields drawn from Unif(-1, 1). */
Hamiltonian random_tfim(int qubit_count, std::uint64_t seed);

/** Edge-list dump; vertices are 1-based term indices. */
nlohmann::json graph_to_json(const InteractionGraph& g);

/** { "<color>": [term indices], ... }, 1-based. */
nlohmann::json coloring_to_json(const Coloring& coloring);

nlohmann::json plan_to_json(const LearnPlan& plan);

nlohmann::json report_to_json(const LearnReport& report);

/** Atomic file write (temp file + rename). */
void write_text_file(const std::string& path, const std::string& contents);

}  // namespace hamlearn
