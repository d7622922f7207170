# Copyright 2026 The hamlearn Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Black-box Hamiltonian learning toolkit.

Chebyshev-regression derivative estimation, graph-coloring measurement
parallelization, bound-driven hyperparameter planning, and exact
desk-scale quantum oracles for unitary dynamics and Gibbs states.
"""

from ._core import (
    ChebFit,
    Coloring,
    Hamiltonian,
    InteractionGraph,
    LearnPlan,
    PauliString,
    ProductState,
    QuantumOracle,
    Scales,
    allocate_shots,
    cheb_eval,
    cheb_roots,
    commutator_norm_bound,
    constrained_fit,
    count_bound,
    error_bound,
    gibbs_infer,
    greedy_color,
    interp_coeffs,
    is_valid_coloring,
    naive_infer,
    partition_infer,
    plan,
    spam_for_term,
)

__version__ = "0.1.0"

__all__ = [
    "ChebFit",
    "Coloring",
    "Hamiltonian",
    "InteractionGraph",
    "LearnPlan",
    "PauliString",
    "ProductState",
    "QuantumOracle",
    "Scales",
    "allocate_shots",
    "cheb_eval",
    "cheb_roots",
    "commutator_norm_bound",
    "constrained_fit",
    "count_bound",
    "error_bound",
    "gibbs_infer",
    "greedy_color",
    "interp_coeffs",
    "is_valid_coloring",
    "naive_infer",
    "partition_infer",
    "plan",
    "spam_for_term",
    "__version__",
]
