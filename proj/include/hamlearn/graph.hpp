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

#include <utility>
#include <vector>

#include "hamlearn/pauli.hpp"

namespace hamlearn {

/**
 * Undirected graph over Hamiltonian term indices. In the interaction graph,
 * terms are adjacent exactly when their supports overlap.
 */
class InteractionGraph {
 public:
  explicit InteractionGraph(int vertex_count);

  static InteractionGraph build(const Hamiltonian& h);

  int vertex_count() const { return static_cast<int>(adj_.size()); }
  const std::vector<int>& neighbors(int v) const { return adj_.at(v); }
  int degree(int v) const { return static_cast<int>(adj_.at(v).size()); }
  bool has_edge(int u, int v) const;
  void add_edge(int u, int v);

  int max_degree() const;
  /** Mean degree halved: (1/2|V|) sum_v deg(v). */
  double average_degree() const;

  /** Same vertices, edges between vertices at distance <= 2. */
  InteractionGraph squared() const;

  /** Edge list with u < v, sorted. */
  std::vector<std::pair<int, int>> edges() const;

 private:
  std::vector<std::vector<int>> adj_;  // sorted neighbor lists
};

/** Assignment of colors to vertices plus the color classes themselves. */
struct Coloring {
  std::vector<int> color_of;
  std::vector<std::vector<int>> partitions;

  int color_count() const { return static_cast<int>(partitions.size()); }
};

enum class VertexOrdering {
  kDegreeDescending,  // ties broken by index
  kNaturalIndex,
};

/**
 * Greedy coloring in the given vertex order; each vertex takes the smallest
 * color unused by its neighbors, so at most max_degree + 1 colors appear.
 */
Coloring greedy_color(const InteractionGraph& g,
                      VertexOrdering ordering = VertexOrdering::kDegreeDescending);

bool is_valid_coloring(const InteractionGraph& g, const Coloring& coloring);

}  // namespace hamlearn
