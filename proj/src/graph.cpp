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

#include "hamlearn/graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace hamlearn {

InteractionGraph::InteractionGraph(int vertex_count) {
  if (vertex_count < 0) throw std::invalid_argument("negative vertex count");
  adj_.resize(vertex_count);
}

InteractionGraph InteractionGraph::build(const Hamiltonian& h) {
  const int r = h.term_count();
  InteractionGraph g(r);
  std::vector<std::vector<int>> supports(r);
  for (int i = 0; i < r; ++i) supports[i] = h.term(i).word.support();
  for (int i = 0; i < r; ++i) {
    for (int j = i + 1; j < r; ++j) {
      const bool overlap = std::find_first_of(
                               supports[i].begin(), supports[i].end(),
                               supports[j].begin(), supports[j].end()) !=
                           supports[i].end();
      if (overlap) g.add_edge(i, j);
    }
  }
  return g;
}

bool InteractionGraph::has_edge(int u, int v) const {
  const auto& nb = adj_.at(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

void InteractionGraph::add_edge(int u, int v) {
  if (u == v) throw std::invalid_argument("self loops not allowed");
  if (has_edge(u, v)) return;
  adj_.at(u).insert(std::lower_bound(adj_[u].begin(), adj_[u].end(), v), v);
  adj_.at(v).insert(std::lower_bound(adj_[v].begin(), adj_[v].end(), u), u);
}

int InteractionGraph::max_degree() const {
  int result = 0;
  for (const auto& nb : adj_) result = std::max(result, static_cast<int>(nb.size()));
  return result;
}

double InteractionGraph::average_degree() const {
  if (adj_.empty()) throw std::invalid_argument("average degree of empty graph");
  double total = 0.0;
  for (const auto& nb : adj_) total += static_cast<double>(nb.size());
  return total / (2.0 * static_cast<double>(adj_.size()));
}

InteractionGraph InteractionGraph::squared() const {
  InteractionGraph g2(vertex_count());
  for (int v = 0; v < vertex_count(); ++v) {
    std::set<int> reach;
    for (int u : adj_[v]) {
      reach.insert(u);
      for (int w : adj_[u]) reach.insert(w);
    }
    reach.erase(v);
    for (int u : reach) {
      if (u > v) g2.add_edge(v, u);
    }
  }
  return g2;
}

std::vector<std::pair<int, int>> InteractionGraph::edges() const {
  std::vector<std::pair<int, int>> result;
  for (int v = 0; v < vertex_count(); ++v) {
    for (int u : adj_[v]) {
      if (u > v) result.emplace_back(v, u);
    }
  }
  return result;
}

Coloring greedy_color(const InteractionGraph& g, VertexOrdering ordering) {
  const int n = g.vertex_count();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  if (ordering == VertexOrdering::kDegreeDescending) {
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return g.degree(a) > g.degree(b);
    });
  }

  Coloring coloring;
  coloring.color_of.assign(n, -1);
  for (int v : order) {
    std::vector<bool> used(g.degree(v) + 1, false);
    for (int u : g.neighbors(v)) {
      const int c = coloring.color_of[u];
      if (c >= 0 && c < static_cast<int>(used.size())) used[c] = true;
    }
    int color = 0;
    while (used[color]) ++color;
    coloring.color_of[v] = color;
    if (color >= static_cast<int>(coloring.partitions.size())) {
      coloring.partitions.resize(color + 1);
    }
  }
  for (int v = 0; v < n; ++v) coloring.partitions[coloring.color_of[v]].push_back(v);
  return coloring;
}

bool is_valid_coloring(const InteractionGraph& g, const Coloring& coloring) {
  if (static_cast<int>(coloring.color_of.size()) != g.vertex_count()) return false;
  std::vector<bool> seen(g.vertex_count(), false);
  for (const auto& part : coloring.partitions) {
    for (int v : part) {
      if (v < 0 || v >= g.vertex_count() || seen[v]) return false;
      seen[v] = true;
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) return false;
  for (const auto& [u, v] : g.edges()) {
    if (coloring.color_of[u] == coloring.color_of[v]) return false;
  }
  return true;
}

}  // namespace hamlearn
