#pragma once

#include <algorithm>
#include <initializer_list>
#include <numeric>
#include <utility>
#include <vector>

#include "construct/graph.hpp"
#include "construct/rng.hpp"

namespace testutil {

using construct::LabeledGraph;

inline LabeledGraph make_graph(int n, std::initializer_list<std::pair<int, int>> edges) {
  LabeledGraph g(n);
  for (const auto& [i, j] : edges) g.set_edge(i, j);
  return g;
}

inline LabeledGraph make_graph(int n, const std::vector<std::pair<int, int>>& edges) {
  LabeledGraph g(n);
  for (const auto& [i, j] : edges) g.set_edge(i, j);
  return g;
}

inline LabeledGraph path(int n) {
  LabeledGraph g(n);
  for (int v = 0; v + 1 < n; ++v) g.set_edge(v, v + 1);
  return g;
}

inline LabeledGraph cycle(int n) {
  LabeledGraph g = path(n);
  g.set_edge(0, n - 1);
  return g;
}

inline LabeledGraph complete(int n) {
  LabeledGraph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.set_edge(i, j);
  return g;
}

inline LabeledGraph star(int leaves) {
  LabeledGraph g(leaves + 1);
  for (int v = 1; v <= leaves; ++v) g.set_edge(0, v);
  return g;
}

/// Erdos-Renyi graph with random node labels in [0, b) and edge labels in [1, c].
inline LabeledGraph random_graph(int n, double p, int b, int c, construct::Rng& rng) {
  LabeledGraph g(n);
  for (int v = 0; v < n; ++v) g.set_node_label(v, static_cast<int>(construct::uniform_index(b, rng)));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (construct::uniform01(rng) < p) g.set_edge(i, j, 1 + static_cast<int>(construct::uniform_index(c, rng)));
  return g;
}

inline std::vector<int> random_permutation(int n, construct::Rng& rng) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  construct::shuffle(std::span<int>(perm), rng);
  return perm;
}

/// Label-preserving isomorphism by trying every permutation.
inline bool brute_force_isomorphic(const LabeledGraph& a, const LabeledGraph& g) {
  const int n = a.num_nodes();
  if (n != g.num_nodes() || a.num_edges() != g.num_edges()) return false;
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    if (construct::permuted(a, perm) == g) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

}  // namespace testutil
