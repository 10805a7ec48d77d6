#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

namespace construct {

/// Cardinalities of the categorical label spaces.
/// Nodes take labels in [0, node_types); edges take labels in [0, edge_types],
/// where edge label 0 is the no-edge (absorbing) state.
struct LabelSpaces {
  int node_types = 1;
  int edge_types = 1;

  int edge_states() const noexcept { return edge_types + 1; }
  void validate() const;

  friend bool operator==(const LabelSpaces&, const LabelSpaces&) = default;
};

/// Unordered node pair, always stored with i < j.
struct NodePair {
  int i = 0;
  int j = 0;

  static NodePair of(int a, int b) { return a < b ? NodePair{a, b} : NodePair{b, a}; }
  std::uint64_t key() const noexcept {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) |
           static_cast<std::uint32_t>(j);
  }

  friend auto operator<=>(const NodePair&, const NodePair&) = default;
};

inline std::size_t num_pairs(int n) {
  return n < 2 ? 0 : static_cast<std::size_t>(n) * (n - 1) / 2;
}

/// Row-major index of pair (i, j), i < j, in the strict upper triangle.
inline std::size_t pair_index(int i, int j, int n) {
  return static_cast<std::size_t>(i) * n - static_cast<std::size_t>(i) * (i + 1) / 2 +
         static_cast<std::size_t>(j - i - 1);
}

/// Graph with categorical node labels and symmetric categorical edge labels.
/// Edges are stored sparsely, once per unordered pair; absent pairs carry label 0.
class LabeledGraph {
 public:
  using EdgeMap = std::map<NodePair, int>;

  LabeledGraph() = default;
  explicit LabeledGraph(int n);
  explicit LabeledGraph(std::vector<int> node_labels);

  int num_nodes() const noexcept { return static_cast<int>(node_labels_.size()); }
  std::size_t num_edges() const noexcept { return edges_.size(); }

  int node_label(int v) const { return node_labels_.at(static_cast<std::size_t>(v)); }
  const std::vector<int>& node_labels() const noexcept { return node_labels_; }
  void set_node_label(int v, int label);
  void set_node_labels(std::vector<int> labels);

  /// Label of pair {i, j}; 0 when absent.
  int edge_label(int i, int j) const;
  bool has_edge(int i, int j) const { return edge_label(i, j) != 0; }
  /// Sets the label of pair {i, j}; label 0 removes the edge.
  void set_edge(int i, int j, int label = 1);
  void remove_edge(int i, int j) { set_edge(i, j, 0); }
  void clear_edges() noexcept { edges_.clear(); }

  const EdgeMap& edges() const noexcept { return edges_; }

  std::vector<std::vector<int>> adjacency() const;
  std::vector<int> degrees() const;

  /// Throws if any label falls outside `spaces`.
  void validate(const LabelSpaces& spaces) const;

  friend bool operator==(const LabeledGraph&, const LabeledGraph&) = default;
  friend auto operator<=>(const LabeledGraph& a, const LabeledGraph& b) {
    if (auto c = a.node_labels_ <=> b.node_labels_; c != 0) return c;
    return a.edges_ <=> b.edges_;
  }

 private:
  void check_pair(int i, int j) const;

  std::vector<int> node_labels_;
  EdgeMap edges_;
};

/// Per-node and per-pair categorical distributions over a graph's label spaces.
/// Pair rows follow pair_index order.
struct GraphDistributions {
  LabelSpaces spaces;
  int n = 0;
  std::vector<double> node_probs;
  std::vector<double> edge_probs;

  GraphDistributions() = default;
  GraphDistributions(const LabelSpaces& s, int num_nodes);

  std::span<double> node(int v) {
    return {node_probs.data() + static_cast<std::size_t>(v) * spaces.node_types,
            static_cast<std::size_t>(spaces.node_types)};
  }
  std::span<const double> node(int v) const {
    return {node_probs.data() + static_cast<std::size_t>(v) * spaces.node_types,
            static_cast<std::size_t>(spaces.node_types)};
  }
  std::span<double> edge(int i, int j) { return edge_at(pair_index(i, j, n)); }
  std::span<const double> edge(int i, int j) const { return edge_at(pair_index(i, j, n)); }
  std::span<double> edge_at(std::size_t p) {
    return {edge_probs.data() + p * spaces.edge_states(),
            static_cast<std::size_t>(spaces.edge_states())};
  }
  std::span<const double> edge_at(std::size_t p) const {
    return {edge_probs.data() + p * spaces.edge_states(),
            static_cast<std::size_t>(spaces.edge_states())};
  }

  /// Throws unless every row lies on the probability simplex within `tol`.
  void validate(double tol = 1e-9) const;
};

/// Positional containment: same node count, equal node labels position by position,
/// and every edge of `a` present in `g` with the same label.
bool subgraph_of(const LabeledGraph& a, const LabeledGraph& g);

/// Like subgraph_of, but ignores node labels.
bool edges_subset_of(const LabeledGraph& a, const LabeledGraph& g);

/// Relabels nodes: node v of `g` becomes node perm[v] of the result.
LabeledGraph permuted(const LabeledGraph& g, std::span<const int> perm);

/// Component id per node (ids numbered in order of first appearance).
std::vector<int> connected_components(const LabeledGraph& g, int* count = nullptr);
bool is_connected(const LabeledGraph& g);

/// Copy of `g` with the same node labels and no edges.
LabeledGraph without_edges(const LabeledGraph& g);

}  // namespace construct
