#include "construct/graph.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "construct/rng.hpp"

namespace construct {

std::size_t sample_categorical(std::span<const double> weights, Rng& rng) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) throw std::invalid_argument("sample_categorical: weights sum to zero");
  double u = uniform01(rng) * total;
  std::size_t last_positive = 0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k] <= 0.0) continue;
    last_positive = k;
    if (u < weights[k]) return k;
    u -= weights[k];
  }
  return last_positive;
}

void LabelSpaces::validate() const {
  if (node_types < 1) throw std::invalid_argument("label spaces: node_types must be >= 1");
  if (edge_types < 1) throw std::invalid_argument("label spaces: edge_types must be >= 1");
}

LabeledGraph::LabeledGraph(int n) {
  if (n < 0) throw std::invalid_argument("LabeledGraph: negative node count");
  node_labels_.assign(static_cast<std::size_t>(n), 0);
}

LabeledGraph::LabeledGraph(std::vector<int> node_labels) : node_labels_(std::move(node_labels)) {}

void LabeledGraph::set_node_label(int v, int label) {
  if (v < 0 || v >= num_nodes()) throw std::out_of_range("node index out of range");
  if (label < 0) throw std::invalid_argument("negative node label");
  node_labels_[static_cast<std::size_t>(v)] = label;
}

void LabeledGraph::set_node_labels(std::vector<int> labels) {
  if (static_cast<int>(labels.size()) != num_nodes())
    throw std::invalid_argument("set_node_labels: size mismatch");
  node_labels_ = std::move(labels);
}

void LabeledGraph::check_pair(int i, int j) const {
  if (i < 0 || j < 0 || i >= num_nodes() || j >= num_nodes())
    throw std::out_of_range("node pair (" + std::to_string(i) + ", " + std::to_string(j) +
                            ") out of range for n=" + std::to_string(num_nodes()));
  if (i == j) throw std::invalid_argument("self-loops are not allowed");
}

int LabeledGraph::edge_label(int i, int j) const {
  check_pair(i, j);
  auto it = edges_.find(NodePair::of(i, j));
  return it == edges_.end() ? 0 : it->second;
}

void LabeledGraph::set_edge(int i, int j, int label) {
  check_pair(i, j);
  if (label < 0) throw std::invalid_argument("negative edge label");
  const NodePair p = NodePair::of(i, j);
  if (label == 0) {
    edges_.erase(p);
  } else {
    edges_[p] = label;
  }
}

std::vector<std::vector<int>> LabeledGraph::adjacency() const {
  std::vector<std::vector<int>> adj(node_labels_.size());
  for (const auto& [p, label] : edges_) {
    adj[static_cast<std::size_t>(p.i)].push_back(p.j);
    adj[static_cast<std::size_t>(p.j)].push_back(p.i);
  }
  return adj;
}

std::vector<int> LabeledGraph::degrees() const {
  std::vector<int> deg(node_labels_.size(), 0);
  for (const auto& [p, label] : edges_) {
    ++deg[static_cast<std::size_t>(p.i)];
    ++deg[static_cast<std::size_t>(p.j)];
  }
  return deg;
}

void LabeledGraph::validate(const LabelSpaces& spaces) const {
  for (std::size_t v = 0; v < node_labels_.size(); ++v) {
    if (node_labels_[v] < 0 || node_labels_[v] >= spaces.node_types)
      throw std::invalid_argument("node " + std::to_string(v) + " label " +
                                  std::to_string(node_labels_[v]) + " outside [0, " +
                                  std::to_string(spaces.node_types) + ")");
  }
  for (const auto& [p, label] : edges_) {
    if (label < 1 || label > spaces.edge_types)
      throw std::invalid_argument("edge (" + std::to_string(p.i) + ", " + std::to_string(p.j) +
                                  ") label " + std::to_string(label) + " outside [1, " +
                                  std::to_string(spaces.edge_types) + "]");
  }
}

GraphDistributions::GraphDistributions(const LabelSpaces& s, int num_nodes)
    : spaces(s),
      n(num_nodes),
      node_probs(static_cast<std::size_t>(num_nodes) * s.node_types, 0.0),
      edge_probs(num_pairs(num_nodes) * s.edge_states(), 0.0) {}

void GraphDistributions::validate(double tol) const {
  auto check_row = [tol](std::span<const double> row, const char* what, std::size_t idx) {
    double sum = 0.0;
    for (double p : row) {
      if (!(p >= -tol && p <= 1.0 + tol))
        throw std::domain_error(std::string(what) + " row " + std::to_string(idx) +
                                " has entry outside [0,1]");
      sum += p;
    }
    if (std::abs(sum - 1.0) > tol)
      throw std::domain_error(std::string(what) + " row " + std::to_string(idx) +
                              " sums to " + std::to_string(sum));
  };
  for (int v = 0; v < n; ++v) check_row(node(v), "node", static_cast<std::size_t>(v));
  for (std::size_t p = 0; p < num_pairs(n); ++p) check_row(edge_at(p), "edge", p);
}

bool edges_subset_of(const LabeledGraph& a, const LabeledGraph& g) {
  if (a.num_nodes() != g.num_nodes())
    throw std::invalid_argument("subgraph test requires equal node counts");
  const auto& ge = g.edges();
  for (const auto& [p, label] : a.edges()) {
    auto it = ge.find(p);
    if (it == ge.end() || it->second != label) return false;
  }
  return true;
}

bool subgraph_of(const LabeledGraph& a, const LabeledGraph& g) {
  if (a.num_nodes() != g.num_nodes())
    throw std::invalid_argument("subgraph test requires equal node counts");
  return a.node_labels() == g.node_labels() && edges_subset_of(a, g);
}

LabeledGraph permuted(const LabeledGraph& g, std::span<const int> perm) {
  const int n = g.num_nodes();
  if (static_cast<int>(perm.size()) != n) throw std::invalid_argument("permutation size mismatch");
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) labels[static_cast<std::size_t>(perm[v])] = g.node_label(v);
  LabeledGraph out(std::move(labels));
  for (const auto& [p, label] : g.edges()) out.set_edge(perm[p.i], perm[p.j], label);
  return out;
}

std::vector<int> connected_components(const LabeledGraph& g, int* count) {
  const int n = g.num_nodes();
  const auto adj = g.adjacency();
  std::vector<int> comp(static_cast<std::size_t>(n), -1);
  std::vector<int> stack;
  int next = 0;
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int w : adj[v]) {
        if (comp[w] < 0) {
          comp[w] = next;
          stack.push_back(w);
        }
      }
    }
    ++next;
  }
  if (count) *count = next;
  return comp;
}

bool is_connected(const LabeledGraph& g) {
  if (g.num_nodes() == 0) return false;
  int count = 0;
  connected_components(g, &count);
  return count == 1;
}

LabeledGraph without_edges(const LabeledGraph& g) { return LabeledGraph(g.node_labels()); }

}  // namespace construct
