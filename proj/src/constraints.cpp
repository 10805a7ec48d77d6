#include "construct/constraints.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace construct {

Property Property::parse(std::string_view text) {
  if (text == "none") return {PropertyKind::none, 0};
  if (text == "planar") return {PropertyKind::planar, 0};
  if (text == "acyclic") return {PropertyKind::acyclic, 0};
  if (text == "lobster") return {PropertyKind::lobster, 0};
  constexpr std::string_view prefix = "max_degree:";
  if (text.starts_with(prefix)) {
    const auto digits = text.substr(prefix.size());
    int k = -1;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (ec == std::errc() && ptr == digits.data() + digits.size() && k >= 0)
      return {PropertyKind::max_degree, k};
  }
  throw std::invalid_argument("unknown property '" + std::string(text) +
                              "' (expected planar|acyclic|lobster|max_degree:k|none)");
}

std::string Property::name() const {
  switch (kind) {
    case PropertyKind::none: return "none";
    case PropertyKind::planar: return "planar";
    case PropertyKind::acyclic: return "acyclic";
    case PropertyKind::lobster: return "lobster";
    case PropertyKind::max_degree: return "max_degree:" + std::to_string(max_degree);
  }
  return "none";
}

bool is_acyclic(const LabeledGraph& g) {
  // DFS with parent tracking; any non-tree edge closes a cycle.
  const int n = g.num_nodes();
  const auto adj = g.adjacency();
  std::vector<int> parent(static_cast<std::size_t>(n), -2);
  std::vector<int> stack;
  for (int s = 0; s < n; ++s) {
    if (parent[s] != -2) continue;
    parent[s] = -1;
    stack.push_back(s);
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      bool skipped_parent = false;
      for (int w : adj[v]) {
        if (w == parent[v] && !skipped_parent) {
          skipped_parent = true;
          continue;
        }
        if (parent[w] != -2) return false;
        parent[w] = v;
        stack.push_back(w);
      }
    }
  }
  return true;
}

namespace {

// Strips all nodes of degree <= 1 twice and checks the remainder has max degree 2.
// `nodes` must induce a forest in `adj`.
bool leaves_twice_leaves_paths(const std::vector<std::vector<int>>& adj,
                               const std::vector<int>& nodes, std::vector<int>& degree,
                               std::vector<char>& removed, int extra_i = -1, int extra_j = -1) {
  for (int v : nodes) {
    degree[v] = static_cast<int>(adj[v].size()) + (v == extra_i || v == extra_j ? 1 : 0);
    removed[v] = 0;
  }
  std::vector<int> leaves;
  for (int round = 0; round < 2; ++round) {
    leaves.clear();
    for (int v : nodes)
      if (!removed[v] && degree[v] <= 1) leaves.push_back(v);
    for (int v : leaves) removed[v] = 1;
    for (int v : leaves) {
      for (int w : adj[v])
        if (!removed[w]) --degree[w];
      if (v == extra_i && !removed[extra_j]) --degree[extra_j];
      if (v == extra_j && !removed[extra_i]) --degree[extra_i];
    }
  }
  for (int v : nodes)
    if (!removed[v] && degree[v] > 2) return false;
  return true;
}

}  // namespace

bool is_lobster_forest(const LabeledGraph& g) {
  if (!is_acyclic(g)) return false;
  const int n = g.num_nodes();
  std::vector<int> nodes(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) nodes[v] = v;
  std::vector<int> degree(nodes.size());
  std::vector<char> removed(nodes.size());
  return leaves_twice_leaves_paths(g.adjacency(), nodes, degree, removed);
}

bool max_degree_at_most(const LabeledGraph& g, int k) {
  for (int d : g.degrees())
    if (d > k) return false;
  return true;
}

bool full_check(const Property& property, const LabeledGraph& g) {
  switch (property.kind) {
    case PropertyKind::none: return true;
    case PropertyKind::planar: return is_planar(g);
    case PropertyKind::acyclic: return is_acyclic(g);
    case PropertyKind::lobster: return is_lobster_forest(g);
    case PropertyKind::max_degree: return max_degree_at_most(g, property.max_degree);
  }
  return false;
}

void DisjointSets::reset(int n) {
  parent_.resize(static_cast<std::size_t>(n));
  size_.assign(static_cast<std::size_t>(n), 1);
  for (int v = 0; v < n; ++v) parent_[v] = v;
}

int DisjointSets::find(int v) {
  while (parent_[v] != v) {
    parent_[v] = parent_[parent_[v]];
    v = parent_[v];
  }
  return v;
}

int DisjointSets::unite(int a, int b) {
  a = find(a);
  b = find(b);
  if (a == b) return a;
  if (size_[a] < size_[b]) std::swap(a, b);
  parent_[b] = a;
  size_[a] += size_[b];
  return a;
}

void ConstraintChecker::reset(int n) {
  if (n < 0) throw std::invalid_argument("checker reset: negative node count");
  n_ = n;
  edge_count_ = 0;
  adj_.assign(static_cast<std::size_t>(n), {});
  edge_keys_.clear();
  on_reset();
}

bool ConstraintChecker::try_insert(int i, int j) {
  if (i < 0 || j < 0 || i >= n_ || j >= n_)
    throw std::out_of_range("checker: node pair (" + std::to_string(i) + ", " + std::to_string(j) +
                            ") out of range for n=" + std::to_string(n_));
  if (i == j) throw std::invalid_argument("checker: self-loop");
  const auto key = NodePair::of(i, j).key();
  if (edge_keys_.contains(key))
    throw std::invalid_argument("checker: pair (" + std::to_string(i) + ", " + std::to_string(j) +
                                ") is already present");
  if (!admits(i, j)) return false;
  edge_keys_.insert(key);
  adj_[i].push_back(j);
  adj_[j].push_back(i);
  ++edge_count_;
  on_insert(i, j);
  return true;
}

std::vector<NodePair> ConstraintChecker::edges() const {
  std::vector<NodePair> out;
  out.reserve(edge_count_);
  for (int v = 0; v < n_; ++v)
    for (int w : adj_[v])
      if (v < w) out.push_back({v, w});
  std::sort(out.begin(), out.end());
  return out;
}

MaxDegreeChecker::MaxDegreeChecker(int k) : k_(k) {
  if (k < 0) throw std::invalid_argument("max_degree: k must be >= 0");
}

bool MaxDegreeChecker::admits(int i, int j) {
  return static_cast<int>(adj_[i].size()) < k_ && static_cast<int>(adj_[j].size()) < k_;
}

void LobsterChecker::on_reset() {
  sets_.reset(n_);
  members_.assign(static_cast<std::size_t>(n_), {});
  for (int v = 0; v < n_; ++v) members_[v] = {v};
  degree_scratch_.assign(static_cast<std::size_t>(n_), 0);
}

bool LobsterChecker::admits(int i, int j) {
  const int ri = sets_.find(i), rj = sets_.find(j);
  if (ri == rj) return false;  // would close a cycle
  std::vector<int> merged;
  merged.reserve(members_[ri].size() + members_[rj].size());
  merged.insert(merged.end(), members_[ri].begin(), members_[ri].end());
  merged.insert(merged.end(), members_[rj].begin(), members_[rj].end());
  if (merged.size() <= 7) return true;  // every tree on <= 7 nodes is a lobster
  std::vector<char> removed(static_cast<std::size_t>(n_), 0);
  return leaves_twice_leaves_paths(adj_, merged, degree_scratch_, removed, i, j);
}

void LobsterChecker::on_insert(int i, int j) {
  const int ri = sets_.find(i), rj = sets_.find(j);
  const int root = sets_.unite(ri, rj);
  const int other = root == ri ? rj : ri;
  auto& dst = members_[root];
  dst.insert(dst.end(), members_[other].begin(), members_[other].end());
  members_[other].clear();
  members_[other].shrink_to_fit();
}

bool PlanarChecker::admits(int i, int j) {
  if (n_ >= 3 && static_cast<int>(edge_count_) + 1 > 3 * n_ - 6) return false;
  if (sets_.find(i) != sets_.find(j)) return true;

  // Relabel the component containing i and test it with {i, j} added.
  local_id_.assign(static_cast<std::size_t>(n_), -1);
  queue_.clear();
  component_edges_.clear();
  local_id_[i] = 0;
  queue_.push_back(i);
  for (std::size_t head = 0; head < queue_.size(); ++head) {
    const int v = queue_[head];
    for (int w : adj_[v]) {
      if (local_id_[w] < 0) {
        local_id_[w] = static_cast<int>(queue_.size());
        queue_.push_back(w);
      }
      if (v < w) component_edges_.emplace_back(local_id_[v], local_id_[w]);
    }
  }
  component_edges_.emplace_back(local_id_[i], local_id_[j]);
  return tester_.test(static_cast<int>(queue_.size()), component_edges_);
}

std::unique_ptr<ConstraintChecker> make_checker(const Property& property) {
  switch (property.kind) {
    case PropertyKind::none: return std::make_unique<UnconstrainedChecker>();
    case PropertyKind::planar: return std::make_unique<PlanarChecker>();
    case PropertyKind::acyclic: return std::make_unique<AcyclicChecker>();
    case PropertyKind::lobster: return std::make_unique<LobsterChecker>();
    case PropertyKind::max_degree: return std::make_unique<MaxDegreeChecker>(property.max_degree);
  }
  throw std::invalid_argument("make_checker: unknown property");
}

CheckerFactory checker_factory(const Property& property) {
  return [property] { return make_checker(property); };
}

void seed_checker(ConstraintChecker& checker, const LabeledGraph& g) {
  checker.reset(g.num_nodes());
  for (const auto& [p, label] : g.edges()) {
    if (!checker.try_insert(p.i, p.j))
      throw std::invalid_argument("graph violates property " + checker.name() + " at edge (" +
                                  std::to_string(p.i) + ", " + std::to_string(p.j) + ")");
  }
}

}  // namespace construct
