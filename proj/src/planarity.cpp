#include "construct/planarity.hpp"

#include <algorithm>

namespace construct {

bool LeftRightPlanarity::test(int n, std::span<const std::pair<int, int>> edges) {
  const auto m = static_cast<int>(edges.size());
  if (n > 2 && m > 3 * n - 6) return false;
  if (m < 9) return true;  // K5 and K3,3 both need at least 9 edges.

  const auto un = static_cast<std::size_t>(n), um = static_cast<std::size_t>(m);
  adj_.assign(un, {});
  out_.assign(un, {});
  height_.assign(un, -1);
  parent_edge_.assign(un, -1);
  src_.assign(um, -1);
  dst_.assign(um, -1);
  oriented_.assign(um, 0);
  lowpt_.assign(um, 0);
  lowpt2_.assign(um, 0);
  nesting_depth_.assign(um, 0);
  lowpt_edge_.assign(um, -1);
  ref_.assign(um, -1);
  stack_bottom_.assign(um, -1);
  stack_.clear();
  next_id_ = 0;

  for (int e = 0; e < m; ++e) {
    adj_[edges[e].first].emplace_back(edges[e].second, e);
    adj_[edges[e].second].emplace_back(edges[e].first, e);
  }

  std::vector<int> roots;
  for (int v = 0; v < n; ++v) {
    if (height_[v] >= 0) continue;
    height_[v] = 0;
    roots.push_back(v);
    orient(v);
  }
  for (int v = 0; v < n; ++v) {
    std::stable_sort(out_[v].begin(), out_[v].end(),
                     [&](int a, int b) { return nesting_depth_[a] < nesting_depth_[b]; });
  }
  for (int root : roots)
    if (!check(root)) return false;
  return true;
}

void LeftRightPlanarity::orient(int v) {
  const int e = parent_edge_[v];
  for (const auto& [w, id] : adj_[v]) {
    if (oriented_[id]) continue;
    oriented_[id] = 1;
    src_[id] = v;
    dst_[id] = w;
    out_[v].push_back(id);
    lowpt_[id] = height_[v];
    lowpt2_[id] = height_[v];
    if (height_[w] < 0) {  // tree edge
      parent_edge_[w] = id;
      height_[w] = height_[v] + 1;
      orient(w);
    } else {  // back edge
      lowpt_[id] = height_[w];
    }

    nesting_depth_[id] = 2 * lowpt_[id] + (lowpt2_[id] < height_[v] ? 1 : 0);

    if (e >= 0) {
      if (lowpt_[id] < lowpt_[e]) {
        lowpt2_[e] = std::min(lowpt_[e], lowpt2_[id]);
        lowpt_[e] = lowpt_[id];
      } else if (lowpt_[id] > lowpt_[e]) {
        lowpt2_[e] = std::min(lowpt2_[e], lowpt_[id]);
      } else {
        lowpt2_[e] = std::min(lowpt2_[e], lowpt2_[id]);
      }
    }
  }
}

int LeftRightPlanarity::lowest(const ConflictPair& p) const {
  if (p.left.empty()) return lowpt_[p.right.low];
  if (p.right.empty()) return lowpt_[p.left.low];
  return std::min(lowpt_[p.left.low], lowpt_[p.right.low]);
}

bool LeftRightPlanarity::check(int v) {
  const int e = parent_edge_[v];
  const auto& outs = out_[v];
  for (std::size_t k = 0; k < outs.size(); ++k) {
    const int ei = outs[k];
    const int w = dst_[ei];
    stack_bottom_[ei] = top_id();
    if (ei == parent_edge_[w]) {
      if (!check(w)) return false;
    } else {
      lowpt_edge_[ei] = ei;
      ConflictPair p;
      p.right = {ei, ei};
      push(p);
    }
    if (lowpt_[ei] < height_[v]) {
      if (k == 0) {
        lowpt_edge_[e] = lowpt_edge_[ei];
      } else if (!add_constraints(ei, e)) {
        return false;
      }
    }
  }
  if (e >= 0) remove_back_edges(e);
  return true;
}

bool LeftRightPlanarity::add_constraints(int ei, int e) {
  ConflictPair p;
  // Merge return edges of ei into p.right.
  do {
    ConflictPair q = stack_.back();
    stack_.pop_back();
    if (!q.left.empty()) std::swap(q.left, q.right);
    if (!q.left.empty()) return false;
    if (lowpt_[q.right.low] > lowpt_[e]) {
      if (p.right.empty()) {
        p.right = q.right;
      } else {
        ref_[p.right.low] = q.right.high;
      }
      p.right.low = q.right.low;
    } else {
      ref_[q.right.low] = lowpt_edge_[e];
    }
  } while (top_id() != stack_bottom_[ei]);

  // Merge conflicting return edges of earlier siblings into p.left.
  while (!stack_.empty() &&
         (conflicting(stack_.back().left, ei) || conflicting(stack_.back().right, ei))) {
    ConflictPair q = stack_.back();
    stack_.pop_back();
    if (conflicting(q.right, ei)) std::swap(q.left, q.right);
    if (conflicting(q.right, ei)) return false;
    if (p.right.low >= 0) ref_[p.right.low] = q.right.high;
    if (q.right.low >= 0) p.right.low = q.right.low;
    if (p.left.empty()) {
      p.left = q.left;
    } else {
      ref_[p.left.low] = q.left.high;
    }
    p.left.low = q.left.low;
  }

  if (!(p.left.empty() && p.right.empty())) push(p);
  return true;
}

void LeftRightPlanarity::remove_back_edges(int e) {
  const int u = src_[e];
  while (!stack_.empty() && lowest(stack_.back()) == height_[u]) stack_.pop_back();

  if (!stack_.empty()) {
    ConflictPair p = stack_.back();
    stack_.pop_back();
    while (p.left.high >= 0 && dst_[p.left.high] == u) p.left.high = ref_[p.left.high];
    if (p.left.high < 0 && p.left.low >= 0) {
      ref_[p.left.low] = p.right.low;
      p.left.low = -1;
    }
    while (p.right.high >= 0 && dst_[p.right.high] == u) p.right.high = ref_[p.right.high];
    if (p.right.high < 0 && p.right.low >= 0) {
      ref_[p.right.low] = p.left.low;
      p.right.low = -1;
    }
    stack_.push_back(p);  // same pair, identity preserved
  }

  if (lowpt_[e] < height_[u] && !stack_.empty()) {
    const int hl = stack_.back().left.high;
    const int hr = stack_.back().right.high;
    ref_[e] = (hl >= 0 && (hr < 0 || lowpt_[hl] > lowpt_[hr])) ? hl : hr;
  }
}

bool is_planar(const LabeledGraph& g) {
  std::vector<std::pair<int, int>> edges;
  edges.reserve(g.num_edges());
  for (const auto& [p, label] : g.edges()) edges.emplace_back(p.i, p.j);
  LeftRightPlanarity tester;
  return tester.test(g.num_nodes(), edges);
}

}  // namespace construct
