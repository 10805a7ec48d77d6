#pragma once

#include <span>
#include <utility>
#include <vector>

#include "construct/graph.hpp"

namespace construct {

/// Left-right planarity test (de Fraysseix-Rosenstiehl criterion, Brandes' formulation).
/// Linear time; reports planarity only, no embedding. Buffers are reused across calls,
/// so one instance should not be shared between threads.
class LeftRightPlanarity {
 public:
  /// Simple undirected graph on nodes [0, n); no self-loops or parallel edges.
  bool test(int n, std::span<const std::pair<int, int>> edges);

 private:
  struct Interval {
    int low = -1;
    int high = -1;
    bool empty() const noexcept { return low < 0 && high < 0; }
  };
  struct ConflictPair {
    Interval left, right;
    long id = 0;
  };

  void orient(int v);
  bool check(int v);
  bool add_constraints(int ei, int e);
  void remove_back_edges(int e);
  bool conflicting(const Interval& iv, int edge) const {
    return !iv.empty() && lowpt_[iv.high] > lowpt_[edge];
  }
  int lowest(const ConflictPair& p) const;
  long top_id() const { return stack_.empty() ? -1 : stack_.back().id; }
  void push(ConflictPair p) {
    if (p.id == 0) p.id = ++next_id_;
    stack_.push_back(p);
  }

  std::vector<std::vector<std::pair<int, int>>> adj_;  // (neighbour, edge id)
  std::vector<std::vector<int>> out_;                  // oriented out-edges by nesting depth
  std::vector<int> height_, parent_edge_;
  std::vector<int> src_, dst_;
  std::vector<char> oriented_;
  std::vector<int> lowpt_, lowpt2_, nesting_depth_;
  std::vector<int> lowpt_edge_, ref_;
  std::vector<long> stack_bottom_;
  std::vector<ConflictPair> stack_;
  long next_id_ = 0;
};

/// Whole-graph planarity of the structure of `g` (labels ignored).
bool is_planar(const LabeledGraph& g);

}  // namespace construct
