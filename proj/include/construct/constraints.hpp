#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "construct/graph.hpp"
#include "construct/planarity.hpp"

namespace construct {

enum class PropertyKind { none, planar, acyclic, lobster, max_degree };

/// An edge-deletion-invariant structural property: if it holds for a graph it holds
/// for every edge subset of that graph. Node and edge labels are ignored.
struct Property {
  PropertyKind kind = PropertyKind::none;
  int max_degree = 0;

  /// Accepts "none", "planar", "acyclic", "lobster", "max_degree:k".
  static Property parse(std::string_view text);
  std::string name() const;

  friend bool operator==(const Property&, const Property&) = default;
};

bool is_acyclic(const LabeledGraph& g);
/// Every connected component is a lobster: a tree whose nodes all lie within two hops
/// of a backbone path. Tested by stripping leaves twice and requiring paths to remain.
bool is_lobster_forest(const LabeledGraph& g);
bool max_degree_at_most(const LabeledGraph& g, int k);

/// Ground-truth whole-graph check used by oracles, metrics and rejection sampling.
bool full_check(const Property& property, const LabeledGraph& g);

/// Union-find with union by size and path halving.
class DisjointSets {
 public:
  explicit DisjointSets(int n = 0) { reset(n); }
  void reset(int n);
  int find(int v);
  /// Returns the surviving root.
  int unite(int a, int b);
  int size_of(int v) { return size_[find(v)]; }

 private:
  std::vector<int> parent_, size_;
};

/// Stateful incremental validator for one property over a fixed node set.
/// try_insert accepts iff the maintained graph plus {i, j} still satisfies the
/// property; accepted edges become part of the maintained graph.
class ConstraintChecker {
 public:
  virtual ~ConstraintChecker() = default;

  void reset(int n);
  /// Throws std::out_of_range for bad nodes and std::invalid_argument for self-loops
  /// or pairs that are already present.
  bool try_insert(int i, int j);

  int num_nodes() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edge_count_; }
  bool has_edge(int i, int j) const { return edge_keys_.contains(NodePair::of(i, j).key()); }
  /// Maintained edges in lexicographic order.
  std::vector<NodePair> edges() const;

  virtual std::string name() const = 0;
  virtual std::unique_ptr<ConstraintChecker> clone() const = 0;

  std::unique_ptr<ConstraintChecker> snapshot() const { return clone(); }
  /// Restores state from a snapshot of the same checker type.
  virtual void restore(const ConstraintChecker& snap) = 0;

 protected:
  virtual void on_reset() = 0;
  /// Decision for {i, j} against the current state; must not change the maintained graph.
  virtual bool admits(int i, int j) = 0;
  virtual void on_insert(int i, int j) = 0;

  int n_ = 0;
  std::size_t edge_count_ = 0;
  std::vector<std::vector<int>> adj_;
  std::unordered_set<std::uint64_t> edge_keys_;
};

/// Implements clone/restore by value copy.
template <typename Derived>
class CheckerBase : public ConstraintChecker {
 public:
  std::unique_ptr<ConstraintChecker> clone() const override {
    return std::make_unique<Derived>(static_cast<const Derived&>(*this));
  }
  void restore(const ConstraintChecker& snap) override {
    const auto* other = dynamic_cast<const Derived*>(&snap);
    if (!other) throw std::invalid_argument("restore: snapshot of a different checker type");
    static_cast<Derived&>(*this) = *other;
  }
};

class UnconstrainedChecker final : public CheckerBase<UnconstrainedChecker> {
 public:
  std::string name() const override { return "none"; }

 protected:
  void on_reset() override {}
  bool admits(int, int) override { return true; }
  void on_insert(int, int) override {}
};

/// Rejects an edge iff both endpoints already share a component.
class AcyclicChecker final : public CheckerBase<AcyclicChecker> {
 public:
  std::string name() const override { return "acyclic"; }

 protected:
  void on_reset() override { sets_.reset(n_); }
  bool admits(int i, int j) override { return sets_.find(i) != sets_.find(j); }
  void on_insert(int i, int j) override { sets_.unite(i, j); }

 private:
  DisjointSets sets_;
};

/// Degree table; rejects an edge iff an endpoint already has degree k.
class MaxDegreeChecker final : public CheckerBase<MaxDegreeChecker> {
 public:
  explicit MaxDegreeChecker(int k);
  std::string name() const override { return "max_degree:" + std::to_string(k_); }

 protected:
  void on_reset() override {}
  bool admits(int i, int j) override;
  void on_insert(int, int) override {}

 private:
  int k_;
};

/// Cycle gate by union-find, then a remove-leaves-twice test restricted to the
/// component the new edge would create.
class LobsterChecker final : public CheckerBase<LobsterChecker> {
 public:
  std::string name() const override { return "lobster"; }

 protected:
  void on_reset() override;
  bool admits(int i, int j) override;
  void on_insert(int i, int j) override;

 private:
  DisjointSets sets_;
  std::vector<std::vector<int>> members_;  // indexed by union-find root
  std::vector<int> degree_scratch_;
  std::vector<int> stamp_;
  int stamp_value_ = 0;
};

/// Tentative insert plus a left-right planarity test of the affected component.
/// Edges joining two components are accepted without a test (a bridge between planar
/// graphs keeps them planar).
class PlanarChecker final : public CheckerBase<PlanarChecker> {
 public:
  std::string name() const override { return "planar"; }

 protected:
  void on_reset() override { sets_.reset(n_); }
  bool admits(int i, int j) override;
  void on_insert(int i, int j) override { sets_.unite(i, j); }

 private:
  DisjointSets sets_;
  LeftRightPlanarity tester_;
  std::vector<int> local_id_;
  std::vector<int> queue_;
  std::vector<std::pair<int, int>> component_edges_;
};

std::unique_ptr<ConstraintChecker> make_checker(const Property& property);

using CheckerFactory = std::function<std::unique_ptr<ConstraintChecker>()>;
CheckerFactory checker_factory(const Property& property);

/// Resets `checker` to g's node count and inserts g's edges.
/// Throws std::invalid_argument if g violates the checker's property.
void seed_checker(ConstraintChecker& checker, const LabeledGraph& g);

/// Node pairs rejected earlier in the current reverse trajectory. Grows monotonically;
/// there is no per-pair removal.
class BlockingTable {
 public:
  bool contains(NodePair p) const { return blocked_.contains(p.key()); }
  void block(NodePair p) { blocked_.insert(p.key()); }
  std::size_t size() const noexcept { return blocked_.size(); }
  void clear() noexcept { blocked_.clear(); }

 private:
  std::unordered_set<std::uint64_t> blocked_;
};

}  // namespace construct
