#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "construct/graph.hpp"

namespace construct {

/// Weisfeiler-Lehman colour refinement over node and edge labels.
/// Colours are content hashes, so they are comparable across graphs.
std::vector<std::uint64_t> wl_colors(const LabeledGraph& g, int rounds);

/// Isomorphism-invariant digest: n rounds of WL refinement followed by a sorted
/// multiset hash. Equal digests do not imply isomorphism; use exact_isomorphic.
std::uint64_t canonical_hash(const LabeledGraph& g);

/// Label-preserving isomorphism test by backtracking over WL colour classes.
/// Intended for n <= 128.
bool exact_isomorphic(const LabeledGraph& a, const LabeledGraph& g);

/// Buckets graphs by canonical_hash and resolves collisions exactly.
class IsomorphismIndex {
 public:
  /// Returns true and inserts `g` if no isomorphic graph is stored yet.
  bool insert(const LabeledGraph& g);
  bool contains(const LabeledGraph& g) const;
  std::size_t size() const noexcept { return size_; }

 private:
  std::unordered_multimap<std::uint64_t, LabeledGraph> buckets_;
  std::size_t size_ = 0;
};

}  // namespace construct
