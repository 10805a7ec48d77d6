#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "construct/constraints.hpp"
#include "construct/graph.hpp"
#include "construct/rng.hpp"

namespace construct {

/// Uniform-cost edit distance on a fixed node set with edge insertions and deletions
/// only: the size of the symmetric difference of the edge sets. Labels are ignored.
std::size_t ged_uniform(const LabeledGraph& a, const LabeledGraph& g);

/// One projection step: recover a closest P-satisfying graph between g_t and g_hat.
struct GedProjectionProblem {
  LabeledGraph g_t;
  LabeledGraph g_hat;
  Property property;

  /// Throws unless g_t's edges lie in g_hat and g_t satisfies the property.
  void validate() const;
  std::vector<NodePair> candidates() const;
  std::string describe() const;
};

inline constexpr std::size_t kMaxSubsetCandidates = 16;

/// Every maximum-cardinality candidate subset S with P(g_t + S), as graphs carrying
/// g_hat's labels. Exhaustive over subsets; throws past kMaxSubsetCandidates.
std::set<LabeledGraph> optimal_projections(const GedProjectionProblem& problem);

/// Every optimum is a possible projector output.
bool verify_theorem1(const GedProjectionProblem& problem);

/// Distinct components of g_t touched by candidate edges.
int reached_components(const GedProjectionProblem& problem);
/// Most candidate edges an acyclic projection can keep: reached components minus the
/// number of components of the candidate graph over those components.
int acyclic_insertion_bound(const GedProjectionProblem& problem);

/// For P = acyclic: projector outputs and optima coincide, and every output inserts
/// exactly acyclic_insertion_bound edges.
bool verify_theorem2(const GedProjectionProblem& problem);

/// Random fixture: n in [2, max_nodes], g_t grown under the property, then up to
/// max_candidates absent pairs added to form g_hat.
GedProjectionProblem random_fixture(const Property& property, int max_nodes, int max_candidates, Rng& rng);

/// Distinct new-edge counts over all projector outputs.
std::set<std::size_t> output_cardinalities(const GedProjectionProblem& problem);

/// Stored fixtures whose projector outputs differ in size.
/// Available for planar, max_degree:1 and lobster; throws for other properties.
GedProjectionProblem counterexample_fixture(const Property& property);

}  // namespace construct
