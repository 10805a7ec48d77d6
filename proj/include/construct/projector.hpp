#pragma once

#include <cstddef>
#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "construct/constraints.hpp"
#include "construct/graph.hpp"
#include "construct/rng.hpp"

namespace construct {

enum class ProjectorOrdering { uniform_random, likelihood_deterministic, likelihood_stochastic };

/// Accepts "uniform", "det", "stoch" (and the long enum names).
ProjectorOrdering parse_projector_ordering(std::string_view text);
std::string ordering_name(ProjectorOrdering ordering);

/// Probability the reverse step assigned to the sampled label of a candidate pair.
using EdgeScorer = std::function<double(NodePair)>;

struct ProjectionStats {
  std::size_t candidates = 0;       // pairs absent in g_t, present in g_hat
  std::size_t skipped_blocked = 0;  // candidates found in the blocking table
  std::size_t queries = 0;          // checker try_insert calls
  std::size_t inserted = 0;
  std::size_t rejected = 0;
  /// Filled only when record_queries is set.
  bool record_queries = false;
  std::vector<NodePair> queried;

  ProjectionStats& operator+=(const ProjectionStats& o);
};

/// Candidate edges of g_hat over g_t, in lexicographic order.
std::vector<NodePair> candidate_edges(const LabeledGraph& g_t, const LabeledGraph& g_hat);

/// One projector pass. Inserts candidate edges one at a time in the order chosen by
/// `ordering`, keeping those the checker accepts. Rejected candidates go into
/// `blocking`; blocked candidates are skipped without a query.
///
/// Requires g_t's edges to be contained in g_hat's, and the checker state to hold exactly
/// g_t's edges. The result takes node labels from g_hat and edge labels from g_hat.
/// The likelihood orderings need `scorer`.
LabeledGraph project(const LabeledGraph& g_t, const LabeledGraph& g_hat, ProjectorOrdering ordering,
                     ConstraintChecker& checker, BlockingTable& blocking, Rng& rng,
                     const EdgeScorer& scorer = {}, ProjectionStats* stats = nullptr);

inline constexpr std::size_t kMaxEnumeratedCandidates = 10;

/// Every graph the projector can return over all candidate orderings, starting from a
/// fresh checker seeded with g_t and an empty blocking table.
/// Throws std::invalid_argument beyond kMaxEnumeratedCandidates candidates.
std::set<LabeledGraph> enumerate_projector_outputs(const LabeledGraph& g_t, const LabeledGraph& g_hat,
                                                   const CheckerFactory& factory);

}  // namespace construct
