#include "construct/projector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_set>

namespace construct {

ProjectorOrdering parse_projector_ordering(std::string_view text) {
  if (text == "uniform" || text == "uniform_random") return ProjectorOrdering::uniform_random;
  if (text == "det" || text == "likelihood_deterministic")
    return ProjectorOrdering::likelihood_deterministic;
  if (text == "stoch" || text == "likelihood_stochastic")
    return ProjectorOrdering::likelihood_stochastic;
  throw std::invalid_argument("unknown projector ordering '" + std::string(text) +
                              "' (expected uniform|det|stoch)");
}

std::string ordering_name(ProjectorOrdering ordering) {
  switch (ordering) {
    case ProjectorOrdering::uniform_random: return "uniform";
    case ProjectorOrdering::likelihood_deterministic: return "det";
    case ProjectorOrdering::likelihood_stochastic: return "stoch";
  }
  return "uniform";
}

ProjectionStats& ProjectionStats::operator+=(const ProjectionStats& o) {
  candidates += o.candidates;
  skipped_blocked += o.skipped_blocked;
  queries += o.queries;
  inserted += o.inserted;
  rejected += o.rejected;
  if (record_queries) queried.insert(queried.end(), o.queried.begin(), o.queried.end());
  return *this;
}

std::vector<NodePair> candidate_edges(const LabeledGraph& g_t, const LabeledGraph& g_hat) {
  std::vector<NodePair> out;
  for (const auto& [p, label] : g_hat.edges())
    if (!g_t.has_edge(p.i, p.j)) out.push_back(p);
  return out;
}

namespace {

void order_candidates(std::vector<NodePair>& cands, ProjectorOrdering ordering, Rng& rng,
                      const EdgeScorer& scorer) {
  switch (ordering) {
    case ProjectorOrdering::uniform_random:
      shuffle(std::span<NodePair>(cands), rng);
      return;
    case ProjectorOrdering::likelihood_deterministic: {
      if (!scorer) throw std::invalid_argument("project: deterministic ordering needs a scorer");
      std::vector<std::pair<double, NodePair>> keyed;
      keyed.reserve(cands.size());
      for (const auto& p : cands) keyed.emplace_back(scorer(p), p);
      // cands arrive in lexicographic order; stable sort keeps that as the tie-break.
      std::stable_sort(keyed.begin(), keyed.end(),
                       [](const auto& a, const auto& b) { return a.first > b.first; });
      for (std::size_t k = 0; k < cands.size(); ++k) cands[k] = keyed[k].second;
      return;
    }
    case ProjectorOrdering::likelihood_stochastic: {
      if (!scorer) throw std::invalid_argument("project: stochastic ordering needs a scorer");
      // Weighted sampling without replacement via exponential keys log(u) / w.
      std::vector<std::pair<double, NodePair>> keyed;
      keyed.reserve(cands.size());
      for (const auto& p : cands) {
        const double w = std::max(scorer(p), std::numeric_limits<double>::min());
        double u = uniform01(rng);
        if (u <= 0.0) u = std::numeric_limits<double>::min();
        keyed.emplace_back(std::log(u) / w, p);
      }
      std::stable_sort(keyed.begin(), keyed.end(),
                       [](const auto& a, const auto& b) { return a.first > b.first; });
      for (std::size_t k = 0; k < cands.size(); ++k) cands[k] = keyed[k].second;
      return;
    }
  }
}

}  // namespace

LabeledGraph project(const LabeledGraph& g_t, const LabeledGraph& g_hat, ProjectorOrdering ordering,
                     ConstraintChecker& checker, BlockingTable& blocking, Rng& rng,
                     const EdgeScorer& scorer, ProjectionStats* stats) {
  const int n = g_t.num_nodes();
  if (g_hat.num_nodes() != n) throw std::invalid_argument("project: node count mismatch");
  if (checker.num_nodes() != n || checker.edge_count() != g_t.num_edges())
    throw std::invalid_argument("project: checker state does not match g_t");
  if (!edges_subset_of(g_t, g_hat))
    throw std::invalid_argument("project: g_t is not contained in g_hat");

  auto cands = candidate_edges(g_t, g_hat);
  order_candidates(cands, ordering, rng, scorer);

  LabeledGraph out = g_t;
  out.set_node_labels(g_hat.node_labels());
  ProjectionStats local;
  local.candidates = cands.size();
  for (const auto& p : cands) {
    if (blocking.contains(p)) {
      ++local.skipped_blocked;
      continue;
    }
    ++local.queries;
    if (stats && stats->record_queries) local.queried.push_back(p);
    if (checker.try_insert(p.i, p.j)) {
      out.set_edge(p.i, p.j, g_hat.edge_label(p.i, p.j));
      ++local.inserted;
    } else {
      blocking.block(p);
      ++local.rejected;
    }
  }
  if (stats) {
    local.record_queries = stats->record_queries;
    *stats += local;
  }
  return out;
}

std::set<LabeledGraph> enumerate_projector_outputs(const LabeledGraph& g_t, const LabeledGraph& g_hat,
                                                   const CheckerFactory& factory) {
  if (!edges_subset_of(g_t, g_hat))
    throw std::invalid_argument("enumerate_projector_outputs: g_t is not contained in g_hat");
  const auto cands = candidate_edges(g_t, g_hat);
  if (cands.size() > kMaxEnumeratedCandidates)
    throw std::invalid_argument("enumerate_projector_outputs: " + std::to_string(cands.size()) +
                                " candidates exceed the limit of " +
                                std::to_string(kMaxEnumeratedCandidates));
  const auto k = static_cast<unsigned>(cands.size());
  const unsigned all = (1u << k) - 1;

  auto graph_with = [&](unsigned inserted) {
    LabeledGraph g = g_t;
    g.set_node_labels(g_hat.node_labels());
    for (unsigned c = 0; c < k; ++c)
      if (inserted >> c & 1u) g.set_edge(cands[c].i, cands[c].j, g_hat.edge_label(cands[c].i, cands[c].j));
    return g;
  };

  // State: (inserted set, decided set). Any undecided candidate may come next.
  std::set<LabeledGraph> outputs;
  std::unordered_set<std::uint64_t> seen;
  std::vector<std::pair<unsigned, unsigned>> stack{{0u, 0u}};
  while (!stack.empty()) {
    const auto [inserted, decided] = stack.back();
    stack.pop_back();
    if (!seen.insert(static_cast<std::uint64_t>(inserted) << 32 | decided).second) continue;
    if (decided == all) {
      outputs.insert(graph_with(inserted));
      continue;
    }
    auto base = factory();
    seed_checker(*base, graph_with(inserted));
    for (unsigned c = 0; c < k; ++c) {
      if (decided >> c & 1u) continue;
      auto trial = base->clone();
      const bool ok = trial->try_insert(cands[c].i, cands[c].j);
      stack.emplace_back(ok ? inserted | 1u << c : inserted, decided | 1u << c);
    }
  }
  return outputs;
}

}  // namespace construct
