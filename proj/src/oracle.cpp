#include "construct/oracle.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <sstream>
#include <stdexcept>

#include "construct/projector.hpp"

namespace construct {

std::size_t ged_uniform(const LabeledGraph& a, const LabeledGraph& g) {
  if (a.num_nodes() != g.num_nodes()) throw std::invalid_argument("ged_uniform: node count mismatch");
  std::size_t shared = 0;
  for (const auto& [p, label] : a.edges())
    if (g.has_edge(p.i, p.j)) ++shared;
  return a.num_edges() + g.num_edges() - 2 * shared;
}

void GedProjectionProblem::validate() const {
  if (g_t.num_nodes() != g_hat.num_nodes()) throw std::invalid_argument("problem: node count mismatch");
  if (!edges_subset_of(g_t, g_hat)) throw std::invalid_argument("problem: g_t is not inside g_hat");
  if (!full_check(property, g_t)) throw std::invalid_argument("problem: g_t violates " + property.name());
}

std::vector<NodePair> GedProjectionProblem::candidates() const { return candidate_edges(g_t, g_hat); }

std::string GedProjectionProblem::describe() const {
  std::ostringstream os;
  os << "property=" << property.name() << " n=" << g_t.num_nodes() << " g_t={";
  for (const auto& [p, label] : g_t.edges()) os << "(" << p.i << "," << p.j << ")";
  os << "} candidates={";
  for (const auto& p : candidates()) os << "(" << p.i << "," << p.j << ")";
  os << "}";
  return os.str();
}

std::set<LabeledGraph> optimal_projections(const GedProjectionProblem& problem) {
  problem.validate();
  const auto cands = problem.candidates();
  if (cands.size() > kMaxSubsetCandidates)
    throw std::invalid_argument("optimal_projections: " + std::to_string(cands.size()) +
                                " candidates exceed the limit of " + std::to_string(kMaxSubsetCandidates));
  const auto k = static_cast<unsigned>(cands.size());
  std::set<LabeledGraph> best;
  int best_size = -1;
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    const int size = std::popcount(mask);
    if (size < best_size) continue;
    LabeledGraph g = problem.g_t;
    g.set_node_labels(problem.g_hat.node_labels());
    for (unsigned c = 0; c < k; ++c)
      if (mask >> c & 1u)
        g.set_edge(cands[c].i, cands[c].j, problem.g_hat.edge_label(cands[c].i, cands[c].j));
    if (!full_check(problem.property, g)) continue;
    if (size > best_size) {
      best.clear();
      best_size = size;
    }
    best.insert(std::move(g));
  }
  return best;
}

bool verify_theorem1(const GedProjectionProblem& problem) {
  const auto optima = optimal_projections(problem);
  const auto outputs = enumerate_projector_outputs(problem.g_t, problem.g_hat, checker_factory(problem.property));
  return std::includes(outputs.begin(), outputs.end(), optima.begin(), optima.end());
}

int reached_components(const GedProjectionProblem& problem) {
  const auto comp = connected_components(problem.g_t);
  std::set<int> reached;
  for (const auto& p : problem.candidates()) {
    reached.insert(comp[p.i]);
    reached.insert(comp[p.j]);
  }
  return static_cast<int>(reached.size());
}

int acyclic_insertion_bound(const GedProjectionProblem& problem) {
  int count = 0;
  const auto comp = connected_components(problem.g_t, &count);
  DisjointSets quotient(count);
  std::set<int> reached;
  for (const auto& p : problem.candidates()) {
    reached.insert(comp[p.i]);
    reached.insert(comp[p.j]);
    quotient.unite(comp[p.i], comp[p.j]);
  }
  std::set<int> roots;
  for (int c : reached) roots.insert(quotient.find(c));
  return static_cast<int>(reached.size()) - static_cast<int>(roots.size());
}

bool verify_theorem2(const GedProjectionProblem& problem) {
  if (problem.property.kind != PropertyKind::acyclic)
    throw std::invalid_argument("verify_theorem2: property must be acyclic");
  const auto optima = optimal_projections(problem);
  const auto outputs = enumerate_projector_outputs(problem.g_t, problem.g_hat, checker_factory(problem.property));
  if (outputs != optima) return false;
  const auto expected = static_cast<std::size_t>(acyclic_insertion_bound(problem));
  for (const auto& g : outputs)
    if (g.num_edges() - problem.g_t.num_edges() != expected) return false;
  return true;
}

GedProjectionProblem random_fixture(const Property& property, int max_nodes, int max_candidates, Rng& rng) {
  if (max_nodes < 2 || max_candidates < 0) throw std::invalid_argument("random_fixture: bad bounds");
  const int n = 2 + static_cast<int>(uniform_index(static_cast<std::uint64_t>(max_nodes - 1), rng));

  std::vector<NodePair> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.push_back({i, j});
  shuffle(std::span<NodePair>(pairs), rng);

  GedProjectionProblem pr;
  pr.property = property;
  pr.g_t = LabeledGraph(n);
  for (int v = 0; v < n; ++v) pr.g_t.set_node_label(v, static_cast<int>(uniform_index(2, rng)));
  auto checker = make_checker(property);
  checker->reset(n);
  const double keep = 0.7 * uniform01(rng);
  std::vector<NodePair> absent;
  for (const auto& p : pairs) {
    if (uniform01(rng) < keep && checker->try_insert(p.i, p.j))
      pr.g_t.set_edge(p.i, p.j, 1 + static_cast<int>(uniform_index(2, rng)));
    else
      absent.push_back(p);
  }
  shuffle(std::span<NodePair>(absent), rng);
  const auto limit = std::min<std::size_t>(absent.size(), static_cast<std::size_t>(max_candidates));
  const auto k = static_cast<std::size_t>(uniform_index(limit + 1, rng));
  pr.g_hat = pr.g_t;
  for (std::size_t c = 0; c < k; ++c)
    pr.g_hat.set_edge(absent[c].i, absent[c].j, 1 + static_cast<int>(uniform_index(2, rng)));
  return pr;
}

std::set<std::size_t> output_cardinalities(const GedProjectionProblem& problem) {
  std::set<std::size_t> sizes;
  for (const auto& g : enumerate_projector_outputs(problem.g_t, problem.g_hat, checker_factory(problem.property)))
    sizes.insert(g.num_edges() - problem.g_t.num_edges());
  return sizes;
}

namespace {

GedProjectionProblem make_fixture(const Property& property, int n,
                                  std::initializer_list<std::pair<int, int>> base,
                                  std::initializer_list<std::pair<int, int>> candidates) {
  GedProjectionProblem pr;
  pr.property = property;
  pr.g_t = LabeledGraph(n);
  for (const auto& [i, j] : base) pr.g_t.set_edge(i, j);
  pr.g_hat = pr.g_t;
  for (const auto& [i, j] : candidates) pr.g_hat.set_edge(i, j);
  return pr;
}

}  // namespace

GedProjectionProblem counterexample_fixture(const Property& property) {
  switch (property.kind) {
    case PropertyKind::max_degree:
      if (property.max_degree != 1) break;
      // Path of three candidates: the middle one alone blocks both ends.
      return make_fixture(property, 4, {}, {{0, 1}, {1, 2}, {2, 3}});
    case PropertyKind::planar:
      // Ten edges on six nodes; {2,3} alone closes off both other candidates.
      return make_fixture(property, 6,
                          {{0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}, {1, 5}, {2, 4}, {3, 4}, {3, 5}, {4, 5}},
                          {{0, 2}, {2, 3}, {2, 5}});
    case PropertyKind::lobster:
      // Spider with two legs of length three on hub 0; candidates either extend the
      // third leg or join leaves.
      return make_fixture(property, 10, {{0, 1}, {1, 2}, {2, 3}, {0, 4}, {4, 5}, {5, 6}},
                          {{0, 7}, {7, 8}, {8, 9}, {3, 7}});
    default: break;
  }
  throw std::invalid_argument("no stored counter-example fixture for " + property.name());
}

}  // namespace construct
