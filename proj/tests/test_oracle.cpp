#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "construct/oracle.hpp"
#include "construct/projector.hpp"
#include "test_util.hpp"

using namespace construct;
using testutil::make_graph;

namespace {

GedProjectionProblem problem(const char* property, LabeledGraph g_t, std::initializer_list<std::pair<int, int>> cands) {
  GedProjectionProblem pr;
  pr.property = Property::parse(property);
  pr.g_hat = g_t;
  for (const auto& [i, j] : cands) pr.g_hat.set_edge(i, j);
  pr.g_t = std::move(g_t);
  return pr;
}

// Greedy insertion over every order of the candidates, checked on whole graphs.
std::set<LabeledGraph> greedy_over_all_orders(const GedProjectionProblem& pr) {
  auto cands = pr.candidates();
  std::vector<int> order(cands.size());
  std::iota(order.begin(), order.end(), 0);
  std::set<LabeledGraph> out;
  do {
    LabeledGraph g = pr.g_t;
    g.set_node_labels(pr.g_hat.node_labels());
    for (int k : order) {
      auto h = g;
      h.set_edge(cands[k].i, cands[k].j, pr.g_hat.edge_label(cands[k].i, cands[k].j));
      if (full_check(pr.property, h)) g = std::move(h);
    }
    out.insert(std::move(g));
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

// Largest number of candidates that can be added while keeping the property.
int brute_force_max_insertions(const GedProjectionProblem& pr) {
  const auto cands = pr.candidates();
  int best = 0;
  for (unsigned mask = 0; mask < (1u << cands.size()); ++mask) {
    auto g = pr.g_t;
    for (std::size_t c = 0; c < cands.size(); ++c)
      if (mask >> c & 1u) g.set_edge(cands[c].i, cands[c].j);
    if (full_check(pr.property, g)) best = std::max(best, static_cast<int>(g.num_edges() - pr.g_t.num_edges()));
  }
  return best;
}

}  // namespace

TEST_CASE("ged examples") {
  const auto c4 = testutil::cycle(4);
  CHECK(ged_uniform(c4, c4) == 0);
  auto plus = c4;
  plus.set_edge(0, 2);
  CHECK(ged_uniform(c4, plus) == 1);
  CHECK(ged_uniform(c4, testutil::path(4)) == 1);
  CHECK(ged_uniform(testutil::path(4), make_graph(4, {{0, 2}, {1, 3}})) == 5);
  // Labels do not count.
  auto relabelled = c4;
  relabelled.set_node_label(1, 3);
  relabelled.set_edge(0, 1, 2);
  CHECK(ged_uniform(c4, relabelled) == 0);
  CHECK_THROWS_AS(ged_uniform(c4, LabeledGraph(5)), std::invalid_argument);
}

TEST_CASE("ged is a metric") {
  Rng rng(1);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(uniform_index(8, rng));
    const auto a = testutil::random_graph(n, 0.4, 1, 1, rng);
    const auto b = testutil::random_graph(n, 0.4, 1, 1, rng);
    const auto c = testutil::random_graph(n, 0.4, 1, 1, rng);
    CHECK(ged_uniform(a, a) == 0);
    CHECK(ged_uniform(a, b) == ged_uniform(b, a));
    CHECK((ged_uniform(a, b) == 0) == (edges_subset_of(a, b) && edges_subset_of(b, a)));
    CHECK(ged_uniform(a, c) <= ged_uniform(a, b) + ged_uniform(b, c));
  }
}

TEST_CASE("optimal projection examples") {
  SUBCASE("acyclic two-candidate fixture") {
    const auto pr = problem("acyclic", make_graph(3, {{0, 1}}), {{1, 2}, {0, 2}});
    const auto opt = optimal_projections(pr);
    CHECK(opt == std::set<LabeledGraph>{make_graph(3, {{0, 1}, {1, 2}}), make_graph(3, {{0, 1}, {0, 2}})});
    CHECK(verify_theorem1(pr));
    CHECK(verify_theorem2(pr));
  }
  SUBCASE("jointly valid candidates") {
    const auto pr = problem("planar", make_graph(5, {{0, 1}}), {{1, 2}, {2, 3}, {3, 4}, {4, 0}});
    const auto opt = optimal_projections(pr);
    CHECK(opt == std::set<LabeledGraph>{pr.g_hat});
  }
  SUBCASE("max_degree:1 path") {
    const auto pr = problem("max_degree:1", LabeledGraph(4), {{0, 1}, {1, 2}, {2, 3}});
    CHECK(optimal_projections(pr) == std::set<LabeledGraph>{make_graph(4, {{0, 1}, {2, 3}})});
    CHECK(verify_theorem1(pr));
  }
  SUBCASE("optima carry the proposal's labels") {
    auto pr = problem("acyclic", LabeledGraph(3), {{0, 1}});
    pr.g_hat.set_node_label(2, 1);
    pr.g_hat.set_edge(0, 1, 2);
    const auto opt = optimal_projections(pr);
    REQUIRE(opt.size() == 1);
    CHECK(*opt.begin() == pr.g_hat);
  }
  SUBCASE("zero candidates") {
    const auto pr = problem("lobster", testutil::path(5), {});
    CHECK(optimal_projections(pr) == std::set<LabeledGraph>{pr.g_t});
    CHECK(verify_theorem1(pr));
  }
}

TEST_CASE("problem validation") {
  CHECK_THROWS(optimal_projections(problem("acyclic", testutil::cycle(4), {})));
  GedProjectionProblem pr;
  pr.property = Property::parse("planar");
  pr.g_t = make_graph(3, {{0, 1}});
  pr.g_hat = make_graph(3, {{1, 2}});
  CHECK_THROWS(optimal_projections(pr));
  // Seventeen candidates exceed the subset limit.
  LabeledGraph g(8);
  auto big = problem("none", g, {});
  int added = 0;
  for (int i = 0; i < 8 && added < 17; ++i)
    for (int j = i + 1; j < 8 && added < 17; ++j, ++added) big.g_hat.set_edge(i, j);
  CHECK_THROWS(optimal_projections(big));
  CHECK_THROWS(verify_theorem2(problem("planar", LabeledGraph(3), {{0, 1}})));
}

TEST_CASE("projector outputs equal greedy insertion over all orders") {
  Rng rng(2);
  for (const char* name : {"planar", "acyclic", "lobster", "max_degree:1", "max_degree:2"}) {
    for (int trial = 0; trial < 60; ++trial) {
      const auto pr = random_fixture(Property::parse(name), 6, 6, rng);
      INFO(pr.describe());
      CHECK(enumerate_projector_outputs(pr.g_t, pr.g_hat, checker_factory(pr.property)) == greedy_over_all_orders(pr));
    }
  }
}

TEST_CASE("theorem 1 on random fixtures") {
  Rng rng(3);
  for (const char* name : {"planar", "acyclic", "lobster", "max_degree:1", "max_degree:3"}) {
    int failures = 0;
    for (int trial = 0; trial < 100; ++trial) {
      const auto pr = random_fixture(Property::parse(name), 6, 8, rng);
      failures += !verify_theorem1(pr);
    }
    INFO(name);
    CHECK(failures == 0);
  }
}

TEST_CASE("acyclic insertion bound matches brute force") {
  Rng rng(4);
  int applicable = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto pr = random_fixture(Property::parse("acyclic"), 7, 8, rng);
    INFO(pr.describe());
    CHECK(acyclic_insertion_bound(pr) == brute_force_max_insertions(pr));
    CHECK(verify_theorem2(pr));
    if (acyclic_insertion_bound(pr) == reached_components(pr) - 1) ++applicable;
  }
  CHECK(applicable > 0);
}

TEST_CASE("acyclic insertion examples") {
  // Candidates inside one component add nothing.
  const auto inside = problem("acyclic", make_graph(5, {{0, 1}, {1, 2}, {3, 4}}), {{0, 2}});
  CHECK(acyclic_insertion_bound(inside) == 0);
  CHECK(output_cardinalities(inside) == std::set<std::size_t>{0});
  CHECK(verify_theorem2(inside));

  // Empty g_t and a spanning tree of candidates: all of them go in.
  const auto spanning = problem("acyclic", LabeledGraph(5), {{0, 1}, {1, 2}, {1, 3}, {3, 4}});
  CHECK(acyclic_insertion_bound(spanning) == 4);
  CHECK(reached_components(spanning) == 5);
  CHECK(verify_theorem2(spanning));

  // Two disjoint candidates on an empty graph: four components reached, two insertions.
  const auto disjoint = problem("acyclic", LabeledGraph(4), {{0, 1}, {2, 3}});
  CHECK(reached_components(disjoint) == 4);
  CHECK(acyclic_insertion_bound(disjoint) == 2);
  CHECK(brute_force_max_insertions(disjoint) == 2);
  CHECK(verify_theorem2(disjoint));
}

TEST_CASE("counter-example fixtures give outputs of different sizes") {
  for (const char* name : {"planar", "max_degree:1", "lobster"}) {
    const auto pr = counterexample_fixture(Property::parse(name));
    INFO(pr.describe());
    CHECK_NOTHROW(pr.validate());
    const auto outputs = greedy_over_all_orders(pr);
    std::set<std::size_t> sizes;
    for (const auto& g : outputs) sizes.insert(g.num_edges() - pr.g_t.num_edges());
    CHECK(sizes.size() >= 2);
    CHECK(output_cardinalities(pr) == sizes);
    CHECK(verify_theorem1(pr));
    // Some output is strictly worse than the optimum.
    const auto best = optimal_projections(pr).begin()->num_edges();
    CHECK(std::any_of(outputs.begin(), outputs.end(), [&](const LabeledGraph& g) { return g.num_edges() < best; }));
  }
  CHECK_THROWS(counterexample_fixture(Property::parse("acyclic")));
}

TEST_CASE("random fixtures respect their bounds") {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto pr = random_fixture(Property::parse("planar"), 7, 8, rng);
    CHECK(pr.g_t.num_nodes() >= 2);
    CHECK(pr.g_t.num_nodes() <= 7);
    CHECK(pr.candidates().size() <= 8);
    CHECK_NOTHROW(pr.validate());
  }
  CHECK_THROWS(random_fixture(Property::parse("planar"), 1, 3, rng));
}
