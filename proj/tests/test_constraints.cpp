#include <doctest.h>

#include <vector>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/boyer_myrvold_planar_test.hpp>

#include "construct/constraints.hpp"
#include "construct/planarity.hpp"
#include "test_util.hpp"

using namespace construct;
using testutil::make_graph;

namespace {

bool boost_planar(const LabeledGraph& g) {
  using BoostGraph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;
  BoostGraph bg(static_cast<std::size_t>(g.num_nodes()));
  for (const auto& [p, label] : g.edges()) boost::add_edge(p.i, p.j, bg);
  return boost::boyer_myrvold_planarity_test(bg);
}

bool insert(ConstraintChecker& c, int i, int j) { return c.try_insert(i, j); }

/// Checker accept/reject sequence against whole-graph recomputation on a random stream.
int stream_mismatches(const Property& property, int n, Rng& rng) {
  auto checker = make_checker(property);
  checker->reset(n);
  LabeledGraph g(n);
  std::vector<NodePair> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.push_back({i, j});
  shuffle(std::span<NodePair>(pairs), rng);
  pairs.resize(std::min<std::size_t>(pairs.size(), static_cast<std::size_t>(3 * n)));
  int mismatches = 0;
  for (const auto& p : pairs) {
    auto h = g;
    h.set_edge(p.i, p.j);
    const bool expect = full_check(property, h);
    const bool got = checker->try_insert(p.i, p.j);
    if (got != expect) ++mismatches;
    if (expect) g = h;
    if (got != expect) break;
  }
  return mismatches;
}

}  // namespace

TEST_CASE("property names round trip") {
  for (const char* text : {"none", "planar", "acyclic", "lobster", "max_degree:4", "max_degree:0"})
    CHECK(Property::parse(text).name() == text);
  CHECK(Property::parse("max_degree:3").max_degree == 3);
  for (const char* bad : {"", "Planar", "max_degree:", "max_degree:-1", "max_degree:2x", "triangle_free"})
    CHECK_THROWS_AS(Property::parse(bad), std::invalid_argument);
}

TEST_CASE("disjoint sets") {
  DisjointSets s(5);
  CHECK(s.find(3) == 3);
  s.unite(0, 1);
  s.unite(3, 4);
  CHECK(s.find(0) == s.find(1));
  CHECK(s.find(1) != s.find(3));
  s.unite(1, 4);
  CHECK(s.find(0) == s.find(3));
  CHECK(s.size_of(4) == 4);
  CHECK(s.size_of(2) == 1);
}

TEST_CASE("acyclic checker") {
  AcyclicChecker c;
  c.reset(4);
  CHECK(insert(c, 1, 2));  // components {1,2},{3}
  CHECK(insert(c, 2, 3));
  CHECK_FALSE(insert(c, 1, 3));
  CHECK(c.edge_count() == 2);

  AcyclicChecker fresh;
  fresh.reset(3);
  CHECK(insert(fresh, 0, 2));

  AcyclicChecker s;
  seed_checker(s, testutil::star(5));
  CHECK_FALSE(insert(s, 1, 2));
  CHECK_FALSE(full_check(Property::parse("acyclic"), make_graph(6, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}, {1, 2}})));
}

TEST_CASE("lobster checker") {
  SUBCASE("paths extended at an end") {
    for (int n = 2; n < 12; ++n) {
      LobsterChecker c;
      c.reset(n + 1);
      for (int v = 0; v + 1 < n; ++v) CHECK(insert(c, v, v + 1));
      auto snap = c.snapshot();
      CHECK(insert(c, n - 1, n));
      c.restore(*snap);
      CHECK(insert(c, n, 0));
      if (n >= 3) CHECK_FALSE(insert(c, n - 1, n));  // would close a cycle
    }
  }
  SUBCASE("caterpillar plus a leaf on a leaf") {
    LobsterChecker c;
    seed_checker(c, make_graph(6, {{0, 1}, {1, 2}, {2, 3}, {1, 4}}));
    CHECK(insert(c, 4, 5));
    CHECK(full_check(Property::parse("lobster"), make_graph(6, {{0, 1}, {1, 2}, {2, 3}, {1, 4}, {4, 5}})));
  }
  SUBCASE("spider with three legs of length three") {
    const auto base = make_graph(10, {{0, 1}, {1, 2}, {2, 3}, {0, 4}, {4, 5}, {5, 6}, {0, 7}, {7, 8}});
    LobsterChecker c;
    seed_checker(c, base);
    CHECK_FALSE(insert(c, 8, 9));
    auto full = base;
    full.set_edge(8, 9);
    CHECK_FALSE(full_check(Property::parse("lobster"), full));
    CHECK(full_check(Property::parse("lobster"), base));
  }
}

TEST_CASE("planar checker") {
  SUBCASE("K5 minus an edge") {
    auto g = testutil::complete(5);
    g.remove_edge(3, 4);
    PlanarChecker c;
    seed_checker(c, g);
    CHECK_FALSE(insert(c, 3, 4));
  }
  SUBCASE("K33 minus an edge") {
    LabeledGraph g(6);
    for (int a = 0; a < 3; ++a)
      for (int b = 3; b < 6; ++b)
        if (!(a == 2 && b == 5)) g.set_edge(a, b);
    PlanarChecker c;
    seed_checker(c, g);
    CHECK_FALSE(insert(c, 2, 5));
  }
  SUBCASE("every tree plus chord on four nodes") {
    // All 16 labelled trees on 4 nodes, then each chord.
    for (int mask = 0; mask < 64; ++mask) {
      LabeledGraph t(4);
      std::vector<NodePair> all;
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) all.push_back({i, j});
      for (int e = 0; e < 6; ++e)
        if (mask >> e & 1) t.set_edge(all[e].i, all[e].j);
      if (t.num_edges() != 3 || !is_connected(t)) continue;
      for (const auto& p : all) {
        if (t.has_edge(p.i, p.j)) continue;
        PlanarChecker c;
        seed_checker(c, t);
        CHECK(insert(c, p.i, p.j));
      }
    }
  }
}

TEST_CASE("max degree checker") {
  MaxDegreeChecker one(1);
  one.reset(4);
  CHECK(insert(one, 1, 2));
  CHECK_FALSE(insert(one, 2, 3));

  MaxDegreeChecker two(2);
  seed_checker(two, make_graph(4, {{1, 2}, {2, 3}}));
  CHECK(insert(two, 1, 3));
}

TEST_CASE("full checks on small fixtures") {
  const auto planar = Property::parse("planar");
  const auto acyclic = Property::parse("acyclic");
  const auto lobster = Property::parse("lobster");
  const auto tree = make_graph(6, {{0, 1}, {0, 2}, {2, 3}, {2, 4}, {4, 5}});
  CHECK(full_check(acyclic, tree));
  CHECK(full_check(planar, tree));
  const auto c4 = testutil::cycle(4);
  CHECK_FALSE(full_check(acyclic, c4));
  CHECK(full_check(planar, c4));
  CHECK_FALSE(full_check(lobster, c4));
  CHECK(full_check(Property::parse("none"), testutil::complete(6)));
}

TEST_CASE("every graph on at most five nodes is planar except K5") {
  for (int n = 1; n <= 5; ++n) {
    std::vector<NodePair> all;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) all.push_back({i, j});
    int nonplanar = 0;
    for (unsigned mask = 0; mask < (1u << all.size()); ++mask) {
      LabeledGraph g(n);
      for (std::size_t e = 0; e < all.size(); ++e)
        if (mask >> e & 1u) g.set_edge(all[e].i, all[e].j);
      const bool planar = full_check(Property::parse("planar"), g);
      CHECK(planar == boost_planar(g));
      if (!planar) {
        ++nonplanar;
        CHECK(g == testutil::complete(5));
      }
    }
    CHECK(nonplanar == (n == 5 ? 1 : 0));
  }
}

TEST_CASE("left-right planarity agrees with Boyer-Myrvold on random graphs") {
  Rng rng(17);
  int planar_seen = 0, nonplanar_seen = 0;
  for (int trial = 0; trial < 600; ++trial) {
    const int n = 3 + static_cast<int>(uniform_index(40, rng));
    // Densities around the planarity threshold of sparse random graphs.
    const double avg_degree = 1.0 + 5.0 * uniform01(rng);
    const auto g = testutil::random_graph(n, std::min(1.0, avg_degree / (n - 1)), 1, 1, rng);
    const bool expect = boost_planar(g);
    CHECK(is_planar(g) == expect);
    (expect ? planar_seen : nonplanar_seen)++;
  }
  CHECK(planar_seen > 50);
  CHECK(nonplanar_seen > 50);
}

TEST_CASE("incremental checkers match whole-graph recomputation") {
  Rng rng(23);
  for (const char* name : {"acyclic", "lobster", "planar", "max_degree:1", "max_degree:3", "none"}) {
    const auto property = Property::parse(name);
    int mismatches = 0;
    for (int stream = 0; stream < 300; ++stream) {
      const int n = 2 + static_cast<int>(uniform_index(29, rng));
      mismatches += stream_mismatches(property, n, rng);
    }
    INFO(name);
    CHECK(mismatches == 0);
  }
}

TEST_CASE("checker input validation") {
  AcyclicChecker c;
  c.reset(3);
  CHECK_THROWS_AS(c.try_insert(0, 0), std::invalid_argument);
  CHECK_THROWS_AS(c.try_insert(0, 3), std::out_of_range);
  CHECK(c.try_insert(0, 1));
  CHECK_THROWS_AS(c.try_insert(1, 0), std::invalid_argument);
  CHECK_THROWS_AS(seed_checker(c, testutil::cycle(3)), std::invalid_argument);
}

TEST_CASE("snapshot and restore") {
  for (const char* name : {"acyclic", "lobster", "planar", "max_degree:2"}) {
    auto c = make_checker(Property::parse(name));
    seed_checker(*c, testutil::path(6));
    const auto snap = c->snapshot();
    const auto before = c->edges();
    c->try_insert(0, 5);
    c->try_insert(1, 4);
    c->restore(*snap);
    CHECK(c->edges() == before);
    CHECK(c->edge_count() == 5);
    // Same decisions as a checker that never saw the extra inserts.
    auto fresh = make_checker(Property::parse(name));
    seed_checker(*fresh, testutil::path(6));
    CHECK(c->try_insert(0, 5) == fresh->try_insert(0, 5));
    CHECK(c->try_insert(2, 4) == fresh->try_insert(2, 4));
  }
  AcyclicChecker a;
  PlanarChecker p;
  CHECK_THROWS_AS(a.restore(p), std::invalid_argument);
}

TEST_CASE("blocking table") {
  BlockingTable b;
  CHECK_FALSE(b.contains({1, 2}));
  b.block({1, 2});
  CHECK(b.contains(NodePair::of(2, 1)));
  CHECK(b.size() == 1);
  b.clear();
  CHECK(b.size() == 0);
}
