#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "construct/denoiser.hpp"
#include "construct/features.hpp"
#include "gradcheck.hpp"
#include "test_util.hpp"

using namespace construct;
using testutil::make_graph;

TEST_CASE("node count distribution from a corpus") {
  const auto d = NodeCountDistribution::from_graphs({LabeledGraph(3), LabeledGraph(5)});
  CHECK(d.sizes == std::vector<int>{3, 5});
  CHECK(d.probs[0] == doctest::Approx(0.5));
  CHECK(d.probs[1] == doctest::Approx(0.5));
  CHECK(d.max_size() == 5);
  CHECK_THROWS(NodeCountDistribution::from_graphs({}));
  const auto back = NodeCountDistribution::from_json(d.to_json());
  CHECK(back.sizes == d.sizes);
  CHECK(back.probs == d.probs);
}

TEST_CASE("baseline fit: node and edge frequencies") {
  SUBCASE("all nodes of type 0") {
    const auto m = BaselineModel::fit({testutil::path(4)}, {1, 1});
    CHECK(m.node_probs() == std::vector<double>{1.0});
    const auto m2 = BaselineModel::fit({testutil::path(4)}, {2, 1});
    CHECK(m2.node_probs()[0] == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(m2.node_probs()[1] < 1e-5);
  }
  SUBCASE("one edge among two same-type pairs") {
    const auto m = BaselineModel::fit({make_graph(2, {{0, 1}}), LabeledGraph(2)}, {1, 1});
    const auto p = m.edge_probs(0, 0);
    CHECK(p[0] == doctest::Approx(0.5));
    CHECK(p[1] == doctest::Approx(0.5));
  }
  SUBCASE("type-pair table is symmetric") {
    LabeledGraph g(std::vector<int>{0, 1, 1});
    g.set_edge(0, 1);
    const auto m = BaselineModel::fit({g}, {2, 1});
    CHECK(m.edge_probs(0, 1)[1] == doctest::Approx(0.5));
    CHECK(m.edge_probs(1, 0)[1] == doctest::Approx(0.5));
    CHECK(m.edge_probs(1, 1)[0] == doctest::Approx(1.0).epsilon(1e-5));
  }
  CHECK_THROWS(BaselineModel::fit({}, {1, 1}));
}

TEST_CASE("baseline sampling extremes") {
  Rng rng(3);
  const BaselineModel empty({1, 1}, NodeCountDistribution::fixed(7), {1.0}, {1.0, 0.0});
  const BaselineModel full({1, 1}, NodeCountDistribution::fixed(7), {1.0}, {0.0, 1.0});
  for (int k = 0; k < 20; ++k) {
    const auto a = empty.sample(rng);
    CHECK(a.num_nodes() == 7);
    CHECK(a.num_edges() == 0);
    CHECK(full.sample(rng) == testutil::complete(7));
  }
}

TEST_CASE("baseline samples reproduce the edge table within three sigma") {
  // Types 0 and 1; 0-0 pairs link with 0.2, 0-1 with 0.5, 1-1 with 0.05.
  const std::vector<double> table = {0.8, 0.2, 0.5, 0.5, 0.5, 0.5, 0.95, 0.05};
  const BaselineModel m({2, 1}, NodeCountDistribution::fixed(6), {0.5, 0.5}, table);
  Rng rng(8);
  double pairs[2][2] = {}, edges[2][2] = {};
  for (int k = 0; k < 10000; ++k) {
    const auto g = m.sample(rng);
    for (int i = 0; i < 6; ++i)
      for (int j = i + 1; j < 6; ++j) {
        const int a = std::min(g.node_label(i), g.node_label(j)), b = std::max(g.node_label(i), g.node_label(j));
        pairs[a][b] += 1;
        edges[a][b] += g.has_edge(i, j);
      }
  }
  for (const auto& [a, b, p] : {std::tuple{0, 0, 0.2}, std::tuple{0, 1, 0.5}, std::tuple{1, 1, 0.05}}) {
    const double rate = edges[a][b] / pairs[a][b];
    const double sigma = std::sqrt(p * (1 - p) / pairs[a][b]);
    CHECK(std::abs(rate - p) < 3 * sigma);
  }
}

TEST_CASE("oracle denoiser returns unit masses at the clean labels") {
  LabeledGraph clean(std::vector<int>{1, 0, 2});
  clean.set_edge(0, 2, 2);
  const OracleDenoiser d(clean, {3, 2});
  const auto p = d.predict(LabeledGraph(3), 5);
  for (int v = 0; v < 3; ++v)
    for (int k = 0; k < 3; ++k) CHECK(p.node(v)[k] == (k == clean.node_label(v) ? 1.0 : 0.0));
  CHECK(p.edge(0, 2)[2] == 1.0);
  CHECK(p.edge(0, 1)[0] == 1.0);
  CHECK_NOTHROW(p.validate());
}

TEST_CASE("zero weights predict uniform distributions") {
  const FeaturizedDenoiser d({3, 2}, 50);
  Rng rng(1);
  const auto g = testutil::random_graph(9, 0.3, 3, 2, rng);
  const auto p = d.predict(g, 17);
  for (double v : p.node_probs) CHECK(v == doctest::Approx(1.0 / 3));
  for (double v : p.edge_probs) CHECK(v == doctest::Approx(1.0 / 3));
}

TEST_CASE("features and predictions permute with the graph") {
  Rng rng(12);
  FeaturizedDenoiser d({2, 2}, 40);
  for (auto* w : {&d.node_weights(), &d.edge_weights()})
    for (Eigen::Index k = 0; k < w->size(); ++k) w->data()[k] = 2.0 * uniform01(rng) - 1.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(uniform_index(12, rng));
    const auto g = testutil::random_graph(n, 0.35, 2, 2, rng);
    const auto perm = testutil::random_permutation(n, rng);
    const auto h = permuted(g, perm);
    const int t = 1 + static_cast<int>(uniform_index(40, rng));
    const auto pg = d.predict(g, t), ph = d.predict(h, t);
    for (int v = 0; v < n; ++v)
      for (int k = 0; k < 2; ++k) CHECK(pg.node(v)[k] == doctest::Approx(ph.node(perm[v])[k]).epsilon(1e-12));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const auto q = NodePair::of(perm[i], perm[j]);
        for (int k = 0; k < 3; ++k) CHECK(pg.edge(i, j)[k] == doctest::Approx(ph.edge(q.i, q.j)[k]).epsilon(1e-12));
      }
  }
}

TEST_CASE("feature layout") {
  const LabelSpaces s{3, 2};
  const auto f = compute_features(testutil::path(5), 3, 10, s);
  CHECK(f.node.rows() == 5);
  CHECK(f.node.cols() == node_feature_dim(s));
  CHECK(f.pair.rows() == 10);
  CHECK(f.pair.cols() == pair_feature_dim(s));
  CHECK(f.node.allFinite());
  CHECK(f.pair.allFinite());
}

TEST_CASE("analytic gradients match central differences") {
  Rng rng(77);
  const auto schedule = NoiseSchedule::build(30, {0.5, 0.3, 0.2}, 2);
  const FeaturizedDenoiser model({3, 2}, 30);
  for (int trial = 0; trial < 4; ++trial) {
    const auto clean = testutil::random_graph(10, 0.3, 3, 2, rng);
    const auto r = testutil::gradient_check(model, clean, schedule, 5.0, 100, rng);
    CHECK(r.worst_relative_error < 1e-4);
  }
}

TEST_CASE("lambda = 0 leaves the edge head without gradient") {
  Rng rng(5);
  FeaturizedDenoiser model({2, 1}, 20);
  for (auto* w : {&model.node_weights(), &model.edge_weights()})
    for (Eigen::Index k = 0; k < w->size(); ++k) w->data()[k] = uniform01(rng) - 0.5;
  const auto clean = testutil::random_graph(8, 0.4, 2, 1, rng);
  Eigen::MatrixXd gn = Eigen::MatrixXd::Zero(model.node_weights().rows(), model.node_weights().cols());
  Eigen::MatrixXd ge = Eigen::MatrixXd::Zero(model.edge_weights().rows(), model.edge_weights().cols());
  model.loss_and_gradient(clean, 3, clean, 0.0, &gn, &ge);
  CHECK(ge.cwiseAbs().maxCoeff() == 0.0);
  CHECK(gn.cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("training on one repeated graph at least halves the loss") {
  // K8 minus one edge. Once the noise has removed every edge, the pairs look alike, so
  // the loss cannot drop below the entropy of the edge density (about 0.77 at t = T here).
  // A sparser graph has a floor above half the starting loss.
  auto g = testutil::complete(8);
  g.remove_edge(0, 1);
  const std::vector<LabeledGraph> train(4, g);
  const auto schedule = NoiseSchedule::build(50, {1.0}, 1);
  TrainConfig cfg;
  cfg.steps = 2000;
  cfg.seed = 3;
  const auto state = train_denoiser(train, schedule, cfg);
  REQUIRE(state.loss_trace.size() == 2000);
  auto mean = [&](std::size_t from, std::size_t to) {
    double s = 0.0;
    for (std::size_t k = from; k < to; ++k) s += state.loss_trace[k];
    return s / static_cast<double>(to - from);
  };
  const double early = mean(0, 10);
  const double late = mean(1800, 2000);
  INFO("first 10 steps " << early << ", last 200 steps " << late);
  CHECK(late <= 0.5 * early);
}

TEST_CASE("training is deterministic for a seed") {
  Rng rng(2);
  std::vector<LabeledGraph> train;
  for (int k = 0; k < 5; ++k) train.push_back(testutil::random_graph(7, 0.3, 2, 1, rng));
  const auto schedule = NoiseSchedule::build(20, node_type_marginals(train, 2), 1);
  TrainConfig cfg;
  cfg.steps = 100;
  cfg.seed = 9;
  const auto a = train_denoiser(train, schedule, cfg);
  const auto b = train_denoiser(train, schedule, cfg);
  CHECK(a.model.node_weights() == b.model.node_weights());
  CHECK(a.model.edge_weights() == b.model.edge_weights());
  CHECK(a.loss_trace == b.loss_trace);
}

TEST_CASE("divergent training names the step") {
  const std::vector<LabeledGraph> train(2, testutil::complete(6));
  const auto schedule = NoiseSchedule::build(10, {1.0}, 1);
  TrainConfig cfg;
  cfg.steps = 200;
  cfg.learning_rate = std::numeric_limits<double>::infinity();
  try {
    train_denoiser(train, schedule, cfg);
    FAIL("no divergence reported");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("step") != std::string::npos);
  }
}

TEST_CASE("checkpoint round trip and schema guard") {
  Rng rng(4);
  std::vector<LabeledGraph> train;
  for (int k = 0; k < 3; ++k) train.push_back(testutil::random_graph(6, 0.4, 2, 1, rng));
  ModelBundle bundle;
  bundle.kind = "featurized";
  bundle.schedule = NoiseSchedule::build(25, node_type_marginals(train, 2), 1);
  bundle.sizes = NodeCountDistribution::from_graphs(train);
  bundle.config = {{"seed", 4}};
  TrainConfig cfg;
  cfg.steps = 20;
  auto state = train_denoiser(train, bundle.schedule, cfg);
  bundle.denoiser = std::make_shared<FeaturizedDenoiser>(state.model);

  const auto path = std::filesystem::temp_directory_path() / "construct_ckpt_test.json";
  save_bundle(bundle, path);
  const auto back = load_bundle(path);
  CHECK(back.kind == "featurized");
  CHECK(back.config == bundle.config);
  CHECK(back.schedule.steps() == 25);
  const auto g = train.front();
  const auto p1 = bundle.denoiser->predict(g, 7), p2 = back.denoiser->predict(g, 7);
  CHECK(p1.node_probs == p2.node_probs);
  CHECK(p1.edge_probs == p2.edge_probs);

  auto j = bundle_to_json(bundle);
  j["model"]["feature_schema"] = "construct.features.v0";
  CHECK_THROWS_AS(bundle_from_json(j), std::invalid_argument);
  j = bundle_to_json(bundle);
  j["schema"] = "something.else";
  CHECK_THROWS_AS(bundle_from_json(j), std::invalid_argument);

  ModelBundle base;
  base.kind = "baseline";
  base.schedule = bundle.schedule;
  base.sizes = bundle.sizes;
  base.denoiser = std::make_shared<BaselineModel>(BaselineModel::fit(train, {2, 1}));
  const auto base_back = bundle_from_json(bundle_to_json(base));
  CHECK(base_back.denoiser->predict(g, 1).edge_probs == base.denoiser->predict(g, 1).edge_probs);
  std::filesystem::remove(path);
}
