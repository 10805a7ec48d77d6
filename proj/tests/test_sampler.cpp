#include <doctest.h>

#include <cmath>
#include <map>

#include "construct/datasets.hpp"
#include "construct/sampler.hpp"
#include "test_util.hpp"

using namespace construct;

namespace {

// Trained on a handful of small lobsters; good enough to propose plenty of bad edges.
struct SmallModel {
  std::vector<LabeledGraph> train;
  NoiseSchedule schedule;
  FeaturizedDenoiser model;
};

const SmallModel& small_model() {
  static const SmallModel m = [] {
    Rng rng(5);
    LobsterParams params;
    params.backbone_min = 3;
    params.backbone_max = 8;
    params.min_nodes = 6;
    params.max_nodes = 20;
    auto train = gen_lobster(16, rng, params);
    auto schedule = NoiseSchedule::build(30, node_type_marginals(train, 1), 1);
    TrainConfig cfg;
    cfg.steps = 300;
    cfg.seed = 1;
    auto state = train_denoiser(train, schedule, cfg);
    return SmallModel{std::move(train), std::move(schedule), std::move(state.model)};
  }();
  return m;
}

SampleRun base_run(const SmallModel& m, SampleMode mode, const char* property, int count) {
  SampleRun run;
  run.count = count;
  run.mode = mode;
  run.property = Property::parse(property);
  run.seed = 11;
  run.denoiser = &m.model;
  run.schedule = &m.schedule;
  run.sizes = NodeCountDistribution::from_graphs(m.train);
  return run;
}

}  // namespace

TEST_CASE("mode names") {
  for (auto mode : {SampleMode::constrained, SampleMode::unconstrained, SampleMode::rejection,
                    SampleMode::project_at_end})
    CHECK(parse_sample_mode(mode_name(mode)) == mode);
  CHECK(parse_sample_mode("project_at_end") == SampleMode::project_at_end);
  CHECK_THROWS_AS(parse_sample_mode("guided"), std::invalid_argument);
}

TEST_CASE("constrained sampling satisfies the property at every step") {
  const auto& m = small_model();
  for (const char* name : {"planar", "acyclic", "lobster", "max_degree:2"}) {
    auto run = base_run(m, SampleMode::constrained, name, 12);
    const auto prop = run.property;
    std::map<std::size_t, LabeledGraph> previous;
    int violations = 0, shrinks = 0;
    run.observer = [&](std::size_t k, int, const LabeledGraph& g) {
      if (!full_check(prop, g)) ++violations;
      auto it = previous.find(k);
      if (it != previous.end() && !edges_subset_of(it->second, g)) ++shrinks;
      previous[k] = g;
    };
    const auto result = sample(run);
    INFO(name);
    REQUIRE(result.graphs.size() == 12);
    for (const auto& g : result.graphs) CHECK(full_check(prop, g));
    CHECK(violations == 0);
    CHECK(shrinks == 0);
  }
}

TEST_CASE("unconstrained trajectories only ever gain edges") {
  const auto& m = small_model();
  auto run = base_run(m, SampleMode::unconstrained, "none", 10);
  std::map<std::size_t, std::pair<int, LabeledGraph>> previous;
  int shrinks = 0, out_of_order = 0;
  run.observer = [&](std::size_t k, int t, const LabeledGraph& g) {
    auto it = previous.find(k);
    if (it != previous.end()) {
      if (it->second.first != t + 1) ++out_of_order;
      if (!edges_subset_of(it->second.second, g)) ++shrinks;
    } else if (t != m.schedule.steps()) {
      ++out_of_order;
    }
    previous[k] = {t, g};
  };
  const auto result = sample(run);
  CHECK(shrinks == 0);
  CHECK(out_of_order == 0);
  for (const auto& [k, last] : previous) CHECK(last.first == 0);
  std::size_t edges = 0;
  for (const auto& g : result.graphs) edges += g.num_edges();
  CHECK(edges > 0);
}

TEST_CASE("checker queries are bounded by distinct proposed pairs") {
  const auto& m = small_model();
  for (auto ordering : {ProjectorOrdering::uniform_random, ProjectorOrdering::likelihood_deterministic,
                        ProjectorOrdering::likelihood_stochastic}) {
    auto run = base_run(m, SampleMode::constrained, "acyclic", 15);
    run.ordering = ordering;
    const auto result = sample(run);
    std::size_t blocked = 0;
    for (std::size_t k = 0; k < result.graphs.size(); ++k) {
      const auto& s = result.stats[k];
      const auto n = result.graphs[k].num_nodes();
      CHECK(s.max_queries_per_pair <= 1);
      CHECK(s.checker_queries <= s.distinct_pairs);
      CHECK(s.distinct_pairs <= num_pairs(n));
      CHECK(s.distinct_pairs <= s.proposed_edges);
      CHECK(s.inserted_edges == result.graphs[k].num_edges());
      blocked += s.blocked_pairs;
    }
    // The model proposes cycles often enough that the projector has to reject some.
    CHECK(blocked > 0);
  }
}

TEST_CASE("output does not depend on the worker count") {
  const auto& m = small_model();
  for (auto mode : {SampleMode::constrained, SampleMode::unconstrained, SampleMode::rejection,
                    SampleMode::project_at_end}) {
    auto run = base_run(m, mode, "lobster", 8);
    run.max_attempts = 40;
    run.jobs = 1;
    const auto one = sample(run);
    run.jobs = 3;
    const auto three = sample(run);
    CHECK(one.graphs == three.graphs);
    CHECK(one.attempts == three.attempts);
    REQUIRE(one.stats.size() == three.stats.size());
    for (std::size_t k = 0; k < one.stats.size(); ++k) {
      CHECK(one.stats[k].checker_queries == three.stats[k].checker_queries);
      CHECK(one.stats[k].proposed_edges == three.stats[k].proposed_edges);
      CHECK(one.stats[k].blocked_pairs == three.stats[k].blocked_pairs);
    }
    run.seed = 12;
    CHECK(sample(run).graphs != one.graphs);
  }
}

TEST_CASE("rejection with a property every graph has accepts everything") {
  const auto& m = small_model();
  auto run = base_run(m, SampleMode::rejection, "max_degree:1000", 20);
  const auto result = sample(run);
  CHECK(result.acceptance_rate == 1.0);
  CHECK(result.attempts == 20);
  CHECK_FALSE(result.exhausted);
}

TEST_CASE("oracle denoiser on a valid graph") {
  const auto tree = testutil::make_graph(7, {{0, 1}, {1, 2}, {2, 3}, {1, 4}, {4, 5}, {3, 6}});
  const auto schedule = NoiseSchedule::build(15, {1.0}, 1);
  const OracleDenoiser oracle(tree, schedule.spaces());
  SampleRun run;
  run.count = 10;
  run.property = Property::parse("acyclic");
  run.denoiser = &oracle;
  run.schedule = &schedule;
  run.sizes = NodeCountDistribution::fixed(7);

  run.mode = SampleMode::rejection;
  const auto rejected = sample(run);
  CHECK(rejected.acceptance_rate == 1.0);
  for (const auto& g : rejected.graphs) CHECK(g == tree);

  // Nothing is ever rejected, so the projector leaves the trajectory alone.
  run.mode = SampleMode::constrained;
  const auto constrained = sample(run);
  run.mode = SampleMode::unconstrained;
  const auto unconstrained = sample(run);
  CHECK(constrained.graphs == unconstrained.graphs);
  for (const auto& s : constrained.stats) CHECK(s.blocked_pairs == 0);

  run.mode = SampleMode::project_at_end;
  for (const auto& g : sample(run).graphs) CHECK(g == tree);
}

TEST_CASE("project at end turns C4 into a spanning tree") {
  const auto c4 = testutil::cycle(4);
  const auto schedule = NoiseSchedule::build(10, {1.0}, 1);
  const OracleDenoiser oracle(c4, schedule.spaces());
  SampleRun run;
  run.count = 30;
  run.mode = SampleMode::project_at_end;
  run.property = Property::parse("acyclic");
  run.denoiser = &oracle;
  run.schedule = &schedule;
  run.sizes = NodeCountDistribution::fixed(4);
  std::set<LabeledGraph> seen;
  for (const auto& g : sample(run).graphs) {
    CHECK(g.num_edges() == 3);
    CHECK(is_connected(g));
    CHECK(edges_subset_of(g, c4));
    seen.insert(g);
  }
  CHECK(seen.size() > 1);  // the dropped edge varies with the order
}

TEST_CASE("project at end always satisfies the property") {
  const auto& m = small_model();
  for (const char* name : {"planar", "acyclic", "lobster", "max_degree:1"}) {
    const auto result = sample(base_run(m, SampleMode::project_at_end, name, 10));
    for (const auto& g : result.graphs) CHECK(full_check(Property::parse(name), g));
  }
}

TEST_CASE("rejection acceptance matches the unconstrained property rate") {
  // Baseline model on sparse 6-node graphs: roughly half of its samples are forests.
  Rng rng(8);
  std::vector<LabeledGraph> train;
  for (int k = 0; k < 40; ++k) train.push_back(testutil::random_graph(6, 0.15, 1, 1, rng));
  const auto schedule = NoiseSchedule::build(10, {1.0}, 1);
  const auto model = BaselineModel::fit(train, schedule.spaces());
  SampleRun run;
  run.count = 500;
  run.property = Property::parse("acyclic");
  run.denoiser = &model;
  run.schedule = &schedule;
  run.sizes = NodeCountDistribution::fixed(6);

  run.mode = SampleMode::unconstrained;
  run.seed = 100;
  const double rate = property_rate(sample(run).graphs, run.property);
  REQUIRE(rate > 0.1);
  REQUIRE(rate < 0.9);

  run.mode = SampleMode::rejection;
  run.max_attempts = 500;
  run.seed = 200;
  const auto rejected = sample(run);
  CHECK(rejected.attempts == 500);
  CHECK(rejected.exhausted);
  // Two independent proportions over 500 trials each.
  const double sigma = std::sqrt(2.0 * rate * (1.0 - rate) / 500.0);
  INFO("unconstrained " << rate << ", acceptance " << rejected.acceptance_rate);
  CHECK(std::abs(rejected.acceptance_rate - rate) < 3.0 * sigma);
  for (const auto& g : rejected.graphs) CHECK(full_check(run.property, g));

  // Same seed: rejection keeps exactly the valid unconstrained trajectories.
  run.mode = SampleMode::unconstrained;
  const double same_seed_rate = property_rate(sample(run).graphs, run.property);
  CHECK(rejected.acceptance_rate == same_seed_rate);
}

TEST_CASE("sample rejects bad runs") {
  const auto& m = small_model();
  auto run = base_run(m, SampleMode::rejection, "none", 2);
  CHECK_THROWS_AS(sample(run), std::invalid_argument);
  run.mode = SampleMode::project_at_end;
  CHECK_THROWS_AS(sample(run), std::invalid_argument);
  run = base_run(m, SampleMode::constrained, "planar", 0);
  CHECK_THROWS_AS(sample(run), std::invalid_argument);
  run = base_run(m, SampleMode::constrained, "planar", 1);
  run.denoiser = nullptr;
  CHECK_THROWS_AS(sample(run), std::invalid_argument);
  run = base_run(m, SampleMode::constrained, "planar", 1);
  const auto other = NoiseSchedule::build(30, {0.5, 0.5}, 1);
  run.schedule = &other;
  CHECK_THROWS_AS(sample(run), std::invalid_argument);
}

TEST_CASE("summary carries the accounting fields") {
  const auto& m = small_model();
  const auto result = sample(base_run(m, SampleMode::constrained, "acyclic", 3));
  const auto j = result.summary();
  for (const char* key : {"graphs", "attempts", "acceptance_rate", "proposed_edges", "distinct_proposed_pairs",
                          "checker_queries", "max_queries_per_pair", "blocked_pairs", "inserted_edges"})
    CHECK(j.contains(key));
  CHECK(j["graphs"] == 3);
}
