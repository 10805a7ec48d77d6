#include "construct/sampler.hpp"

#include <algorithm>
#include <chrono>
#include <iostream>
#include <stdexcept>
#include <unordered_map>

#include "construct/parallel.hpp"

namespace construct {

SampleMode parse_sample_mode(std::string_view text) {
  if (text == "constrained") return SampleMode::constrained;
  if (text == "unconstrained") return SampleMode::unconstrained;
  if (text == "rejection") return SampleMode::rejection;
  if (text == "project_end" || text == "project_at_end") return SampleMode::project_at_end;
  throw std::invalid_argument("unknown sampling mode '" + std::string(text) +
                              "' (expected constrained|unconstrained|rejection|project_end)");
}

std::string mode_name(SampleMode mode) {
  switch (mode) {
    case SampleMode::constrained: return "constrained";
    case SampleMode::unconstrained: return "unconstrained";
    case SampleMode::rejection: return "rejection";
    case SampleMode::project_at_end: return "project_end";
  }
  return "constrained";
}

TrajectoryStats SampleResult::totals() const {
  TrajectoryStats t;
  for (const auto& s : stats) {
    t.proposed_edges += s.proposed_edges;
    t.distinct_pairs += s.distinct_pairs;
    t.checker_queries += s.checker_queries;
    t.max_queries_per_pair = std::max(t.max_queries_per_pair, s.max_queries_per_pair);
    t.blocked_pairs += s.blocked_pairs;
    t.inserted_edges += s.inserted_edges;
    t.wall_seconds += s.wall_seconds;
  }
  return t;
}

nlohmann::json SampleResult::summary() const {
  const auto t = totals();
  return {{"graphs", graphs.size()},
          {"attempts", attempts},
          {"acceptance_rate", acceptance_rate},
          {"exhausted", exhausted},
          {"wall_seconds", wall_seconds},
          {"proposed_edges", t.proposed_edges},
          {"distinct_proposed_pairs", t.distinct_pairs},
          {"checker_queries", t.checker_queries},
          {"max_queries_per_pair", t.max_queries_per_pair},
          {"blocked_pairs", t.blocked_pairs},
          {"inserted_edges", t.inserted_edges}};
}

LabeledGraph sample_trajectory(const Denoiser& denoiser, const NoiseSchedule& schedule, int n,
                               ConstraintChecker* checker, ProjectorOrdering ordering, Rng& rng,
                               TrajectoryStats* stats,
                               const std::function<void(int, const LabeledGraph&)>& observe) {
  const auto start = std::chrono::steady_clock::now();
  const int steps = schedule.steps();

  // Limit distribution: node labels from the marginals, no edges.
  LabeledGraph g(n);
  for (int v = 0; v < n; ++v)
    g.set_node_label(v, static_cast<int>(sample_categorical(schedule.node_marginals(), rng)));
  if (observe) observe(steps, g);

  BlockingTable blocking;
  std::unordered_map<std::uint64_t, std::size_t> queries_per_pair;
  std::unordered_map<std::uint64_t, char> proposed;
  ProjectionStats pstats;
  if (checker) checker->reset(n);

  for (int t = steps; t >= 1; --t) {
    const auto pred = denoiser.predict(g, t);
    const auto dist = reverse_step_dist(g, pred, t, schedule);
    LabeledGraph g_hat = sample_graph(dist, rng);
    if (stats)
      for (const auto& p : candidate_edges(g, g_hat)) proposed.emplace(p.key(), 1);
    if (checker) {
      const EdgeScorer scorer = [&](NodePair p) { return dist.edge(p.i, p.j)[g_hat.edge_label(p.i, p.j)]; };
      ProjectionStats step_stats;
      step_stats.record_queries = stats != nullptr;
      g = project(g, g_hat, ordering, *checker, blocking, rng, scorer, &step_stats);
      for (const auto& p : step_stats.queried) ++queries_per_pair[p.key()];
      pstats += step_stats;  // pstats itself does not record pairs
    } else {
      pstats.candidates += g_hat.num_edges() - g.num_edges();
      pstats.inserted += g_hat.num_edges() - g.num_edges();
      g = std::move(g_hat);
    }
    if (observe) observe(t - 1, g);
  }

  if (stats) {
    stats->proposed_edges = pstats.candidates;
    stats->distinct_pairs = proposed.size();
    stats->checker_queries = pstats.queries;
    stats->max_queries_per_pair = 0;
    for (const auto& [key, q] : queries_per_pair) stats->max_queries_per_pair = std::max(stats->max_queries_per_pair, q);
    stats->blocked_pairs = blocking.size();
    stats->inserted_edges = pstats.inserted;
    stats->wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return g;
}

namespace {

LabeledGraph run_one(const SampleRun& run, std::size_t index, SampleMode mode, TrajectoryStats& stats) {
  Rng rng(split_seed(run.seed, index));
  const int n = run.sizes.sample(rng);
  std::function<void(int, const LabeledGraph&)> observe;
  if (run.observer) observe = [&](int t, const LabeledGraph& g) { run.observer(index, t, g); };

  if (mode == SampleMode::constrained) {
    auto checker = make_checker(run.property);
    return sample_trajectory(*run.denoiser, *run.schedule, n, checker.get(), run.ordering, rng, &stats, observe);
  }
  LabeledGraph g =
      sample_trajectory(*run.denoiser, *run.schedule, n, nullptr, run.ordering, rng, &stats, observe);
  if (mode != SampleMode::project_at_end) return g;

  // One projector pass from the empty graph over the finished sample.
  auto checker = make_checker(run.property);
  checker->reset(n);
  BlockingTable blocking;
  ProjectionStats ps;
  const auto start = std::chrono::steady_clock::now();
  LabeledGraph out = project(without_edges(g), g, run.ordering, *checker, blocking, rng,
                             [](NodePair) { return 1.0; }, &ps);
  stats.checker_queries = ps.queries;
  stats.max_queries_per_pair = ps.queries > 0 ? 1 : 0;
  stats.blocked_pairs = blocking.size();
  stats.wall_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace

SampleResult sample(const SampleRun& run) {
  if (run.count < 1) throw std::invalid_argument("sample: count must be >= 1");
  if (!run.denoiser || !run.schedule) throw std::invalid_argument("sample: denoiser and schedule required");
  if (!(run.denoiser->spaces() == run.schedule->spaces()))
    throw std::invalid_argument("sample: denoiser and schedule label spaces differ");
  if (run.sizes.sizes.empty()) throw std::invalid_argument("sample: empty node count distribution");
  if ((run.mode == SampleMode::rejection || run.mode == SampleMode::project_at_end) &&
      run.property.kind == PropertyKind::none)
    throw std::invalid_argument("sample: mode " + mode_name(run.mode) + " requires a property");

  const auto start = std::chrono::steady_clock::now();
  SampleResult result;
  const auto count = static_cast<std::size_t>(run.count);

  if (run.mode != SampleMode::rejection) {
    result.graphs.resize(count);
    result.stats.resize(count);
    parallel_for(count, run.jobs, [&](std::size_t k) {
      result.graphs[k] = run_one(run, k, run.mode, result.stats[k]);
    });
    result.attempts = count;
  } else {
    // Batches are sized by what is still missing, so accepted indices never depend on
    // the worker count.
    const auto max_attempts = static_cast<std::size_t>(std::max(run.max_attempts, 0));
    std::size_t next = 0, valid = 0;
    while (result.graphs.size() < count && next < max_attempts) {
      const std::size_t batch = std::min(count - result.graphs.size(), max_attempts - next);
      std::vector<LabeledGraph> graphs(batch);
      std::vector<TrajectoryStats> stats(batch);
      std::vector<char> ok(batch, 0);
      parallel_for(batch, run.jobs, [&](std::size_t k) {
        graphs[k] = run_one(run, next + k, SampleMode::unconstrained, stats[k]);
        ok[k] = full_check(run.property, graphs[k]);
      });
      for (std::size_t k = 0; k < batch; ++k) {
        if (!ok[k]) continue;
        ++valid;
        if (result.graphs.size() < count) {
          result.graphs.push_back(std::move(graphs[k]));
          result.stats.push_back(stats[k]);
        }
      }
      next += batch;
    }
    result.attempts = next;
    result.acceptance_rate = next > 0 ? static_cast<double>(valid) / static_cast<double>(next) : 0.0;
    result.exhausted = result.graphs.size() < count;
    if (result.exhausted)
      std::cerr << "warning: rejection sampling kept " << result.graphs.size() << " of " << count
                << " graphs after " << next << " attempts\n";
  }
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace construct
