#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "construct/constraints.hpp"
#include "construct/denoiser.hpp"
#include "construct/noise_schedule.hpp"
#include "construct/projector.hpp"

namespace construct {

enum class SampleMode { constrained, unconstrained, rejection, project_at_end };

/// Accepts "constrained", "unconstrained", "rejection", "project_end"/"project_at_end".
SampleMode parse_sample_mode(std::string_view text);
std::string mode_name(SampleMode mode);

/// Called with (graph index, t, G^t) for t = T, ..., 0 of every trajectory.
/// Runs on worker threads; must be thread-safe when jobs > 1.
using TrajectoryObserver = std::function<void(std::size_t, int, const LabeledGraph&)>;

struct SampleRun {
  int count = 1;
  SampleMode mode = SampleMode::constrained;
  Property property;
  ProjectorOrdering ordering = ProjectorOrdering::uniform_random;
  std::uint64_t seed = 0;
  const Denoiser* denoiser = nullptr;
  const NoiseSchedule* schedule = nullptr;
  NodeCountDistribution sizes;
  /// Worker threads; 0 means hardware concurrency. Results do not depend on it.
  int jobs = 1;
  /// Total trajectories the rejection mode may spend.
  int max_attempts = 10000;
  TrajectoryObserver observer;
};

/// Per-trajectory projector accounting.
struct TrajectoryStats {
  std::size_t proposed_edges = 0;   // candidate edges over all steps
  std::size_t distinct_pairs = 0;   // distinct pairs ever proposed
  std::size_t checker_queries = 0;
  std::size_t max_queries_per_pair = 0;
  std::size_t blocked_pairs = 0;
  std::size_t inserted_edges = 0;
  double wall_seconds = 0.0;
};

struct SampleResult {
  std::vector<LabeledGraph> graphs;
  std::vector<TrajectoryStats> stats;  // one per returned graph
  std::size_t attempts = 0;            // trajectories run
  double acceptance_rate = 1.0;        // rejection mode only
  bool exhausted = false;              // rejection mode ran out of attempts
  double wall_seconds = 0.0;

  TrajectoryStats totals() const;
  nlohmann::json summary() const;
};

/// Runs `run.count` reverse trajectories in the requested mode. Trajectory k uses the
/// random stream split_seed(seed, k), so output is identical for any worker count.
SampleResult sample(const SampleRun& run);

/// One reverse trajectory. `checker` is null for unconstrained sampling.
LabeledGraph sample_trajectory(const Denoiser& denoiser, const NoiseSchedule& schedule, int n,
                               ConstraintChecker* checker, ProjectorOrdering ordering, Rng& rng,
                               TrajectoryStats* stats = nullptr,
                               const std::function<void(int, const LabeledGraph&)>& observe = {});

}  // namespace construct
