#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "construct/graph.hpp"
#include "construct/rng.hpp"

namespace construct {

enum class Chain { node, edge };

/// keep * I + (1 - keep) * 1 m': stay put with probability keep, else redraw from m.
Eigen::MatrixXd marginal_transition(std::span<const double> marginals, double keep);

/// Noise schedules for the two categorical chains.
///
/// Nodes follow the marginal chain  Q_X^t = a_t I + (1 - a_t) 1 m_X'  with a cosine
/// schedule on the cumulative product. Edges follow the absorbing chain
/// Q_E^t = b_t I + (1 - b_t) 1 e_0', where e_0 is the no-edge state and
/// b_t = 1 - 1 / (T - t + 1), so the cumulative product is exactly 1 - t / T.
class NoiseSchedule {
 public:
  static constexpr double kDefaultCosineOffset = 0.008;

  NoiseSchedule() = default;

  /// Throws std::invalid_argument on T < 1 or marginals off the simplex.
  static NoiseSchedule build(int steps, std::vector<double> node_marginals, int edge_types,
                             double cosine_offset = kDefaultCosineOffset);

  int steps() const noexcept { return steps_; }
  int node_types() const noexcept { return static_cast<int>(node_marginals_.size()); }
  int edge_types() const noexcept { return edge_types_; }
  LabelSpaces spaces() const { return {node_types(), edge_types_}; }
  double cosine_offset() const noexcept { return cosine_offset_; }
  const std::vector<double>& node_marginals() const noexcept { return node_marginals_; }

  /// Per-step retention a_t and cumulative products, t in [0, T]; index 0 holds 1.
  double node_alpha(int t) const { return node_alpha_.at(static_cast<std::size_t>(t)); }
  double node_alpha_bar(int t) const { return node_alpha_bar_.at(static_cast<std::size_t>(t)); }
  double edge_alpha(int t) const { return edge_alpha_.at(static_cast<std::size_t>(t)); }
  double edge_alpha_bar(int t) const { return edge_alpha_bar_.at(static_cast<std::size_t>(t)); }

  /// Single-step matrices Q^t (t >= 1) and cumulative Q-bar^t (t >= 0), row-stochastic.
  Eigen::MatrixXd transition(Chain chain, int t) const;
  Eigen::MatrixXd transition_bar(Chain chain, int t) const;

  /// First t whose cumulative edge retention is at most `target`.
  int edge_step_for_alpha_bar(double target) const;

 private:
  Eigen::MatrixXd mix_with_limit(Chain chain, double keep) const;

  int steps_ = 0;
  int edge_types_ = 1;
  double cosine_offset_ = kDefaultCosineOffset;
  std::vector<double> node_marginals_;
  std::vector<double> node_alpha_, node_alpha_bar_;
  std::vector<double> edge_alpha_, edge_alpha_bar_;
};

/// Samples G^t ~ (X Qbar_X^t, E Qbar_E^t). Only existing edges are visited: under the
/// absorbing chain an absent pair stays absent and a present edge either keeps its
/// label or is deleted.
LabeledGraph apply_forward(const LabeledGraph& g, int t, const NoiseSchedule& schedule, Rng& rng);

/// One forward step: G^t ~ (X^{t-1} Q_X^t, E^{t-1} Q_E^t), drawn for every node and every
/// pair including absent ones.
LabeledGraph apply_forward_step(const LabeledGraph& g_prev, int t, const NoiseSchedule& schedule, Rng& rng);

/// q(x^{t-1} | x^t = current, x^0 = clean) for one categorical variable.
/// `possible` is false (and probs is the zero vector) when q(x^t | x^0) = 0.
struct Posterior {
  std::vector<double> probs;
  bool possible = false;
};
Posterior posterior_dist(int current, int clean, int t, const NoiseSchedule& schedule, Chain chain);

/// Precomputed posterior weights for one timestep:
/// weight(s, x, k) = Q^t[k, s] Qbar^{t-1}[x, k] / Qbar^t[x, s]  (0 where the denominator is 0).
class PosteriorTable {
 public:
  PosteriorTable(const NoiseSchedule& schedule, Chain chain, int t);

  int states() const noexcept { return states_; }
  double weight(int current, int clean, int prev) const {
    return table_[(static_cast<std::size_t>(current) * states_ + clean) * states_ + prev];
  }

  /// Writes p(x^{t-1} | x^t = current) = sum_x post(. | x, current) p_hat(x), renormalised
  /// over clean states compatible with `current`. If the prediction puts no mass on any
  /// compatible clean state, falls back to a uniform prediction so the support stays valid.
  void marginalize(int current, std::span<const double> clean_probs, std::span<double> out) const;

 private:
  int states_;
  std::vector<double> table_;
};

/// Reverse-step distributions p(G^{t-1} | G^t) for every node and every unordered pair.
GraphDistributions reverse_step_dist(const LabeledGraph& g_t, const GraphDistributions& predictions,
                                     int t, const NoiseSchedule& schedule);

/// Samples a graph from per-node / per-pair distributions.
LabeledGraph sample_graph(const GraphDistributions& dist, Rng& rng);

}  // namespace construct
