#include "construct/noise_schedule.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace construct {

NoiseSchedule NoiseSchedule::build(int steps, std::vector<double> node_marginals, int edge_types,
                                   double cosine_offset) {
  if (steps < 1) throw std::invalid_argument("noise schedule: T must be >= 1");
  if (edge_types < 1) throw std::invalid_argument("noise schedule: edge_types must be >= 1");
  if (node_marginals.empty()) throw std::invalid_argument("noise schedule: empty node marginals");
  double total = 0.0;
  for (double m : node_marginals) {
    if (!(m >= 0.0) || !std::isfinite(m))
      throw std::invalid_argument("noise schedule: node marginals must be finite and >= 0");
    total += m;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("noise schedule: node marginals sum to " + std::to_string(total));
  if (!(cosine_offset >= 0.0)) throw std::invalid_argument("noise schedule: negative cosine offset");

  NoiseSchedule s;
  s.steps_ = steps;
  s.edge_types_ = edge_types;
  s.cosine_offset_ = cosine_offset;
  s.node_marginals_ = std::move(node_marginals);

  const auto size = static_cast<std::size_t>(steps) + 1;
  s.node_alpha_.assign(size, 1.0);
  s.node_alpha_bar_.assign(size, 1.0);
  s.edge_alpha_.assign(size, 1.0);
  s.edge_alpha_bar_.assign(size, 1.0);

  auto f = [&](int t) {
    const double phase = (static_cast<double>(t) / steps + cosine_offset) / (1.0 + cosine_offset);
    const double c = std::cos(phase * std::numbers::pi / 2.0);
    return c * c;
  };
  const double f0 = f(0);
  double prev_raw = 1.0;
  for (int t = 1; t <= steps; ++t) {
    const double raw = f(t) / f0;
    const double alpha = prev_raw > 0.0 ? std::clamp(raw / prev_raw, 0.0, 1.0) : 0.0;
    s.node_alpha_[t] = alpha;
    s.node_alpha_bar_[t] = s.node_alpha_bar_[t - 1] * alpha;
    prev_raw = raw;

    s.edge_alpha_[t] = static_cast<double>(steps - t) / (steps - t + 1);
    s.edge_alpha_bar_[t] = static_cast<double>(steps - t) / steps;
  }
  return s;
}

Eigen::MatrixXd marginal_transition(std::span<const double> marginals, double keep) {
  const auto b = static_cast<Eigen::Index>(marginals.size());
  Eigen::RowVectorXd m(b);
  for (Eigen::Index k = 0; k < b; ++k) m(k) = marginals[static_cast<std::size_t>(k)];
  Eigen::MatrixXd q = keep * Eigen::MatrixXd::Identity(b, b);
  q.rowwise() += (1.0 - keep) * m;
  return q;
}

Eigen::MatrixXd NoiseSchedule::mix_with_limit(Chain chain, double keep) const {
  if (chain == Chain::node) return marginal_transition(node_marginals_, keep);
  const int states = edge_types_ + 1;
  Eigen::MatrixXd q = keep * Eigen::MatrixXd::Identity(states, states);
  q.col(0).array() += 1.0 - keep;
  return q;
}

Eigen::MatrixXd NoiseSchedule::transition(Chain chain, int t) const {
  if (t < 1 || t > steps_) throw std::out_of_range("transition: t outside [1, T]");
  return mix_with_limit(chain, chain == Chain::node ? node_alpha(t) : edge_alpha(t));
}

Eigen::MatrixXd NoiseSchedule::transition_bar(Chain chain, int t) const {
  if (t < 0 || t > steps_) throw std::out_of_range("transition_bar: t outside [0, T]");
  return mix_with_limit(chain, chain == Chain::node ? node_alpha_bar(t) : edge_alpha_bar(t));
}

int NoiseSchedule::edge_step_for_alpha_bar(double target) const {
  for (int t = 0; t <= steps_; ++t)
    if (edge_alpha_bar(t) <= target) return t;
  return steps_;
}

LabeledGraph apply_forward(const LabeledGraph& g, int t, const NoiseSchedule& schedule, Rng& rng) {
  if (t < 1 || t > schedule.steps()) throw std::out_of_range("apply_forward: t outside [1, T]");
  const double node_keep = schedule.node_alpha_bar(t);
  const double edge_keep = schedule.edge_alpha_bar(t);
  const auto& marginals = schedule.node_marginals();

  LabeledGraph out(g.num_nodes());
  std::vector<double> row(marginals.size());
  for (int v = 0; v < g.num_nodes(); ++v) {
    const int x = g.node_label(v);
    for (std::size_t k = 0; k < row.size(); ++k) row[k] = (1.0 - node_keep) * marginals[k];
    row.at(static_cast<std::size_t>(x)) += node_keep;
    out.set_node_label(v, static_cast<int>(sample_categorical(row, rng)));
  }
  for (const auto& [p, label] : g.edges()) {
    if (uniform01(rng) < edge_keep) out.set_edge(p.i, p.j, label);
  }
  return out;
}

LabeledGraph apply_forward_step(const LabeledGraph& g, int t, const NoiseSchedule& schedule, Rng& rng) {
  if (t < 1 || t > schedule.steps()) throw std::out_of_range("apply_forward_step: t outside [1, T]");
  const Eigen::MatrixXd qx = schedule.transition(Chain::node, t);
  const Eigen::MatrixXd qe = schedule.transition(Chain::edge, t);
  auto draw = [&](const Eigen::MatrixXd& q, int from) {
    const Eigen::RowVectorXd row = q.row(from);
    return static_cast<int>(sample_categorical(std::span<const double>(row.data(), row.size()), rng));
  };
  const int n = g.num_nodes();
  LabeledGraph out(n);
  for (int v = 0; v < n; ++v) out.set_node_label(v, draw(qx, g.node_label(v)));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const int e = draw(qe, g.edge_label(i, j));
      if (e != 0) out.set_edge(i, j, e);
    }
  return out;
}

PosteriorTable::PosteriorTable(const NoiseSchedule& schedule, Chain chain, int t)
    : states_(chain == Chain::node ? schedule.node_types() : schedule.edge_types() + 1) {
  if (t < 1 || t > schedule.steps()) throw std::out_of_range("posterior: t outside [1, T]");
  const Eigen::MatrixXd q = schedule.transition(chain, t);
  const Eigen::MatrixXd q_bar_prev = schedule.transition_bar(chain, t - 1);
  const Eigen::MatrixXd q_bar = schedule.transition_bar(chain, t);
  const auto k = static_cast<std::size_t>(states_);
  table_.assign(k * k * k, 0.0);
  for (int s = 0; s < states_; ++s) {
    for (int x = 0; x < states_; ++x) {
      const double denom = q_bar(x, s);
      if (!(denom > 0.0)) continue;
      for (int prev = 0; prev < states_; ++prev)
        table_[(s * k + x) * k + prev] = q(prev, s) * q_bar_prev(x, prev) / denom;
    }
  }
}

void PosteriorTable::marginalize(int current, std::span<const double> clean_probs,
                                 std::span<double> out) const {
  constexpr double kFloor = 1e-30;
  std::fill(out.begin(), out.end(), 0.0);
  double total = 0.0;
  for (int x = 0; x < states_; ++x) {
    const double w = clean_probs[x];
    if (w == 0.0) continue;
    for (int prev = 0; prev < states_; ++prev) {
      const double v = w * weight(current, x, prev);
      out[prev] += v;
      total += v;
    }
  }
  if (total < kFloor) {
    total = 0.0;
    for (int x = 0; x < states_; ++x)
      for (int prev = 0; prev < states_; ++prev) {
        const double v = weight(current, x, prev);
        out[prev] += v;
        total += v;
      }
  }
  for (double& v : out) v /= total;
}

Posterior posterior_dist(int current, int clean, int t, const NoiseSchedule& schedule, Chain chain) {
  const PosteriorTable table(schedule, chain, t);
  if (current < 0 || current >= table.states() || clean < 0 || clean >= table.states())
    throw std::out_of_range("posterior_dist: state outside label space");
  Posterior post;
  post.probs.assign(static_cast<std::size_t>(table.states()), 0.0);
  double total = 0.0;
  for (int prev = 0; prev < table.states(); ++prev) {
    post.probs[prev] = table.weight(current, clean, prev);
    total += post.probs[prev];
  }
  post.possible = total > 0.0;
  return post;
}

GraphDistributions reverse_step_dist(const LabeledGraph& g_t, const GraphDistributions& predictions,
                                     int t, const NoiseSchedule& schedule) {
  const int n = g_t.num_nodes();
  if (predictions.n != n) throw std::invalid_argument("reverse_step_dist: prediction size mismatch");
  if (!(predictions.spaces == schedule.spaces()))
    throw std::invalid_argument("reverse_step_dist: label spaces mismatch");

  const PosteriorTable nodes(schedule, Chain::node, t);
  const PosteriorTable edges(schedule, Chain::edge, t);
  GraphDistributions out(predictions.spaces, n);
  for (int v = 0; v < n; ++v) nodes.marginalize(g_t.node_label(v), predictions.node(v), out.node(v));

  // Most pairs are absent: marginalise those from the prediction, then overwrite present
  // edges, which the absorbing chain pins to their current label.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const std::size_t p = pair_index(i, j, n);
      edges.marginalize(0, predictions.edge_at(p), out.edge_at(p));
    }
  for (const auto& [pair, label] : g_t.edges()) {
    const std::size_t p = pair_index(pair.i, pair.j, n);
    edges.marginalize(label, predictions.edge_at(p), out.edge_at(p));
  }
  return out;
}

LabeledGraph sample_graph(const GraphDistributions& dist, Rng& rng) {
  LabeledGraph g(dist.n);
  for (int v = 0; v < dist.n; ++v)
    g.set_node_label(v, static_cast<int>(sample_categorical(dist.node(v), rng)));
  for (int i = 0; i < dist.n; ++i)
    for (int j = i + 1; j < dist.n; ++j) {
      const auto row = dist.edge(i, j);
      // Fast path for the common "stays absent" case.
      if (row[0] >= 1.0) continue;
      const auto label = static_cast<int>(sample_categorical(row, rng));
      if (label != 0) g.set_edge(i, j, label);
    }
  return g;
}

}  // namespace construct
