#include "construct/features.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace construct {

namespace {
constexpr double kDegreeScale = 8.0;
constexpr int kHistogramBins = 5;  // degree 0, 1, 2, 3, 4+
}  // namespace

int node_feature_dim(const LabelSpaces& s) { return 2 * s.node_types + s.edge_types + 4 + kHistogramBins; }

int pair_feature_dim(const LabelSpaces& s) {
  return s.edge_states() + 1 + kDistanceBuckets + 2 + 2 + s.node_types + kDistanceBuckets + 2;
}

GraphFeatures compute_features(const LabeledGraph& g, int t, int steps, const LabelSpaces& spaces) {
  if (steps < 1 || t < 0 || t > steps) throw std::out_of_range("compute_features: bad timestep");
  const int n = g.num_nodes();
  const int b = spaces.node_types, c = spaces.edge_types;
  const double tau = static_cast<double>(t) / steps;
  const auto adj = g.adjacency();
  const auto deg = g.degrees();

  std::vector<double> hist(kHistogramBins, 0.0), type_freq(static_cast<std::size_t>(b), 0.0),
      edge_freq(static_cast<std::size_t>(c), 0.0);
  double mean_degree = 0.0;
  for (int v = 0; v < n; ++v) {
    hist[std::min(deg[v], kHistogramBins - 1)] += 1.0;
    type_freq.at(static_cast<std::size_t>(g.node_label(v))) += 1.0;
    mean_degree += deg[v];
  }
  for (const auto& [p, label] : g.edges()) edge_freq.at(static_cast<std::size_t>(label - 1)) += 1.0;
  if (n > 0) {
    for (double& h : hist) h /= n;
    for (double& f : type_freq) f /= n;
    for (double& f : edge_freq) f /= n;
    mean_degree /= n;
  }
  const double density = n > 0 ? static_cast<double>(g.num_edges()) / n : 0.0;

  GraphFeatures out;
  out.node.setZero(n, node_feature_dim(spaces));
  for (int v = 0; v < n; ++v) {
    auto row = out.node.row(v);
    int k = 0;
    row(k + g.node_label(v)) = 1.0;
    k += b;
    row(k++) = tau;
    row(k++) = deg[v] / kDegreeScale;
    for (double h : hist) row(k++) = h;
    row(k++) = mean_degree / kDegreeScale;
    for (double f : type_freq) row(k++) = f;
    for (double f : edge_freq) row(k++) = f;
    row(k++) = 1.0;
  }

  // Hop distances up to kMaxHops; 0 marks "not reached".
  std::vector<int> dist(static_cast<std::size_t>(n) * n, 0);
  std::vector<int> queue;
  for (int s = 0; s < n; ++s) {
    int* d = dist.data() + static_cast<std::size_t>(s) * n;
    queue.assign(1, s);
    d[s] = -1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int v = queue[head];
      const int dv = v == s ? 0 : d[v];
      if (dv >= kMaxHops) continue;
      for (int w : adj[v])
        if (d[w] == 0) {
          d[w] = dv + 1;
          queue.push_back(w);
        }
    }
    d[s] = 0;
  }

  // Adamic-Adar: each common neighbour w contributes 1 / log(deg w).
  std::vector<double> adamic(num_pairs(n), 0.0);
  for (int w = 0; w < n; ++w) {
    if (deg[w] < 2) continue;
    const double inv = 1.0 / std::log(static_cast<double>(deg[w]));
    const auto& nb = adj[w];
    for (std::size_t a = 0; a < nb.size(); ++a)
      for (std::size_t bb = a + 1; bb < nb.size(); ++bb) {
        const int u = std::min(nb[a], nb[bb]), x = std::max(nb[a], nb[bb]);
        adamic[pair_index(u, x, n)] += inv;
      }
  }

  out.pair.setZero(static_cast<Eigen::Index>(num_pairs(n)), pair_feature_dim(spaces));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const auto p = static_cast<Eigen::Index>(pair_index(i, j, n));
      auto row = out.pair.row(p);
      const int d = dist[static_cast<std::size_t>(i) * n + j];
      const int bucket = d == 0 ? kDistanceBuckets - 1 : d - 1;
      int k = 0;
      row(k + g.edge_label(i, j)) = 1.0;
      k += c + 1;
      row(k++) = adamic[static_cast<std::size_t>(p)];
      row(k + bucket) = 1.0;
      k += kDistanceBuckets;
      row(k++) = std::min(deg[i], deg[j]) / kDegreeScale;
      row(k++) = std::max(deg[i], deg[j]) / kDegreeScale;
      row(k++) = tau;
      row(k++) = tau * tau;
      row(k + g.node_label(i)) += 1.0;
      row(k + g.node_label(j)) += 1.0;
      k += b;
      row(k + bucket) = tau;
      k += kDistanceBuckets;
      row(k++) = density;
      row(k++) = 1.0;
    }
  return out;
}

}  // namespace construct
