#include "construct/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "construct/constraints.hpp"
#include "construct/delaunay.hpp"
#include "construct/parallel.hpp"

namespace construct {

Family parse_family(std::string_view text) {
  if (text == "planar") return Family::planar;
  if (text == "tree") return Family::tree;
  if (text == "lobster") return Family::lobster;
  if (text == "cellgraph") return Family::cellgraph;
  throw std::invalid_argument("unknown dataset family '" + std::string(text) +
                              "' (expected planar|tree|lobster|cellgraph)");
}

std::string family_name(Family f) {
  switch (f) {
    case Family::planar: return "planar";
    case Family::tree: return "tree";
    case Family::lobster: return "lobster";
    case Family::cellgraph: return "cellgraph";
  }
  return "planar";
}

LabelSpaces family_spaces(Family f) {
  return f == Family::cellgraph ? LabelSpaces{kCellPhenotypes, 1} : LabelSpaces{1, 1};
}

Validity family_validity(Family f) {
  switch (f) {
    case Family::planar: return Validity::planar;
    case Family::tree: return Validity::tree;
    case Family::lobster: return Validity::lobster;
    case Family::cellgraph: return Validity::planar;
  }
  return Validity::none;
}

namespace {

constexpr std::int32_t kGrid = 1 << 24;

std::vector<GridPoint> random_points(int n, Rng& rng) {
  for (;;) {
    std::vector<GridPoint> pts(static_cast<std::size_t>(n));
    for (auto& p : pts) {
      p.x = static_cast<std::int32_t>(uniform_index(kGrid, rng));
      p.y = static_cast<std::int32_t>(uniform_index(kGrid, rng));
    }
    auto sorted = pts;
    std::sort(sorted.begin(), sorted.end(),
              [](const GridPoint& a, const GridPoint& b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;
    if (has_collinear_triple(pts)) continue;
    return pts;
  }
}

}  // namespace

std::vector<LabeledGraph> gen_planar(int count, int n, Rng& rng) {
  if (n < 3) throw std::invalid_argument("gen_planar: n must be >= 3");
  std::vector<LabeledGraph> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int k = 0; k < count; ++k) {
    const auto pts = random_points(n, rng);
    LabeledGraph g(n);
    for (const auto& [i, j] : delaunay_edges(pts)) g.set_edge(i, j);
    out.push_back(std::move(g));
  }
  return out;
}

LabeledGraph prufer_decode(std::span<const int> sequence, int n) {
  if (n < 2) throw std::invalid_argument("prufer_decode: n must be >= 2");
  if (static_cast<int>(sequence.size()) != n - 2)
    throw std::invalid_argument("prufer_decode: sequence length must be n - 2");
  std::vector<int> degree(static_cast<std::size_t>(n), 1);
  for (int v : sequence) {
    if (v < 0 || v >= n) throw std::out_of_range("prufer_decode: label outside [0, n)");
    ++degree[v];
  }
  std::priority_queue<int, std::vector<int>, std::greater<>> leaves;
  for (int v = 0; v < n; ++v)
    if (degree[v] == 1) leaves.push(v);
  LabeledGraph g(n);
  for (int v : sequence) {
    const int leaf = leaves.top();
    leaves.pop();
    g.set_edge(leaf, v);
    if (--degree[v] == 1) leaves.push(v);
  }
  const int a = leaves.top();
  leaves.pop();
  g.set_edge(a, leaves.top());
  return g;
}

std::vector<LabeledGraph> gen_tree(int count, int n, Rng& rng) {
  if (n < 2) throw std::invalid_argument("gen_tree: n must be >= 2");
  std::vector<LabeledGraph> out;
  std::vector<int> seq(static_cast<std::size_t>(n - 2));
  for (int k = 0; k < count; ++k) {
    for (int& v : seq) v = static_cast<int>(uniform_index(static_cast<std::uint64_t>(n), rng));
    out.push_back(prufer_decode(seq, n));
  }
  return out;
}

std::vector<LabeledGraph> gen_lobster(int count, Rng& rng, const LobsterParams& params) {
  if (params.backbone_min < 1 || params.backbone_max < params.backbone_min ||
      params.min_nodes > params.max_nodes || params.backbone_min > params.max_nodes)
    throw std::invalid_argument("gen_lobster: inconsistent parameters");
  std::vector<LabeledGraph> out;
  std::vector<std::pair<int, int>> edges;
  while (static_cast<int>(out.size()) < count) {
    const int span = params.backbone_max - params.backbone_min + 1;
    const int backbone = params.backbone_min + static_cast<int>(uniform_index(static_cast<std::uint64_t>(span), rng));
    edges.clear();
    int next = backbone;
    for (int v = 0; v + 1 < backbone; ++v) edges.emplace_back(v, v + 1);
    for (int v = 0; v < backbone; ++v) {
      if (uniform01(rng) >= params.p1) continue;
      const int leaf = next++;
      edges.emplace_back(v, leaf);
      if (uniform01(rng) < params.p2) edges.emplace_back(leaf, next++);
    }
    if (next < params.min_nodes || next > params.max_nodes) continue;
    LabeledGraph g(next);
    for (const auto& [a, b] : edges) g.set_edge(a, b);
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<LabeledGraph> gen_cellgraph(int count, const CellGraphParams& params, Rng& rng) {
  if (params.n_min < 3 || params.n_max < params.n_min)
    throw std::invalid_argument("gen_cellgraph: need 3 <= n_min <= n_max");
  if (params.marginals.size() != static_cast<std::size_t>(kCellPhenotypes))
    throw std::invalid_argument("gen_cellgraph: marginals must cover 9 phenotypes");
  double total = 0.0;
  for (double m : params.marginals) {
    if (!(m >= 0.0)) throw std::invalid_argument("gen_cellgraph: negative marginal");
    total += m;
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("gen_cellgraph: marginals must sum to 1");

  std::vector<LabeledGraph> out;
  for (int k = 0; k < count; ++k) {
    const int n = params.n_min + static_cast<int>(uniform_index(
                                     static_cast<std::uint64_t>(params.n_max - params.n_min + 1), rng));
    const auto pts = random_points(n, rng);
    auto edges = delaunay_edges(pts);
    auto length = [&](const std::pair<int, int>& e) {
      const double dx = (static_cast<double>(pts[e.first].x) - pts[e.second].x) / kGrid;
      const double dy = (static_cast<double>(pts[e.first].y) - pts[e.second].y) / kGrid;
      return std::hypot(dx, dy);
    };
    std::stable_sort(edges.begin(), edges.end(),
                     [&](const auto& a, const auto& b) { return length(a) < length(b); });
    LabeledGraph g(n);
    for (int v = 0; v < n; ++v) g.set_node_label(v, static_cast<int>(sample_categorical(params.marginals, rng)));
    if (params.threshold) {
      for (const auto& e : edges)
        if (length(e) <= *params.threshold) g.set_edge(e.first, e.second);
    } else {
      // Euclidean minimum spanning tree first (it lies inside the triangulation), then the
      // shortest remaining edges up to the target mean degree.
      const auto target = static_cast<std::size_t>(std::lround(params.target_mean_degree * n / 2.0));
      DisjointSets sets(n);
      std::vector<char> used(edges.size(), 0);
      for (std::size_t e = 0; e < edges.size(); ++e)
        if (sets.find(edges[e].first) != sets.find(edges[e].second)) {
          sets.unite(edges[e].first, edges[e].second);
          g.set_edge(edges[e].first, edges[e].second);
          used[e] = 1;
        }
      for (std::size_t e = 0; e < edges.size() && g.num_edges() < target; ++e)
        if (!used[e]) g.set_edge(edges[e].first, edges[e].second);
    }
    out.push_back(std::move(g));
  }
  return out;
}

SplitIndices split_indices(std::size_t total, Rng& rng) {
  std::vector<std::size_t> idx(total);
  for (std::size_t k = 0; k < total; ++k) idx[k] = k;
  shuffle(std::span<std::size_t>(idx), rng);
  const auto test = static_cast<std::size_t>(std::llround(0.2 * static_cast<double>(total)));
  const std::size_t train_all = total - test;
  const auto val = static_cast<std::size_t>(std::llround(0.2 * static_cast<double>(train_all)));
  SplitIndices s;
  s.train.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(train_all - val));
  s.val.assign(idx.begin() + static_cast<std::ptrdiff_t>(train_all - val),
               idx.begin() + static_cast<std::ptrdiff_t>(train_all));
  s.test.assign(idx.begin() + static_cast<std::ptrdiff_t>(train_all), idx.end());
  return s;
}

Dataset generate_dataset(const DatasetSpec& spec, int jobs) {
  if (spec.train < 1 || spec.val < 0 || spec.test < 1)
    throw std::invalid_argument("generate_dataset: need train >= 1, val >= 0, test >= 1");
  const auto total = static_cast<std::size_t>(spec.train + spec.val + spec.test);
  std::vector<LabeledGraph> all(total);
  parallel_for(total, jobs, [&](std::size_t k) {
    Rng rng(split_seed(spec.seed, k));
    switch (spec.family) {
      case Family::planar: all[k] = gen_planar(1, spec.n, rng).front(); break;
      case Family::tree: all[k] = gen_tree(1, spec.n, rng).front(); break;
      case Family::lobster: all[k] = gen_lobster(1, rng, spec.lobster).front(); break;
      case Family::cellgraph: all[k] = gen_cellgraph(1, spec.cells, rng).front(); break;
    }
  });
  Dataset d;
  d.spaces = family_spaces(spec.family);
  const auto tr = static_cast<std::size_t>(spec.train), va = static_cast<std::size_t>(spec.val);
  d.train.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(tr));
  d.val.assign(all.begin() + static_cast<std::ptrdiff_t>(tr), all.begin() + static_cast<std::ptrdiff_t>(tr + va));
  d.test.assign(all.begin() + static_cast<std::ptrdiff_t>(tr + va), all.end());
  return d;
}

}  // namespace construct
