#include "construct/isomorphism.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "construct/rng.hpp"

namespace construct {
namespace {

std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value) {
  return mix64(seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2)));
}

std::vector<std::vector<std::pair<int, int>>> labeled_adjacency(const LabeledGraph& g) {
  std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(g.num_nodes()));
  for (const auto& [p, label] : g.edges()) {
    adj[p.i].emplace_back(p.j, label);
    adj[p.j].emplace_back(p.i, label);
  }
  return adj;
}

std::size_t distinct_count(std::vector<std::uint64_t> values) {
  std::sort(values.begin(), values.end());
  return static_cast<std::size_t>(std::unique(values.begin(), values.end()) - values.begin());
}

}  // namespace

std::vector<std::uint64_t> wl_colors(const LabeledGraph& g, int rounds) {
  const int n = g.num_nodes();
  const auto adj = labeled_adjacency(g);
  std::vector<std::uint64_t> colors(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) colors[v] = mix64(static_cast<std::uint64_t>(g.node_label(v)) + 1);

  std::size_t classes = distinct_count(colors);
  std::vector<std::uint64_t> next(colors.size());
  std::vector<std::uint64_t> signature;
  for (int r = 0; r < rounds; ++r) {
    for (int v = 0; v < n; ++v) {
      signature.clear();
      for (const auto& [u, label] : adj[v])
        signature.push_back(hash_combine(mix64(static_cast<std::uint64_t>(label)), colors[u]));
      std::sort(signature.begin(), signature.end());
      std::uint64_t h = hash_combine(colors[v], signature.size());
      for (std::uint64_t s : signature) h = hash_combine(h, s);
      next[v] = h;
    }
    colors.swap(next);
    // The class count is isomorphism-invariant, so stopping here keeps colours
    // comparable across isomorphic inputs.
    const std::size_t refined = distinct_count(colors);
    if (refined == classes) break;
    classes = refined;
  }
  return colors;
}

std::uint64_t canonical_hash(const LabeledGraph& g) {
  auto colors = wl_colors(g, g.num_nodes());
  std::sort(colors.begin(), colors.end());
  std::uint64_t h = hash_combine(mix64(static_cast<std::uint64_t>(g.num_nodes())), g.num_edges());
  for (std::uint64_t c : colors) h = hash_combine(h, c);
  return h;
}

bool exact_isomorphic(const LabeledGraph& a, const LabeledGraph& g) {
  const int n = a.num_nodes();
  if (n != g.num_nodes() || a.num_edges() != g.num_edges()) return false;
  if (n == 0) return true;

  const auto ca = wl_colors(a, n);
  const auto cg = wl_colors(g, n);
  {
    auto sa = ca, sg = cg;
    std::sort(sa.begin(), sa.end());
    std::sort(sg.begin(), sg.end());
    if (sa != sg) return false;
  }

  const auto un = static_cast<std::size_t>(n);
  std::vector<int> la(un * un, 0), lg(un * un, 0);
  for (const auto& [p, label] : a.edges()) la[p.i * un + p.j] = la[p.j * un + p.i] = label;
  for (const auto& [p, label] : g.edges()) lg[p.i * un + p.j] = lg[p.j * un + p.i] = label;

  std::unordered_map<std::uint64_t, std::vector<int>> classes_g;
  for (int v = 0; v < n; ++v) classes_g[cg[v]].push_back(v);

  // Match order: smallest colour class first, then vertices most tied to those already placed.
  std::vector<int> order;
  std::vector<char> placed(un, 0);
  std::vector<int> ties(un, 0);
  for (int step = 0; step < n; ++step) {
    int best = -1;
    for (int v = 0; v < n; ++v) {
      if (placed[v]) continue;
      if (best < 0) {
        best = v;
        continue;
      }
      const auto sv = classes_g[ca[v]].size(), sb = classes_g[ca[best]].size();
      if (ties[v] > ties[best] || (ties[v] == ties[best] && sv < sb)) best = v;
    }
    placed[best] = 1;
    order.push_back(best);
    for (int w = 0; w < n; ++w)
      if (la[best * un + w] != 0) ++ties[w];
  }

  std::vector<int> map(un, -1);
  std::vector<char> used(un, 0);
  auto search = [&](auto&& self, int depth) -> bool {
    if (depth == n) return true;
    const int va = order[depth];
    for (int vb : classes_g[ca[va]]) {
      if (used[vb]) continue;
      bool ok = true;
      for (int k = 0; k < depth && ok; ++k) {
        const int w = order[k];
        ok = la[va * un + w] == lg[vb * un + map[w]];
      }
      if (!ok) continue;
      map[va] = vb;
      used[vb] = 1;
      if (self(self, depth + 1)) return true;
      used[vb] = 0;
      map[va] = -1;
    }
    return false;
  };
  return search(search, 0);
}

bool IsomorphismIndex::insert(const LabeledGraph& g) {
  const std::uint64_t h = canonical_hash(g);
  auto [lo, hi] = buckets_.equal_range(h);
  for (auto it = lo; it != hi; ++it)
    if (exact_isomorphic(it->second, g)) return false;
  buckets_.emplace(h, g);
  ++size_;
  return true;
}

bool IsomorphismIndex::contains(const LabeledGraph& g) const {
  const std::uint64_t h = canonical_hash(g);
  auto [lo, hi] = buckets_.equal_range(h);
  for (auto it = lo; it != hi; ++it)
    if (exact_isomorphic(it->second, g)) return true;
  return false;
}

}  // namespace construct
