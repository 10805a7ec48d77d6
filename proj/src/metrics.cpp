#include "construct/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "construct/isomorphism.hpp"
#include "construct/parallel.hpp"
#include "construct/planarity.hpp"

namespace construct {

std::string statistic_name(Statistic s) {
  switch (s) {
    case Statistic::degree: return "degree";
    case Statistic::clustering: return "clustering";
    case Statistic::orbit: return "orbit";
    case Statistic::spectral: return "spectral";
    case Statistic::wavelet: return "wavelet";
  }
  return "degree";
}

std::vector<std::array<double, kOrbits>> orbit_counts(const LabeledGraph& g) {
  const int n = g.num_nodes();
  std::vector<std::array<double, kOrbits>> orb(static_cast<std::size_t>(n));
  for (auto& o : orb) o.fill(0.0);
  std::vector<char> a(static_cast<std::size_t>(n) * n, 0);
  auto adj = [&](int u, int v) { return a[static_cast<std::size_t>(u) * n + v]; };
  for (const auto& [p, label] : g.edges()) {
    a[static_cast<std::size_t>(p.i) * n + p.j] = 1;
    a[static_cast<std::size_t>(p.j) * n + p.i] = 1;
  }
  const auto deg = g.degrees();
  for (int v = 0; v < n; ++v) orb[v][0] = deg[v];

  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        const int ij = adj(i, j), ik = adj(i, k), jk = adj(j, k);
        const int e = ij + ik + jk;
        if (e == 3) {
          orb[i][3] += 1;
          orb[j][3] += 1;
          orb[k][3] += 1;
        } else if (e == 2) {
          const int di = ij + ik, dj = ij + jk, dk = ik + jk;
          orb[i][di == 2 ? 2 : 1] += 1;
          orb[j][dj == 2 ? 2 : 1] += 1;
          orb[k][dk == 2 ? 2 : 1] += 1;
        }
      }

  // Induced 4-node subgraphs, classified by edge count and induced degrees.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const int ij = adj(i, j);
      for (int k = j + 1; k < n; ++k) {
        const int ik = adj(i, k), jk = adj(j, k);
        const int e3 = ij + ik + jk;
        for (int l = k + 1; l < n; ++l) {
          const int il = adj(i, l), jl = adj(j, l), kl = adj(k, l);
          const int e = e3 + il + jl + kl;
          if (e < 3) continue;
          const int node[4] = {i, j, k, l};
          const int d[4] = {ij + ik + il, ij + jk + jl, ik + jk + kl, il + jl + kl};
          const int dmin = std::min(std::min(d[0], d[1]), std::min(d[2], d[3]));
          const int dmax = std::max(std::max(d[0], d[1]), std::max(d[2], d[3]));
          if (dmin == 0) continue;  // triangle plus an isolated node
          for (int q = 0; q < 4; ++q) {
            int o = -1;
            switch (e) {
              case 3: o = dmax == 3 ? (d[q] == 3 ? 7 : 6) : (d[q] == 1 ? 4 : 5); break;
              case 4: o = dmax == 2 ? 8 : (d[q] == 1 ? 9 : d[q] == 2 ? 10 : 11); break;
              case 5: o = d[q] == 2 ? 12 : 13; break;
              case 6: o = 14; break;
              default: break;
            }
            orb[node[q]][o] += 1;
          }
        }
      }
    }
  return orb;
}

namespace {

struct Spectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

Spectrum laplacian_spectrum(const LabeledGraph& g, bool with_vectors) {
  const int n = g.num_nodes();
  const auto deg = g.degrees();
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (int v = 0; v < n; ++v)
    if (deg[v] > 0) lap(v, v) = 1.0;
  for (const auto& [p, label] : g.edges()) {
    const double w = -1.0 / std::sqrt(static_cast<double>(deg[p.i]) * deg[p.j]);
    lap(p.i, p.j) = w;
    lap(p.j, p.i) = w;
  }
  Spectrum s;
  if (n == 0) return s;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      lap, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  s.values = solver.eigenvalues();
  if (with_vectors) s.vectors = solver.eigenvectors();
  return s;
}

void add_to_histogram(std::vector<double>& hist, std::size_t offset, int bins, double lo, double hi,
                      double x) {
  // Values within rounding noise of a bin edge go to the upper bin, so eigenvalues such
  // as 1 land in the same bin whatever the node order.
  const double width = (hi - lo) / bins;
  int k = static_cast<int>(std::floor((x - lo) / width + 1e-7));
  k = std::clamp(k, 0, bins - 1);
  hist[offset + static_cast<std::size_t>(k)] += 1.0;
}

void normalize(std::vector<double>& h) {
  double total = 0.0;
  for (double v : h) total += v;
  if (total > 0.0)
    for (double& v : h) v /= total;
}

}  // namespace

std::vector<double> normalized_laplacian_spectrum(const LabeledGraph& g) {
  const auto s = laplacian_spectrum(g, false);
  return {s.values.data(), s.values.data() + s.values.size()};
}

GraphStatistics graph_statistics(const LabeledGraph& g) {
  const int n = g.num_nodes();
  GraphStatistics s;
  const auto deg = g.degrees();
  const int max_deg = deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
  s.degree_histogram.assign(static_cast<std::size_t>(max_deg) + 1, 0.0);
  for (int d : deg) s.degree_histogram[d] += 1.0;

  const auto adj = g.adjacency();
  s.clustering.assign(static_cast<std::size_t>(n), 0.0);
  for (int v = 0; v < n; ++v) {
    if (deg[v] < 2) continue;
    int links = 0;
    for (std::size_t a = 0; a < adj[v].size(); ++a)
      for (std::size_t b = a + 1; b < adj[v].size(); ++b)
        if (g.has_edge(adj[v][a], adj[v][b])) ++links;
    s.clustering[v] = 2.0 * links / (static_cast<double>(deg[v]) * (deg[v] - 1));
  }

  s.orbits = orbit_counts(g);

  const auto spec = laplacian_spectrum(g, true);
  s.laplacian_eigenvalues.assign(spec.values.data(), spec.values.data() + spec.values.size());
  s.wavelet_energy.reserve(kWaveletScales.size() * static_cast<std::size_t>(n));
  for (double scale : kWaveletScales) {
    for (int v = 0; v < n; ++v) {
      double energy = 0.0;
      for (int k = 0; k < n; ++k) {
        const double u = spec.vectors(v, k);
        energy += std::exp(-2.0 * scale * spec.values(k)) * u * u;
      }
      s.wavelet_energy.push_back(energy);
    }
  }
  return s;
}

std::vector<double> descriptor(const GraphStatistics& s, Statistic which) {
  std::vector<double> h;
  switch (which) {
    case Statistic::degree:
      h = s.degree_histogram;
      break;
    case Statistic::clustering:
      h.assign(kClusteringBins, 0.0);
      for (double c : s.clustering) add_to_histogram(h, 0, kClusteringBins, 0.0, 1.0, c);
      break;
    case Statistic::orbit:
      h.assign(kOrbits, 0.0);
      for (const auto& o : s.orbits)
        for (int k = 0; k < kOrbits; ++k) h[k] += o[k];
      break;
    case Statistic::spectral:
      h.assign(kSpectralBins, 0.0);
      for (double x : s.laplacian_eigenvalues) add_to_histogram(h, 0, kSpectralBins, 0.0, 2.0, x);
      break;
    case Statistic::wavelet: {
      h.assign(kWaveletScales.size() * kWaveletBinsPerScale, 0.0);
      const std::size_t n = s.wavelet_energy.size() / kWaveletScales.size();
      for (std::size_t sc = 0; sc < kWaveletScales.size(); ++sc)
        for (std::size_t v = 0; v < n; ++v)
          add_to_histogram(h, sc * kWaveletBinsPerScale, kWaveletBinsPerScale, 0.0, 1.0,
                           s.wavelet_energy[sc * n + v]);
      break;
    }
  }
  normalize(h);
  return h;
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  const std::size_t len = std::max(p.size(), q.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < len; ++k) {
    const double a = k < p.size() ? p[k] : 0.0;
    const double b = k < q.size() ? q[k] : 0.0;
    sum += std::abs(a - b);
  }
  return 0.5 * sum;
}

namespace {

template <typename T, typename Dist>
double mmd2_generic(const std::vector<T>& a, const std::vector<T>& b, double sigma, Dist dist) {
  if (a.empty() || b.empty()) throw std::invalid_argument("mmd2: empty sample set");
  if (!(sigma > 0.0)) throw std::invalid_argument("mmd2: sigma must be > 0");
  const double inv = 1.0 / (2.0 * sigma * sigma);
  auto mean_kernel = [&](const std::vector<T>& x, const std::vector<T>& y) {
    double sum = 0.0;
    for (const auto& u : x)
      for (const auto& v : y) {
        const double d = dist(u, v);
        sum += std::exp(-d * d * inv);
      }
    return sum / (static_cast<double>(x.size()) * static_cast<double>(y.size()));
  };
  return mean_kernel(a, a) + mean_kernel(b, b) - 2.0 * mean_kernel(a, b);
}

}  // namespace

double mmd2(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b,
            double sigma) {
  return mmd2_generic(a, b, sigma, total_variation);
}

double mmd2_scalar(const std::vector<double>& a, const std::vector<double>& b, double sigma) {
  return mmd2_generic(a, b, sigma, [](double x, double y) { return std::abs(x - y); });
}

Validity parse_validity(std::string_view text) {
  if (text == "none") return Validity::none;
  if (text == "planar") return Validity::planar;
  if (text == "tree") return Validity::tree;
  if (text == "lobster") return Validity::lobster;
  if (text == "tls_low") return Validity::tls_low;
  if (text == "tls_high") return Validity::tls_high;
  throw std::invalid_argument("unknown validity '" + std::string(text) +
                              "' (expected planar|tree|lobster|tls_low|tls_high|none)");
}

std::string validity_name(Validity v) {
  switch (v) {
    case Validity::none: return "none";
    case Validity::planar: return "planar";
    case Validity::tree: return "tree";
    case Validity::lobster: return "lobster";
    case Validity::tls_low: return "tls_low";
    case Validity::tls_high: return "tls_high";
  }
  return "none";
}

Property validity_property(Validity v) {
  switch (v) {
    case Validity::none: return {};
    case Validity::tree: return {PropertyKind::acyclic, 0};
    case Validity::lobster: return {PropertyKind::lobster, 0};
    case Validity::planar:
    case Validity::tls_low:
    case Validity::tls_high: return {PropertyKind::planar, 0};
  }
  return {};
}

std::array<double, 6> tls_embedding(const LabeledGraph& g, int b_label, int t_label) {
  if (b_label == t_label) throw std::invalid_argument("tls_embedding: B and T labels must differ");
  const int n = g.num_nodes();
  std::vector<int> b_neighbours(static_cast<std::size_t>(n), 0);
  for (const auto& [p, label] : g.edges())
    if (g.node_label(p.i) == b_label && g.node_label(p.j) == b_label) {
      ++b_neighbours[p.i];
      ++b_neighbours[p.j];
    }
  std::array<double, 6> gamma{};  // gamma[j] for j < 6; larger j only enters the total
  double cross = 0.0;
  for (const auto& [p, label] : g.edges()) {
    const int x = g.node_label(p.i), y = g.node_label(p.j);
    int b_end = -1;
    if (x == b_label && y == t_label) b_end = p.i;
    if (x == t_label && y == b_label) b_end = p.j;
    if (b_end < 0) continue;
    cross += 1.0;
    if (b_neighbours[b_end] < 6) gamma[b_neighbours[b_end]] += 1.0;
  }
  std::array<double, 6> kappa{};
  if (cross == 0.0) return kappa;
  double cumulative = 0.0;
  for (int i = 0; i < 6; ++i) {
    cumulative += gamma[i];
    kappa[i] = (cross - cumulative) / cross;
  }
  return kappa;
}

bool tls_valid(const LabeledGraph& g, bool high, int b_label, int t_label) {
  if (!is_connected(g) || !is_planar(g)) return false;
  const auto kappa = tls_embedding(g, b_label, t_label);
  return high ? kappa[2] > 0.05 : kappa[1] < 0.05;
}

bool is_valid(const LabeledGraph& g, Validity v) {
  switch (v) {
    case Validity::none: return true;
    case Validity::planar: return is_connected(g) && is_planar(g);
    case Validity::tree: return is_connected(g) && is_acyclic(g);
    case Validity::lobster: return is_connected(g) && is_lobster_forest(g);
    case Validity::tls_low: return tls_valid(g, false);
    case Validity::tls_high: return tls_valid(g, true);
  }
  return false;
}

VunResult vun(const std::vector<LabeledGraph>& generated, const std::vector<LabeledGraph>& train,
              Validity validity, int jobs) {
  if (generated.empty()) throw std::invalid_argument("vun: empty generated set");
  const std::size_t n = generated.size();
  VunResult r;
  r.flags.valid.assign(n, 0);
  r.flags.unique.assign(n, 0);
  r.flags.novel.assign(n, 0);

  IsomorphismIndex train_index;
  for (const auto& g : train) train_index.insert(g);
  parallel_for(n, jobs, [&](std::size_t k) {
    r.flags.valid[k] = is_valid(generated[k], validity);
    r.flags.novel[k] = !train_index.contains(generated[k]);
  });
  IsomorphismIndex seen;
  for (std::size_t k = 0; k < n; ++k) r.flags.unique[k] = seen.insert(generated[k]);

  double v = 0, u = 0, nv = 0, all = 0;
  for (std::size_t k = 0; k < n; ++k) {
    v += r.flags.valid[k];
    u += r.flags.unique[k];
    nv += r.flags.novel[k];
    all += r.flags.valid[k] && r.flags.unique[k] && r.flags.novel[k];
  }
  r.valid = v / n;
  r.unique = u / n;
  r.novel = nv / n;
  r.vun = all / n;
  return r;
}

double property_rate(const std::vector<LabeledGraph>& graphs, const Property& p) {
  if (graphs.empty()) return 0.0;
  double ok = 0;
  for (const auto& g : graphs) ok += full_check(p, g);
  return ok / graphs.size();
}

double connected_rate(const std::vector<LabeledGraph>& graphs) {
  if (graphs.empty()) return 0.0;
  double ok = 0;
  for (const auto& g : graphs) ok += is_connected(g);
  return ok / graphs.size();
}

std::optional<double> ratio(const std::array<double, 5>& generated, const std::array<double, 5>& reference) {
  constexpr double kZero = 1e-15;
  double sum = 0.0;
  int used = 0;
  for (std::size_t k = 0; k < generated.size(); ++k) {
    if (!(reference[k] > kZero)) continue;
    sum += generated[k] / reference[k];
    ++used;
  }
  if (used == 0) return std::nullopt;
  return sum / used;
}

std::vector<std::array<std::vector<double>, 5>> all_descriptors(const std::vector<LabeledGraph>& graphs,
                                                                int jobs) {
  std::vector<std::array<std::vector<double>, 5>> out(graphs.size());
  parallel_for(graphs.size(), jobs, [&](std::size_t k) {
    const auto s = graph_statistics(graphs[k]);
    for (std::size_t q = 0; q < kAllStatistics.size(); ++q) out[k][q] = descriptor(s, kAllStatistics[q]);
  });
  return out;
}

namespace {

std::vector<std::vector<double>> column(const std::vector<std::array<std::vector<double>, 5>>& d,
                                        std::size_t q) {
  std::vector<std::vector<double>> out;
  out.reserve(d.size());
  for (const auto& row : d) out.push_back(row[q]);
  return out;
}

}  // namespace

EvalReport evaluate(const std::vector<LabeledGraph>& generated, const std::vector<LabeledGraph>& train,
                    const std::vector<LabeledGraph>& test, Validity validity, int jobs) {
  if (generated.empty() || train.empty() || test.empty())
    throw std::invalid_argument("evaluate: generated, train and test sets must be non-empty");
  EvalReport r;
  const auto dg = all_descriptors(generated, jobs);
  const auto dtr = all_descriptors(train, jobs);
  const auto dte = all_descriptors(test, jobs);
  for (std::size_t q = 0; q < kAllStatistics.size(); ++q) {
    const auto test_col = column(dte, q);
    r.mmd2[q] = mmd2(column(dg, q), test_col);
    r.reference_mmd2[q] = mmd2(column(dtr, q), test_col);
  }
  r.ratio = ratio(r.mmd2, r.reference_mmd2);

  const auto v = vun(generated, train, validity, jobs);
  r.valid = v.valid;
  r.unique = v.unique;
  r.novel = v.novel;
  r.vun = v.vun;
  r.property_rate = property_rate(generated, validity_property(validity));
  r.connected_rate = connected_rate(generated);

  if (validity == Validity::tls_low || validity == Validity::tls_high) {
    std::array<double, 6> km{};
    std::array<std::vector<double>, 6> kg, kt;
    for (const auto& g : generated) {
      const auto k = tls_embedding(g);
      for (int i = 0; i < 6; ++i) kg[i].push_back(k[i]);
    }
    for (const auto& g : test) {
      const auto k = tls_embedding(g);
      for (int i = 0; i < 6; ++i) kt[i].push_back(k[i]);
    }
    for (int i = 0; i < 6; ++i) km[i] = mmd2_scalar(kg[i], kt[i]);
    r.kappa_mmd2 = km;
    double ok = 0;
    for (const auto& g : generated) ok += tls_valid(g, validity == Validity::tls_high);
    r.tls_valid = ok / generated.size();
  }
  return r;
}

nlohmann::json EvalReport::to_json() const {
  nlohmann::json j;
  nlohmann::json m, ref;
  for (std::size_t q = 0; q < kAllStatistics.size(); ++q) {
    m[statistic_name(kAllStatistics[q])] = mmd2[q];
    ref[statistic_name(kAllStatistics[q])] = reference_mmd2[q];
  }
  j["mmd2"] = m;
  j["reference_mmd2"] = ref;
  j["ratio"] = ratio ? nlohmann::json(*ratio) : nlohmann::json(nullptr);
  j["valid"] = valid;
  j["unique"] = unique;
  j["novel"] = novel;
  j["vun"] = vun;
  j["property_rate"] = property_rate;
  j["connected_rate"] = connected_rate;
  if (kappa_mmd2) j["kappa_mmd2"] = *kappa_mmd2;
  if (tls_valid) j["tls_valid"] = *tls_valid;
  return j;
}

}  // namespace construct
