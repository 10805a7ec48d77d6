#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "construct/constraints.hpp"
#include "construct/graph.hpp"

namespace construct {

enum class Statistic { degree, clustering, orbit, spectral, wavelet };
inline constexpr std::array<Statistic, 5> kAllStatistics = {
    Statistic::degree, Statistic::clustering, Statistic::orbit, Statistic::spectral, Statistic::wavelet};
std::string statistic_name(Statistic s);

inline constexpr int kClusteringBins = 100;
inline constexpr int kSpectralBins = 200;
inline constexpr int kWaveletBinsPerScale = 50;
inline constexpr std::array<double, 4> kWaveletScales = {0.5, 1.0, 2.0, 4.0};
inline constexpr int kOrbits = 15;

/// Raw per-graph statistics.
struct GraphStatistics {
  std::vector<double> degree_histogram;      // counts by degree
  std::vector<double> clustering;            // local coefficient per node
  std::vector<std::array<double, kOrbits>> orbits;  // per node, orbits 0..14
  std::vector<double> laplacian_eigenvalues; // ascending
  std::vector<double> wavelet_energy;        // per scale, per node: |H_s e_v|^2
};

GraphStatistics graph_statistics(const LabeledGraph& g);

/// Per-node counts of the 15 orbits of connected 2-, 3- and 4-node induced subgraphs.
std::vector<std::array<double, kOrbits>> orbit_counts(const LabeledGraph& g);

/// Eigenvalues of I - D^{-1/2} A D^{-1/2} (isolated nodes contribute 0), ascending.
std::vector<double> normalized_laplacian_spectrum(const LabeledGraph& g);

/// Normalised histogram (sums to 1, or all zero when empty) for MMD comparison.
std::vector<double> descriptor(const GraphStatistics& s, Statistic which);

double total_variation(const std::vector<double>& p, const std::vector<double>& q);

/// Biased V-statistic MMD^2 with k(x, y) = exp(-TV(x, y)^2 / (2 sigma^2)).
/// Throws std::invalid_argument on an empty set.
double mmd2(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b,
            double sigma = 1.0);

/// Same kernel with |x - y| on scalars.
double mmd2_scalar(const std::vector<double>& a, const std::vector<double>& b, double sigma = 1.0);

enum class Validity { none, planar, tree, lobster, tls_low, tls_high };
Validity parse_validity(std::string_view text);
std::string validity_name(Validity v);
/// Structural property implied by a validity mode (planar for the TLS modes).
Property validity_property(Validity v);

inline constexpr int kDefaultBLabel = 0;
inline constexpr int kDefaultTLabel = 8;  // phenotype order: B first, T last

/// kappa_i = share of B-T edges whose B endpoint has more than i B neighbours.
/// Zero vector when there is no B-T edge.
std::array<double, 6> tls_embedding(const LabeledGraph& g, int b_label = kDefaultBLabel,
                                    int t_label = kDefaultTLabel);
bool tls_valid(const LabeledGraph& g, bool high, int b_label = kDefaultBLabel, int t_label = kDefaultTLabel);

bool is_valid(const LabeledGraph& g, Validity v);

struct VunFlags {
  std::vector<char> valid, unique, novel;
};
struct VunResult {
  double valid = 0, unique = 0, novel = 0, vun = 0;
  VunFlags flags;
};
/// Unique: not isomorphic to an earlier generated graph. Novel: not isomorphic to any
/// training graph.
VunResult vun(const std::vector<LabeledGraph>& generated, const std::vector<LabeledGraph>& train,
              Validity validity, int jobs = 1);

double property_rate(const std::vector<LabeledGraph>& graphs, const Property& p);
double connected_rate(const std::vector<LabeledGraph>& graphs);

struct EvalReport {
  std::array<double, 5> mmd2{};
  std::array<double, 5> reference_mmd2{};  // train vs test
  std::optional<double> ratio;             // empty when every reference is 0
  double valid = 0, unique = 0, novel = 0, vun = 0;
  double property_rate = 0, connected_rate = 0;
  std::optional<std::array<double, 6>> kappa_mmd2;
  std::optional<double> tls_valid;

  nlohmann::json to_json() const;
};

/// Mean of generated / reference over statistics with a non-zero reference.
std::optional<double> ratio(const std::array<double, 5>& generated, const std::array<double, 5>& reference);

/// Descriptors for all five statistics of every graph, computed in parallel.
std::vector<std::array<std::vector<double>, 5>> all_descriptors(const std::vector<LabeledGraph>& graphs,
                                                                int jobs = 1);

EvalReport evaluate(const std::vector<LabeledGraph>& generated, const std::vector<LabeledGraph>& train,
                    const std::vector<LabeledGraph>& test, Validity validity, int jobs = 1);

}  // namespace construct
