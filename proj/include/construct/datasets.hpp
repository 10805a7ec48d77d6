#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "construct/graph.hpp"
#include "construct/metrics.hpp"
#include "construct/rng.hpp"

namespace construct {

enum class Family { planar, tree, lobster, cellgraph };
Family parse_family(std::string_view text);
std::string family_name(Family f);
LabelSpaces family_spaces(Family f);
/// Validity predicate matching each family (cell graphs: planar and connected).
Validity family_validity(Family f);

/// Delaunay triangulation of n uniform points in the unit square (on a 2^24 grid).
/// Point sets with a collinear triple are redrawn. Requires n >= 3.
std::vector<LabeledGraph> gen_planar(int count, int n, Rng& rng);

/// Labelled tree for a Pruefer sequence of length n - 2 over [0, n).
LabeledGraph prufer_decode(std::span<const int> sequence, int n);
/// Uniform random labelled trees on n >= 2 nodes.
std::vector<LabeledGraph> gen_tree(int count, int n, Rng& rng);

struct LobsterParams {
  double p1 = 0.7;  // chance a backbone node gets a leaf
  double p2 = 0.7;  // chance that leaf gets a leaf of its own
  int backbone_min = 5;
  int backbone_max = 40;
  int min_nodes = 11;
  int max_nodes = 99;
};
std::vector<LabeledGraph> gen_lobster(int count, Rng& rng, const LobsterParams& params = {});

inline constexpr int kCellPhenotypes = 9;

struct CellGraphParams {
  int n_min = 20;
  int n_max = 81;
  std::vector<double> marginals = std::vector<double>(kCellPhenotypes, 1.0 / kCellPhenotypes);
  /// Edge length cut-off in unit-square coordinates. When unset, the Euclidean minimum
  /// spanning tree is kept plus the shortest other Delaunay edges until the mean degree
  /// reaches target_mean_degree, so graphs stay connected.
  std::optional<double> threshold;
  double target_mean_degree = 5.0;
};
std::vector<LabeledGraph> gen_cellgraph(int count, const CellGraphParams& params, Rng& rng);

/// Index partition: 80% train / 20% test, then 20% of train held out as validation.
struct SplitIndices {
  std::vector<std::size_t> train, val, test;
};
SplitIndices split_indices(std::size_t total, Rng& rng);

struct DatasetSpec {
  Family family = Family::planar;
  int train = 128, val = 32, test = 40;
  int n = 64;  // planar and tree only
  std::uint64_t seed = 0;
  LobsterParams lobster;
  CellGraphParams cells;
};

struct Dataset {
  LabelSpaces spaces;
  std::vector<LabeledGraph> train, val, test;
};

/// Graph k of the concatenated train/val/test list is drawn from split_seed(seed, k),
/// so output does not depend on `jobs`.
Dataset generate_dataset(const DatasetSpec& spec, int jobs = 1);

}  // namespace construct
