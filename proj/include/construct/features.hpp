#pragma once

#include <Eigen/Dense>

#include "construct/graph.hpp"

namespace construct {

/// Identifier stored in checkpoints; bump when the feature layout changes.
inline constexpr const char* kFeatureSchemaId = "construct.features.v1";

inline constexpr int kMaxHops = 10;          // BFS radius for pair distances
inline constexpr int kDistanceBuckets = 11;  // 1..10, then "farther or unreachable"

int node_feature_dim(const LabelSpaces& spaces);
int pair_feature_dim(const LabelSpaces& spaces);

/// Row v of `node` describes node v; row pair_index(i, j, n) of `pair` describes {i, j}.
/// Only labels and structure enter, never node indices, so features permute with the graph.
struct GraphFeatures {
  Eigen::MatrixXd node;
  Eigen::MatrixXd pair;
};

/// Node: current label one-hot, t/T, degree, graph degree histogram and mean, node and
/// edge type frequencies, bias.
/// Pair: current label one-hot, Adamic-Adar index, distance bucket one-hot, sorted
/// endpoint degrees, t/T and its square, endpoint label counts, distance bucket x t/T,
/// edge density, bias.
GraphFeatures compute_features(const LabeledGraph& g, int t, int steps, const LabelSpaces& spaces);

}  // namespace construct
