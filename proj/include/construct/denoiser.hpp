#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "construct/graph.hpp"
#include "construct/noise_schedule.hpp"
#include "construct/rng.hpp"

namespace construct {

/// Maps a noisy graph at step t to distributions over clean node and edge labels.
/// predict must be reentrant: samplers call it from several threads.
class Denoiser {
 public:
  virtual ~Denoiser() = default;
  virtual LabelSpaces spaces() const = 0;
  virtual GraphDistributions predict(const LabeledGraph& g_t, int t) const = 0;
};

/// Returns unit masses on a fixed clean graph regardless of the input.
class OracleDenoiser final : public Denoiser {
 public:
  OracleDenoiser(LabeledGraph clean, const LabelSpaces& spaces);
  LabelSpaces spaces() const override { return spaces_; }
  GraphDistributions predict(const LabeledGraph& g_t, int t) const override;

 private:
  LabeledGraph clean_;
  LabelSpaces spaces_;
};

/// Empirical categorical over training graph sizes.
struct NodeCountDistribution {
  std::vector<int> sizes;     // ascending, distinct
  std::vector<double> probs;  // same length

  static NodeCountDistribution from_graphs(const std::vector<LabeledGraph>& graphs);
  static NodeCountDistribution fixed(int n) { return {{n}, {1.0}}; }
  int sample(Rng& rng) const;
  int max_size() const { return sizes.empty() ? 0 : sizes.back(); }

  nlohmann::json to_json() const;
  static NodeCountDistribution from_json(const nlohmann::json& j);
};

/// Empirical node-type frequencies; throws on an empty corpus.
std::vector<double> node_type_marginals(const std::vector<LabeledGraph>& graphs, int node_types);

/// Count-based model: graph size, node type and per-type-pair edge label frequencies.
/// As a denoiser it ignores the timestep and the noisy edges.
class BaselineModel final : public Denoiser {
 public:
  static constexpr double kSmoothing = 1e-6;

  /// edge_table has b*b rows of c+1 probabilities, symmetric in the type pair.
  BaselineModel(LabelSpaces spaces, NodeCountDistribution sizes, std::vector<double> node_probs,
                std::vector<double> edge_table);

  /// Throws std::invalid_argument on an empty training set.
  static BaselineModel fit(const std::vector<LabeledGraph>& train, const LabelSpaces& spaces);

  LabeledGraph sample(Rng& rng) const;

  LabelSpaces spaces() const override { return spaces_; }
  GraphDistributions predict(const LabeledGraph& g_t, int t) const override;

  const NodeCountDistribution& node_counts() const noexcept { return sizes_; }
  const std::vector<double>& node_probs() const noexcept { return node_probs_; }
  std::span<const double> edge_probs(int type_a, int type_b) const;

  nlohmann::json to_json() const;
  static BaselineModel from_json(const nlohmann::json& j);

 private:
  LabelSpaces spaces_;
  NodeCountDistribution sizes_;
  std::vector<double> node_probs_;
  std::vector<double> edge_table_;
};

/// Linear softmax heads over hand-built node and pair features.
class FeaturizedDenoiser final : public Denoiser {
 public:
  FeaturizedDenoiser() = default;
  /// Zero weights, hence uniform predictions.
  FeaturizedDenoiser(const LabelSpaces& spaces, int steps);

  LabelSpaces spaces() const override { return spaces_; }
  int steps() const noexcept { return steps_; }
  GraphDistributions predict(const LabeledGraph& g_t, int t) const override;

  Eigen::MatrixXd& node_weights() noexcept { return w_node_; }
  Eigen::MatrixXd& edge_weights() noexcept { return w_edge_; }
  const Eigen::MatrixXd& node_weights() const noexcept { return w_node_; }
  const Eigen::MatrixXd& edge_weights() const noexcept { return w_edge_; }

  /// Mean node cross-entropy plus lambda times mean pair cross-entropy against `clean`.
  /// Gradients are accumulated (added) into the optional outputs.
  double loss_and_gradient(const LabeledGraph& g_t, int t, const LabeledGraph& clean, double lambda,
                           Eigen::MatrixXd* grad_node, Eigen::MatrixXd* grad_edge) const;

  nlohmann::json to_json() const;
  /// Rejects a feature schema id other than kFeatureSchemaId.
  static FeaturizedDenoiser from_json(const nlohmann::json& j);

 private:
  LabelSpaces spaces_;
  int steps_ = 1;
  Eigen::MatrixXd w_node_, w_edge_;
};

struct TrainConfig {
  int steps = 5000;
  int batch_size = 4;
  double learning_rate = 1e-2;
  double momentum = 0.9;
  double lambda = 5.0;
  std::uint64_t seed = 0;
  /// Called every log_every steps with the batch-mean loss (0 disables).
  int log_every = 0;
  std::function<void(int step, double loss)> on_log;
};

struct TrainState {
  FeaturizedDenoiser model;
  Eigen::MatrixXd velocity_node, velocity_edge;
  double lambda = 5.0;
  int step = 0;
  std::vector<double> loss_trace;  // batch-mean loss per step
};

/// Momentum SGD on the denoising loss: pick a graph and t uniformly, noise it with
/// apply_forward, score the clean labels. Throws std::runtime_error naming the step if
/// the loss stops being finite.
TrainState train_denoiser(const std::vector<LabeledGraph>& train, const NoiseSchedule& schedule,
                          const TrainConfig& config);

inline constexpr const char* kCheckpointSchemaId = "construct.checkpoint.v1";

/// Everything sampling needs: denoiser, schedule and training size distribution.
struct ModelBundle {
  std::shared_ptr<const Denoiser> denoiser;
  std::string kind;  // "featurized" or "baseline"
  NoiseSchedule schedule;
  NodeCountDistribution sizes;
  nlohmann::json config;
};

nlohmann::json bundle_to_json(const ModelBundle& bundle);
ModelBundle bundle_from_json(const nlohmann::json& j);
void save_bundle(const ModelBundle& bundle, const std::filesystem::path& path);
ModelBundle load_bundle(const std::filesystem::path& path);

}  // namespace construct
