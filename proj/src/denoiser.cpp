#include "construct/denoiser.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

#include "construct/features.hpp"

namespace construct {

OracleDenoiser::OracleDenoiser(LabeledGraph clean, const LabelSpaces& spaces)
    : clean_(std::move(clean)), spaces_(spaces) {
  spaces_.validate();
  clean_.validate(spaces_);
}

GraphDistributions OracleDenoiser::predict(const LabeledGraph& g_t, int) const {
  const int n = clean_.num_nodes();
  if (g_t.num_nodes() != n) throw std::invalid_argument("oracle denoiser: node count mismatch");
  GraphDistributions out(spaces_, n);
  for (int v = 0; v < n; ++v) out.node(v)[clean_.node_label(v)] = 1.0;
  for (std::size_t p = 0; p < num_pairs(n); ++p) out.edge_at(p)[0] = 1.0;
  for (const auto& [pair, label] : clean_.edges()) {
    auto row = out.edge(pair.i, pair.j);
    row[0] = 0.0;
    row[label] = 1.0;
  }
  return out;
}

NodeCountDistribution NodeCountDistribution::from_graphs(const std::vector<LabeledGraph>& graphs) {
  if (graphs.empty()) throw std::invalid_argument("node count distribution: empty corpus");
  std::map<int, double> counts;
  for (const auto& g : graphs) counts[g.num_nodes()] += 1.0;
  NodeCountDistribution d;
  for (const auto& [n, k] : counts) {
    d.sizes.push_back(n);
    d.probs.push_back(k / static_cast<double>(graphs.size()));
  }
  return d;
}

int NodeCountDistribution::sample(Rng& rng) const {
  if (sizes.empty()) throw std::logic_error("node count distribution is empty");
  return sizes[sample_categorical(probs, rng)];
}

nlohmann::json NodeCountDistribution::to_json() const { return {{"sizes", sizes}, {"probs", probs}}; }

NodeCountDistribution NodeCountDistribution::from_json(const nlohmann::json& j) {
  NodeCountDistribution d;
  j.at("sizes").get_to(d.sizes);
  j.at("probs").get_to(d.probs);
  if (d.sizes.size() != d.probs.size() || d.sizes.empty())
    throw std::invalid_argument("node count distribution: malformed record");
  return d;
}

std::vector<double> node_type_marginals(const std::vector<LabeledGraph>& graphs, int node_types) {
  std::vector<double> m(static_cast<std::size_t>(node_types), 0.0);
  double total = 0.0;
  for (const auto& g : graphs)
    for (int x : g.node_labels()) {
      m.at(static_cast<std::size_t>(x)) += 1.0;
      total += 1.0;
    }
  if (total == 0.0) throw std::invalid_argument("node marginals: corpus has no nodes");
  for (double& v : m) v /= total;
  return m;
}

// ---------------------------------------------------------------------------------------
// Baseline

namespace {

void normalize_with_smoothing(std::span<double> counts, double eps) {
  double total = 0.0;
  for (double& v : counts) {
    if (v == 0.0) v = eps;
    total += v;
  }
  for (double& v : counts) v /= total;
}

}  // namespace

BaselineModel::BaselineModel(LabelSpaces spaces, NodeCountDistribution sizes,
                             std::vector<double> node_probs, std::vector<double> edge_table)
    : spaces_(spaces), sizes_(std::move(sizes)), node_probs_(std::move(node_probs)),
      edge_table_(std::move(edge_table)) {
  spaces_.validate();
  const auto b = static_cast<std::size_t>(spaces_.node_types);
  if (node_probs_.size() != b) throw std::invalid_argument("baseline: node table size mismatch");
  if (edge_table_.size() != b * b * spaces_.edge_states())
    throw std::invalid_argument("baseline: edge table size mismatch");
}

BaselineModel BaselineModel::fit(const std::vector<LabeledGraph>& train, const LabelSpaces& spaces) {
  if (train.empty()) throw std::invalid_argument("baseline fit: empty training set");
  spaces.validate();
  const int b = spaces.node_types;
  const auto s = static_cast<std::size_t>(spaces.edge_states());

  std::vector<double> nodes(static_cast<std::size_t>(b), 0.0);
  std::vector<double> table(static_cast<std::size_t>(b * b) * s, 0.0);
  auto row = [&](int x, int y) { return table.data() + (static_cast<std::size_t>(x) * b + y) * s; };
  for (const auto& g : train) {
    g.validate(spaces);
    std::vector<double> type_count(static_cast<std::size_t>(b), 0.0);
    for (int x : g.node_labels()) {
      nodes[x] += 1.0;
      type_count[x] += 1.0;
    }
    // Pairs per unordered type pair, all counted as no-edge first.
    for (int x = 0; x < b; ++x)
      for (int y = x; y < b; ++y) {
        const double pairs = x == y ? type_count[x] * (type_count[x] - 1) / 2 : type_count[x] * type_count[y];
        row(x, y)[0] += pairs;
      }
    for (const auto& [p, label] : g.edges()) {
      int x = g.node_label(p.i), y = g.node_label(p.j);
      if (x > y) std::swap(x, y);
      row(x, y)[0] -= 1.0;
      row(x, y)[label] += 1.0;
    }
  }
  normalize_with_smoothing(nodes, kSmoothing);
  for (int x = 0; x < b; ++x)
    for (int y = x; y < b; ++y) {
      normalize_with_smoothing({row(x, y), s}, kSmoothing);
      std::copy(row(x, y), row(x, y) + s, row(y, x));
    }
  return BaselineModel(spaces, NodeCountDistribution::from_graphs(train), std::move(nodes),
                       std::move(table));
}

std::span<const double> BaselineModel::edge_probs(int type_a, int type_b) const {
  const auto s = static_cast<std::size_t>(spaces_.edge_states());
  return {edge_table_.data() + (static_cast<std::size_t>(type_a) * spaces_.node_types + type_b) * s, s};
}

LabeledGraph BaselineModel::sample(Rng& rng) const {
  const int n = sizes_.sample(rng);
  LabeledGraph g(n);
  for (int v = 0; v < n; ++v) g.set_node_label(v, static_cast<int>(sample_categorical(node_probs_, rng)));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const auto label = static_cast<int>(sample_categorical(edge_probs(g.node_label(i), g.node_label(j)), rng));
      if (label != 0) g.set_edge(i, j, label);
    }
  return g;
}

GraphDistributions BaselineModel::predict(const LabeledGraph& g_t, int) const {
  const int n = g_t.num_nodes();
  GraphDistributions out(spaces_, n);
  for (int v = 0; v < n; ++v) std::copy(node_probs_.begin(), node_probs_.end(), out.node(v).begin());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const auto src = edge_probs(g_t.node_label(i), g_t.node_label(j));
      std::copy(src.begin(), src.end(), out.edge(i, j).begin());
    }
  return out;
}

nlohmann::json BaselineModel::to_json() const {
  return {{"spaces", {{"b", spaces_.node_types}, {"c", spaces_.edge_types}}},
          {"sizes", sizes_.to_json()},
          {"node_probs", node_probs_},
          {"edge_table", edge_table_}};
}

BaselineModel BaselineModel::from_json(const nlohmann::json& j) {
  const LabelSpaces spaces{j.at("spaces").at("b").get<int>(), j.at("spaces").at("c").get<int>()};
  return BaselineModel(spaces, NodeCountDistribution::from_json(j.at("sizes")),
                       j.at("node_probs").get<std::vector<double>>(),
                       j.at("edge_table").get<std::vector<double>>());
}

// ---------------------------------------------------------------------------------------
// Featurized model

namespace {

void softmax_rows(Eigen::MatrixXd& logits) {
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    auto row = logits.row(r);
    row.array() -= row.maxCoeff();
    row = row.array().exp().matrix();
    row /= row.sum();
  }
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(data.size()) != rows * cols)
    throw std::invalid_argument("checkpoint: weight matrix size mismatch");
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[static_cast<std::size_t>(r * cols + c)];
  return m;
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

}  // namespace

FeaturizedDenoiser::FeaturizedDenoiser(const LabelSpaces& spaces, int steps)
    : spaces_(spaces), steps_(steps) {
  spaces_.validate();
  if (steps < 1) throw std::invalid_argument("featurized denoiser: T must be >= 1");
  w_node_.setZero(node_feature_dim(spaces_), spaces_.node_types);
  w_edge_.setZero(pair_feature_dim(spaces_), spaces_.edge_states());
}

GraphDistributions FeaturizedDenoiser::predict(const LabeledGraph& g_t, int t) const {
  const int n = g_t.num_nodes();
  const auto f = compute_features(g_t, t, steps_, spaces_);
  Eigen::MatrixXd pn = f.node * w_node_;
  Eigen::MatrixXd pe = f.pair * w_edge_;
  softmax_rows(pn);
  softmax_rows(pe);
  GraphDistributions out(spaces_, n);
  for (int v = 0; v < n; ++v)
    for (int k = 0; k < spaces_.node_types; ++k) out.node(v)[k] = pn(v, k);
  for (std::size_t p = 0; p < num_pairs(n); ++p)
    for (int k = 0; k < spaces_.edge_states(); ++k) out.edge_at(p)[k] = pe(static_cast<Eigen::Index>(p), k);
  return out;
}

double FeaturizedDenoiser::loss_and_gradient(const LabeledGraph& g_t, int t, const LabeledGraph& clean,
                                             double lambda, Eigen::MatrixXd* grad_node,
                                             Eigen::MatrixXd* grad_edge) const {
  const int n = g_t.num_nodes();
  if (clean.num_nodes() != n) throw std::invalid_argument("loss: node count mismatch");
  const auto f = compute_features(g_t, t, steps_, spaces_);
  Eigen::MatrixXd pn = f.node * w_node_;
  Eigen::MatrixXd pe = f.pair * w_edge_;
  softmax_rows(pn);
  softmax_rows(pe);

  constexpr double kTiny = 1e-300;
  double node_loss = 0.0, edge_loss = 0.0;
  // pn, pe become (p - y) in place after reading the loss terms.
  for (int v = 0; v < n; ++v) {
    const int y = clean.node_label(v);
    node_loss -= std::log(std::max(pn(v, y), kTiny));
    pn(v, y) -= 1.0;
  }
  const auto pairs = static_cast<Eigen::Index>(num_pairs(n));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const auto p = static_cast<Eigen::Index>(pair_index(i, j, n));
      const int y = clean.edge_label(i, j);
      edge_loss -= std::log(std::max(pe(p, y), kTiny));
      pe(p, y) -= 1.0;
    }
  const double node_scale = n > 0 ? 1.0 / n : 0.0;
  const double edge_scale = pairs > 0 ? 1.0 / static_cast<double>(pairs) : 0.0;
  if (grad_node && n > 0) grad_node->noalias() += node_scale * (f.node.transpose() * pn);
  if (grad_edge && pairs > 0 && lambda != 0.0)
    grad_edge->noalias() += (lambda * edge_scale) * (f.pair.transpose() * pe);
  return node_scale * node_loss + lambda * edge_scale * edge_loss;
}

nlohmann::json FeaturizedDenoiser::to_json() const {
  return {{"feature_schema", kFeatureSchemaId},
          {"spaces", {{"b", spaces_.node_types}, {"c", spaces_.edge_types}}},
          {"T", steps_},
          {"w_node", matrix_to_json(w_node_)},
          {"w_edge", matrix_to_json(w_edge_)}};
}

FeaturizedDenoiser FeaturizedDenoiser::from_json(const nlohmann::json& j) {
  const auto schema = j.at("feature_schema").get<std::string>();
  if (schema != kFeatureSchemaId)
    throw std::invalid_argument("checkpoint: feature schema '" + schema + "' does not match '" +
                                kFeatureSchemaId + "'");
  const LabelSpaces spaces{j.at("spaces").at("b").get<int>(), j.at("spaces").at("c").get<int>()};
  FeaturizedDenoiser d(spaces, j.at("T").get<int>());
  auto wn = matrix_from_json(j.at("w_node"));
  auto we = matrix_from_json(j.at("w_edge"));
  if (wn.rows() != d.w_node_.rows() || wn.cols() != d.w_node_.cols() ||
      we.rows() != d.w_edge_.rows() || we.cols() != d.w_edge_.cols())
    throw std::invalid_argument("checkpoint: weight shapes do not match the feature schema");
  d.w_node_ = std::move(wn);
  d.w_edge_ = std::move(we);
  return d;
}

TrainState train_denoiser(const std::vector<LabeledGraph>& train, const NoiseSchedule& schedule,
                          const TrainConfig& config) {
  if (train.empty()) throw std::invalid_argument("train: empty training set");
  if (config.steps < 0 || config.batch_size < 1)
    throw std::invalid_argument("train: steps must be >= 0 and batch_size >= 1");
  if (!(config.lambda >= 0.0)) throw std::invalid_argument("train: lambda must be >= 0");
  const auto spaces = schedule.spaces();
  for (const auto& g : train) g.validate(spaces);

  TrainState state;
  state.model = FeaturizedDenoiser(spaces, schedule.steps());
  state.lambda = config.lambda;
  auto& wn = state.model.node_weights();
  auto& we = state.model.edge_weights();
  state.velocity_node.setZero(wn.rows(), wn.cols());
  state.velocity_edge.setZero(we.rows(), we.cols());
  state.loss_trace.reserve(static_cast<std::size_t>(config.steps));

  Rng rng(split_seed(config.seed, 0x7472));
  Eigen::MatrixXd gn(wn.rows(), wn.cols()), ge(we.rows(), we.cols());
  const double inv_batch = 1.0 / config.batch_size;
  for (int step = 1; step <= config.steps; ++step) {
    gn.setZero();
    ge.setZero();
    double loss = 0.0;
    for (int k = 0; k < config.batch_size; ++k) {
      const auto& clean = train[uniform_index(train.size(), rng)];
      const int t = 1 + static_cast<int>(uniform_index(static_cast<std::uint64_t>(schedule.steps()), rng));
      const auto noisy = apply_forward(clean, t, schedule, rng);
      loss += state.model.loss_and_gradient(noisy, t, clean, config.lambda, &gn, &ge);
    }
    loss *= inv_batch;
    if (!std::isfinite(loss) || !gn.allFinite() || !ge.allFinite())
      throw std::runtime_error("training diverged at step " + std::to_string(step) +
                               " (loss is not finite)");
    state.velocity_node = config.momentum * state.velocity_node - (config.learning_rate * inv_batch) * gn;
    state.velocity_edge = config.momentum * state.velocity_edge - (config.learning_rate * inv_batch) * ge;
    wn += state.velocity_node;
    we += state.velocity_edge;
    state.step = step;
    state.loss_trace.push_back(loss);
    if (config.log_every > 0 && config.on_log && step % config.log_every == 0) config.on_log(step, loss);
  }
  return state;
}

// ---------------------------------------------------------------------------------------
// Checkpoints

nlohmann::json bundle_to_json(const ModelBundle& bundle) {
  nlohmann::json j;
  j["schema"] = kCheckpointSchemaId;
  j["kind"] = bundle.kind;
  j["schedule"] = {{"T", bundle.schedule.steps()},
                   {"schedule", "cosine"},
                   {"edge_schedule", "absorbing"},
                   {"cosine_s", bundle.schedule.cosine_offset()},
                   {"node_marginals", bundle.schedule.node_marginals()},
                   {"edge_types", bundle.schedule.edge_types()}};
  j["sizes"] = bundle.sizes.to_json();
  j["config"] = bundle.config;
  if (bundle.kind == "featurized") {
    const auto* d = dynamic_cast<const FeaturizedDenoiser*>(bundle.denoiser.get());
    if (!d) throw std::invalid_argument("bundle: kind 'featurized' without a featurized denoiser");
    j["model"] = d->to_json();
  } else if (bundle.kind == "baseline") {
    const auto* d = dynamic_cast<const BaselineModel*>(bundle.denoiser.get());
    if (!d) throw std::invalid_argument("bundle: kind 'baseline' without a baseline model");
    j["model"] = d->to_json();
  } else {
    throw std::invalid_argument("bundle: unknown model kind '" + bundle.kind + "'");
  }
  return j;
}

ModelBundle bundle_from_json(const nlohmann::json& j) {
  const auto schema = j.at("schema").get<std::string>();
  if (schema != kCheckpointSchemaId)
    throw std::invalid_argument("checkpoint schema '" + schema + "' is not '" + kCheckpointSchemaId + "'");
  ModelBundle b;
  b.kind = j.at("kind").get<std::string>();
  const auto& s = j.at("schedule");
  b.schedule = NoiseSchedule::build(s.at("T").get<int>(), s.at("node_marginals").get<std::vector<double>>(),
                                    s.at("edge_types").get<int>(), s.at("cosine_s").get<double>());
  b.sizes = NodeCountDistribution::from_json(j.at("sizes"));
  b.config = j.value("config", nlohmann::json::object());
  if (b.kind == "featurized") {
    auto d = FeaturizedDenoiser::from_json(j.at("model"));
    if (!(d.spaces() == b.schedule.spaces()) || d.steps() != b.schedule.steps())
      throw std::invalid_argument("checkpoint: model and schedule disagree");
    b.denoiser = std::make_shared<FeaturizedDenoiser>(std::move(d));
  } else if (b.kind == "baseline") {
    b.denoiser = std::make_shared<BaselineModel>(BaselineModel::from_json(j.at("model")));
  } else {
    throw std::invalid_argument("checkpoint: unknown model kind '" + b.kind + "'");
  }
  return b;
}

void save_bundle(const ModelBundle& bundle, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << bundle_to_json(bundle).dump() << '\n';
}

ModelBundle load_bundle(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("checkpoint " + path.string() + ": " + e.what());
  }
  return bundle_from_json(j);
}

}  // namespace construct
