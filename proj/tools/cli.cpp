#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "construct/constraints.hpp"
#include "construct/datasets.hpp"
#include "construct/denoiser.hpp"
#include "construct/graph_io.hpp"
#include "construct/metrics.hpp"
#include "construct/noise_schedule.hpp"
#include "construct/oracle.hpp"
#include "construct/parallel.hpp"
#include "construct/projector.hpp"
#include "construct/sampler.hpp"

namespace construct::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

/// Bad flag values detected after CLI11 parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class F>
auto parse_or_usage(F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

struct Common {
  std::string config_path;
  std::uint64_t seed = 0;
  int jobs = 0;
};

/// Seed from the flag (or config), else CONSTRUCT_SEED, else 0.
std::uint64_t resolve_seed(const CLI::App& sub, std::uint64_t flag_value) {
  if (sub.count("--seed") > 0) return flag_value;
  if (const char* env = std::getenv("CONSTRUCT_SEED"); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument("trailing characters");
      return v;
    } catch (const std::exception&) {
      throw UsageError(std::string("CONSTRUCT_SEED is not an unsigned integer: '") + env + "'");
    }
  }
  return 0;
}

std::vector<int> parse_counts(const std::string& text) {
  std::vector<int> counts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(part, &used);
      if (used != part.size() || v < 0) throw std::invalid_argument(part);
      counts.push_back(v);
    } catch (const std::exception&) {
      throw UsageError("--counts expects three non-negative integers, got '" + text + "'");
    }
  }
  if (counts.size() != 3) throw UsageError("--counts expects train,val,test, got '" + text + "'");
  return counts;
}

void write_json(const json& j, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << j.dump(2) << "\n";
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << j.dump(2) << "\n";
}

json report(const json& config, json body) {
  body["schema_version"] = kReportSchemaVersion;
  body["config"] = config;
  return body;
}

/// Turns a JSON config object into flag tokens for `sub`. Keys are flag names without
/// the leading dashes; underscores stand for dashes.
std::vector<std::string> config_tokens(const fs::path& path, const CLI::App& sub) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path.string() + "'");
  json cfg;
  try {
    in >> cfg;
  } catch (const json::exception& e) {
    throw UsageError("config file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  if (!cfg.is_object()) throw UsageError("config file must hold a JSON object");
  std::vector<std::string> tokens;
  for (const auto& [key, value] : cfg.items()) {
    std::string name = key;
    std::replace(name.begin(), name.end(), '_', '-');
    const std::string flag = "--" + name;
    if (name == "config" || sub.get_option_no_throw(flag) == nullptr)
      throw UsageError("unknown config key '" + key + "' for " + sub.get_name());
    auto scalar = [&](const json& v) -> std::string {
      if (v.is_string()) return v.get<std::string>();
      if (v.is_number() || v.is_boolean()) return v.dump();
      throw UsageError("config key '" + key + "' must be a string, number or list");
    };
    std::string text;
    if (value.is_array()) {
      for (std::size_t k = 0; k < value.size(); ++k) text += (k ? "," : "") + scalar(value[k]);
    } else {
      text = scalar(value);
    }
    tokens.push_back(flag);
    tokens.push_back(text);
  }
  return tokens;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config_path, "JSON file of flag defaults; explicit flags win");
  sub->add_option("--seed", c.seed, "Random seed (falls back to CONSTRUCT_SEED)");
  sub->add_option("--jobs", c.jobs, "Worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
}

// ---------------------------------------------------------------------------------------

struct DatasetArgs {
  std::string family, counts = "128,32,40", out;
  int n = 64;
};

int cmd_generate(const CLI::App& sub, const Common& c, const DatasetArgs& a, std::ostream& out,
                 std::ostream& err) {
  DatasetSpec spec;
  spec.family = parse_or_usage([&] { return parse_family(a.family); });
  const auto counts = parse_counts(a.counts);
  spec.train = counts[0];
  spec.val = counts[1];
  spec.test = counts[2];
  spec.n = a.n;
  spec.seed = resolve_seed(sub, c.seed);

  const json config = {{"subcommand", "generate-dataset"}, {"family", a.family},
                       {"counts", counts},                  {"n", a.n},
                       {"seed", spec.seed}};
  err << "generating " << a.counts << " " << a.family << " graphs\n";
  const auto data = parse_or_usage([&] { return generate_dataset(spec, c.jobs); });

  fs::create_directories(a.out);
  const std::pair<const char*, const std::vector<LabeledGraph>*> parts[] = {
      {"train", &data.train}, {"val", &data.val}, {"test", &data.test}};
  json files = json::object();
  for (const auto& [name, graphs] : parts) {
    GraphFile f;
    f.spaces = data.spaces;
    f.graphs = *graphs;
    f.config = config;
    f.config["split"] = name;
    const auto path = fs::path(a.out) / (std::string(name) + ".jsonl");
    write_graph_file(path, f);
    files[name] = {{"path", path.string()}, {"count", graphs->size()}};
  }
  out << report(config, {{"files", files}}).dump(2) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------------------

struct TrainArgs {
  std::string train, model = "featurized", property = "none", out;
  std::string schedule = "cosine", edge_schedule = "absorbing";
  int steps = 5000, batch_size = 4, T = 500, log_every = 500;
  double lr = 1e-2, momentum = 0.9, lambda = 5.0, cosine_s = NoiseSchedule::kDefaultCosineOffset;
};

int cmd_train(const CLI::App& sub, const Common& c, const TrainArgs& a, std::ostream& out,
              std::ostream& err) {
  if (a.model != "featurized" && a.model != "baseline")
    throw UsageError("--model must be featurized or baseline");
  if (a.schedule != "cosine") throw UsageError("only the cosine node schedule is available");
  if (a.edge_schedule != "absorbing") throw UsageError("only the absorbing edge schedule is available");
  const Property property = parse_or_usage([&] { return Property::parse(a.property); });
  const auto seed = resolve_seed(sub, c.seed);

  const auto data = read_graph_file(fs::path(a.train));
  if (data.graphs.empty()) throw std::runtime_error("training file '" + a.train + "' holds no graphs");
  if (property.kind != PropertyKind::none) {
    std::size_t bad = 0;
    for (const auto& g : data.graphs)
      if (!full_check(property, g)) ++bad;
    if (bad > 0)
      err << "warning: " << bad << " of " << data.graphs.size() << " training graphs violate "
          << property.name() << "\n";
  }

  json config = {{"subcommand", "train"},       {"train", a.train},
                 {"model", a.model},            {"steps", a.steps},
                 {"batch_size", a.batch_size},  {"lr", a.lr},
                 {"momentum", a.momentum},      {"lambda", a.lambda},
                 {"T", a.T},                    {"schedule", a.schedule},
                 {"edge_schedule", a.edge_schedule}, {"cosine_s", a.cosine_s},
                 {"property", property.name()}, {"seed", seed},
                 {"data_config", data.config}};

  ModelBundle bundle;
  bundle.kind = a.model;
  bundle.schedule = parse_or_usage([&] {
    return NoiseSchedule::build(a.T, node_type_marginals(data.graphs, data.spaces.node_types),
                                data.spaces.edge_types, a.cosine_s);
  });
  bundle.sizes = NodeCountDistribution::from_graphs(data.graphs);
  bundle.config = config;

  if (a.model == "baseline") {
    bundle.denoiser = std::make_shared<BaselineModel>(BaselineModel::fit(data.graphs, data.spaces));
  } else {
    TrainConfig tc;
    tc.steps = a.steps;
    tc.batch_size = a.batch_size;
    tc.learning_rate = a.lr;
    tc.momentum = a.momentum;
    tc.lambda = a.lambda;
    tc.seed = seed;
    tc.log_every = a.log_every;
    tc.on_log = [&](int step, double loss) { err << "step " << step << " loss " << loss << "\n"; };
    auto state = parse_or_usage([&] { return train_denoiser(data.graphs, bundle.schedule, tc); });
    bundle.denoiser = std::make_shared<FeaturizedDenoiser>(std::move(state.model));
  }
  save_bundle(bundle, a.out);
  out << report(config, {{"checkpoint", a.out}}).dump(2) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------------------

struct SampleArgs {
  std::string model, mode = "constrained", property = "none", projector = "uniform", out;
  int count = 100, max_attempts = 10000;
};

int cmd_sample(const CLI::App& sub, const Common& c, const SampleArgs& a, std::ostream& out,
               std::ostream& err) {
  SampleRun run;
  run.mode = parse_or_usage([&] { return parse_sample_mode(a.mode); });
  run.property = parse_or_usage([&] { return Property::parse(a.property); });
  if (a.projector == "off") {
    if (run.mode == SampleMode::constrained) run.mode = SampleMode::unconstrained;
  } else {
    run.ordering = parse_or_usage([&] { return parse_projector_ordering(a.projector); });
  }
  if ((run.mode == SampleMode::rejection || run.mode == SampleMode::project_at_end) &&
      run.property.kind == PropertyKind::none)
    throw UsageError("--mode " + a.mode + " needs a --property");
  if (a.count < 0) throw UsageError("--count must be >= 0");
  run.count = a.count;
  run.seed = resolve_seed(sub, c.seed);
  run.jobs = c.jobs;
  run.max_attempts = a.max_attempts;

  const auto bundle = load_bundle(a.model);
  run.denoiser = bundle.denoiser.get();
  run.schedule = &bundle.schedule;
  run.sizes = bundle.sizes;

  const json config = {{"subcommand", "sample"},       {"model", a.model},
                       {"count", a.count},             {"mode", mode_name(run.mode)},
                       {"property", run.property.name()}, {"projector", a.projector},
                       {"max_attempts", a.max_attempts}, {"seed", run.seed},
                       {"model_config", bundle.config}};
  err << "sampling " << a.count << " graphs (" << mode_name(run.mode) << ", " << run.property.name() << ")\n";
  const auto result = sample(run);

  GraphFile f;
  f.spaces = bundle.schedule.spaces();
  f.graphs = result.graphs;
  f.config = config;
  write_graph_file(fs::path(a.out), f);
  out << report(config, result.summary()).dump(2) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------------------

struct EvaluateArgs {
  std::string generated, train, test, validity = "none", out;
};

int cmd_evaluate(const Common& c, const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
  const Validity validity = parse_or_usage([&] { return parse_validity(a.validity); });
  const auto gen = read_graph_file(fs::path(a.generated));
  const auto train = read_graph_file(fs::path(a.train));
  const auto test = read_graph_file(fs::path(a.test));
  auto same = [](const LabelSpaces& x, const LabelSpaces& y) {
    return x.node_types == y.node_types && x.edge_types == y.edge_types;
  };
  auto show = [](const LabelSpaces& s) {
    return "(b=" + std::to_string(s.node_types) + ", c=" + std::to_string(s.edge_types) + ")";
  };
  if (!same(gen.spaces, train.spaces) || !same(gen.spaces, test.spaces))
    throw std::runtime_error("label spaces differ: generated " + show(gen.spaces) + ", train " +
                             show(train.spaces) + ", test " + show(test.spaces));

  const json config = {{"subcommand", "evaluate"}, {"generated", a.generated}, {"train", a.train},
                       {"test", a.test},           {"validity", validity_name(validity)}};
  err << "evaluating " << gen.graphs.size() << " graphs\n";
  const auto r = evaluate(gen.graphs, train.graphs, test.graphs, validity, c.jobs);
  write_json(report(config, {{"report", r.to_json()}}), a.out, out);
  return kExitOk;
}

// ---------------------------------------------------------------------------------------

struct ProjectArgs {
  std::string g_t, g_hat, property = "none", projector = "uniform", out;
};

int cmd_project(const CLI::App& sub, const Common& c, const ProjectArgs& a, std::ostream& out) {
  const Property property = parse_or_usage([&] { return Property::parse(a.property); });
  const auto ordering = parse_or_usage([&] { return parse_projector_ordering(a.projector); });
  const auto seed = resolve_seed(sub, c.seed);
  const auto base = read_graph_file(fs::path(a.g_t));
  const auto hat = read_graph_file(fs::path(a.g_hat));
  if (base.graphs.size() != hat.graphs.size())
    throw std::runtime_error("--g-t and --g-hat hold different numbers of graphs");

  std::vector<LabeledGraph> result(base.graphs.size());
  std::vector<ProjectionStats> stats(base.graphs.size());
  parallel_for(result.size(), c.jobs, [&](std::size_t k) {
    auto checker = make_checker(property);
    seed_checker(*checker, base.graphs[k]);
    BlockingTable blocking;
    Rng rng(split_seed(seed, k));
    // No proposal probabilities are available here, so the likelihood orderings see
    // equal scores.
    result[k] = project(base.graphs[k], hat.graphs[k], ordering, *checker, blocking, rng,
                        [](NodePair) { return 1.0; }, &stats[k]);
  });
  ProjectionStats total;
  for (const auto& s : stats) total += s;

  const json config = {{"subcommand", "project"}, {"g_t", a.g_t},
                       {"g_hat", a.g_hat},        {"property", property.name()},
                       {"projector", ordering_name(ordering)}, {"seed", seed}};
  GraphFile f;
  f.spaces = hat.spaces;
  f.graphs = std::move(result);
  f.config = config;
  write_graph_file(fs::path(a.out), f);
  out << report(config, {{"graphs", f.graphs.size()},
                         {"candidates", total.candidates},
                         {"queries", total.queries},
                         {"inserted", total.inserted},
                         {"rejected", total.rejected}})
             .dump(2)
      << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------------------

struct CheckArgs {
  int theorem = 1, trials = 500, max_candidates = 8;
  std::optional<int> max_nodes;
  std::string property;
};

json graph_edges(const LabeledGraph& g) {
  json e = json::array();
  for (const auto& [p, label] : g.edges()) e.push_back({p.i, p.j});
  return e;
}

int cmd_check(const CLI::App& sub, const Common& c, const CheckArgs& a, std::ostream& out,
              std::ostream& err) {
  if (a.theorem != 1 && a.theorem != 2) throw UsageError("--theorem must be 1 or 2");
  const std::string prop_text = a.property.empty() ? (a.theorem == 2 ? "acyclic" : "") : a.property;
  if (prop_text.empty()) throw UsageError("--property is required for --theorem 1");
  const Property property = parse_or_usage([&] { return Property::parse(prop_text); });
  if (a.theorem == 2 && property.kind != PropertyKind::acyclic)
    throw UsageError("--theorem 2 concerns the acyclic property only");
  if (a.trials < 0) throw UsageError("--trials must be >= 0");
  const int max_nodes = a.max_nodes.value_or(a.theorem == 1 ? 6 : 7);
  if (a.max_candidates > static_cast<int>(kMaxEnumeratedCandidates))
    throw UsageError("--max-candidates is limited to " + std::to_string(kMaxEnumeratedCandidates));
  const auto seed = resolve_seed(sub, c.seed);

  std::vector<GedProjectionProblem> fixtures(static_cast<std::size_t>(a.trials));
  std::vector<char> ok(fixtures.size(), 0), literal_applies(fixtures.size(), 0), literal_ok(fixtures.size(), 0);
  parallel_for(fixtures.size(), c.jobs, [&](std::size_t k) {
    Rng rng(split_seed(seed, k));
    fixtures[k] = random_fixture(property, max_nodes, a.max_candidates, rng);
    if (a.theorem == 1) {
      ok[k] = verify_theorem1(fixtures[k]);
      return;
    }
    ok[k] = verify_theorem2(fixtures[k]);
    // The component-count formula |CC| - 1 is stated for candidates joining every
    // reached component into one; report it separately on that subset.
    const int reached = reached_components(fixtures[k]);
    const int bound = acyclic_insertion_bound(fixtures[k]);
    literal_applies[k] = reached > 0 && bound == reached - 1;
    literal_ok[k] = literal_applies[k] && ok[k];
  });

  const auto passed = static_cast<std::size_t>(std::count(ok.begin(), ok.end(), 1));
  const json config = {{"subcommand", "check"}, {"theorem", a.theorem},         {"property", property.name()},
                       {"trials", a.trials},    {"max_nodes", max_nodes},       {"max_candidates", a.max_candidates},
                       {"seed", seed}};
  json body = {{"passed", passed}, {"failed", fixtures.size() - passed}};
  if (a.theorem == 2) {
    body["component_formula_applicable"] = std::count(literal_applies.begin(), literal_applies.end(), 1);
    body["component_formula_passed"] = std::count(literal_ok.begin(), literal_ok.end(), 1);
  }
  const auto bad = std::find(ok.begin(), ok.end(), 0);
  if (bad != ok.end()) {
    const auto& fx = fixtures[static_cast<std::size_t>(bad - ok.begin())];
    json optima = json::array(), outputs = json::array();
    for (const auto& g : optimal_projections(fx)) optima.push_back(graph_edges(g));
    for (const auto& g : enumerate_projector_outputs(fx.g_t, fx.g_hat, checker_factory(fx.property)))
      outputs.push_back(graph_edges(g));
    body["counterexample"] = {{"trial", bad - ok.begin()},
                              {"fixture", fx.describe()},
                              {"optima", optima},
                              {"projector_outputs", outputs}};
    err << "theorem " << a.theorem << " failed on trial " << (bad - ok.begin()) << ": " << fx.describe() << "\n";
  }
  out << report(config, body).dump(2) << "\n";
  return bad == ok.end() ? kExitOk : kExitRuntime;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Constrained discrete graph diffusion toolkit", "construct"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.fallthrough(false);

  Common common;

  DatasetArgs ds;
  auto* gen = app.add_subcommand("generate-dataset", "Write train/val/test splits of a synthetic family");
  add_common(gen, common);
  gen->add_option("--family", ds.family, "planar|tree|lobster|cellgraph")->required();
  gen->add_option("--counts", ds.counts, "train,val,test counts");
  gen->add_option("--n", ds.n, "Node count for planar and tree");
  gen->add_option("--out", ds.out, "Output directory")->required();

  TrainArgs tr;
  auto* train = app.add_subcommand("train", "Fit a denoiser and write a checkpoint");
  add_common(train, common);
  train->add_option("--train", tr.train, "Training graphs (.jsonl)")->required();
  train->add_option("--model", tr.model, "featurized|baseline");
  train->add_option("--steps", tr.steps, "Optimizer steps");
  train->add_option("--batch-size", tr.batch_size, "Graphs per step");
  train->add_option("--lr", tr.lr, "Learning rate");
  train->add_option("--momentum", tr.momentum, "Momentum");
  train->add_option("--lambda", tr.lambda, "Edge loss weight");
  train->add_option("--T", tr.T, "Diffusion steps");
  train->add_option("--schedule", tr.schedule, "Node schedule (cosine)");
  train->add_option("--edge-schedule", tr.edge_schedule, "Edge schedule (absorbing)");
  train->add_option("--cosine-s", tr.cosine_s, "Cosine schedule offset");
  train->add_option("--property", tr.property, "Warn when training graphs violate this property");
  train->add_option("--log-every", tr.log_every, "Loss log interval (0 = silent)");
  train->add_option("--out", tr.out, "Checkpoint path")->required();

  SampleArgs sa;
  auto* smp = app.add_subcommand("sample", "Generate graphs from a checkpoint");
  add_common(smp, common);
  smp->add_option("--model", sa.model, "Checkpoint path")->required();
  smp->add_option("--count", sa.count, "Number of graphs");
  smp->add_option("--mode", sa.mode, "constrained|unconstrained|rejection|project_end");
  smp->add_option("--property", sa.property, "planar|acyclic|lobster|max_degree:k|none");
  smp->add_option("--projector", sa.projector, "uniform|det|stoch|off");
  smp->add_option("--max-attempts", sa.max_attempts, "Trajectory budget for rejection mode");
  smp->add_option("--out", sa.out, "Output graphs (.jsonl)")->required();

  EvaluateArgs ev;
  auto* eva = app.add_subcommand("evaluate", "Score generated graphs against train and test sets");
  add_common(eva, common);
  eva->add_option("--generated", ev.generated, "Generated graphs")->required();
  eva->add_option("--train", ev.train, "Training graphs")->required();
  eva->add_option("--test", ev.test, "Test graphs")->required();
  eva->add_option("--validity", ev.validity, "none|planar|tree|lobster|tls_low|tls_high");
  eva->add_option("--out", ev.out, "Report path (default stdout)");

  ProjectArgs pj;
  auto* prj = app.add_subcommand("project", "Project each g_hat onto the property starting from g_t");
  add_common(prj, common);
  prj->add_option("--g-t", pj.g_t, "Graphs satisfying the property")->required();
  prj->add_option("--g-hat", pj.g_hat, "Proposals, one per g_t graph")->required();
  prj->add_option("--property", pj.property, "planar|acyclic|lobster|max_degree:k|none");
  prj->add_option("--projector", pj.projector, "uniform|det|stoch");
  prj->add_option("--out", pj.out, "Output graphs (.jsonl)")->required();

  CheckArgs ck;
  auto* chk = app.add_subcommand("check", "Check projector optimality claims on random fixtures");
  add_common(chk, common);
  chk->add_option("--theorem", ck.theorem, "1 (optima reachable) or 2 (acyclic optimality)");
  chk->add_option("--property", ck.property, "Property (theorem 2: acyclic)");
  chk->add_option("--trials", ck.trials, "Number of random fixtures");
  chk->add_option("--max-nodes", ck.max_nodes, "Largest fixture (default 6, or 7 for theorem 2)");
  chk->add_option("--max-candidates", ck.max_candidates, "Most candidate edges per fixture");

  if (args.empty()) {
    err << app.help();
    return kExitUsage;
  }

  try {
    // Config defaults go in front of the explicit flags; with TakeLast the flags win.
    std::vector<std::string> tokens = args;
    if (auto* sub = app.get_subcommand_no_throw(args.front())) {
      const auto it = std::find(args.begin() + 1, args.end(), "--config");
      std::optional<std::string> path;
      if (it != args.end() && it + 1 != args.end()) path = *(it + 1);
      for (auto a = args.begin() + 1; a != args.end(); ++a)
        if (a->rfind("--config=", 0) == 0) path = a->substr(9);
      if (path) {
        auto extra = config_tokens(*path, *sub);
        tokens.insert(tokens.begin() + 1, extra.begin(), extra.end());
      }
    }
    std::reverse(tokens.begin(), tokens.end());
    app.parse(tokens);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_generate(*gen, common, ds, out, err);
    if (train->parsed()) return cmd_train(*train, common, tr, out, err);
    if (smp->parsed()) return cmd_sample(*smp, common, sa, out, err);
    if (eva->parsed()) return cmd_evaluate(common, ev, out, err);
    if (prj->parsed()) return cmd_project(*prj, common, pj, out);
    if (chk->parsed()) return cmd_check(*chk, common, ck, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace construct::cli
