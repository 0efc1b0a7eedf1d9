#include "danopt/sim.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "danopt/errors.hpp"
#include "danopt/rng.hpp"

namespace danopt {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::dan: return "dan";
    case Algorithm::dan_la: return "dan-la";
    case Algorithm::gd: return "gd";
    case Algorithm::polyak: return "polyak";
  }
  throw ConfigError("unknown algorithm value");
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config: " + path + " " + what);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void expect_keys(const json& obj, const std::string& path,
                 std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* a : allowed) {
      if (item.key() == a) {
        known = true;
        break;
      }
    }
    if (!known) fail(join(path, item.key()), "is not a recognized key");
  }
}

const json* find(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

bool get_bool(const json& obj, const std::string& path, const char* key,
              bool def) {
  const json* v = find(obj, key);
  if (!v) return def;
  if (!v->is_boolean()) fail(join(path, key), "must be a boolean");
  return v->get<bool>();
}

std::int64_t get_int(const json& obj, const std::string& path, const char* key,
                     std::int64_t def) {
  const json* v = find(obj, key);
  if (!v) return def;
  if (!v->is_number_integer()) fail(join(path, key), "must be an integer");
  return v->get<std::int64_t>();
}

std::uint64_t get_uint(const json& obj, const std::string& path,
                       const char* key, std::uint64_t def) {
  const json* v = find(obj, key);
  if (!v) return def;
  if (v->is_number_unsigned()) return v->get<std::uint64_t>();
  if (v->is_number_integer() && v->get<std::int64_t>() >= 0)
    return static_cast<std::uint64_t>(v->get<std::int64_t>());
  fail(join(path, key), "must be a non-negative integer");
}

double get_double(const json& obj, const std::string& path, const char* key,
                  double def) {
  const json* v = find(obj, key);
  if (!v) return def;
  if (!v->is_number()) fail(join(path, key), "must be a number");
  return v->get<double>();
}

std::string get_string(const json& obj, const std::string& path,
                       const char* key, const std::string& def) {
  const json* v = find(obj, key);
  if (!v) return def;
  if (!v->is_string()) fail(join(path, key), "must be a string");
  return v->get<std::string>();
}

Algorithm parse_algorithm(const std::string& text, const std::string& path) {
  if (text == "dan") return Algorithm::dan;
  if (text == "dan-la") return Algorithm::dan_la;
  if (text == "gd") return Algorithm::gd;
  if (text == "polyak") return Algorithm::polyak;
  fail(path, "must be one of dan, dan-la, gd, polyak");
}

TopologySpec parse_topology(const json& obj, const std::string& path) {
  if (!obj.is_object()) fail(path, "must be an object");
  TopologySpec spec;
  const std::string kind = get_string(obj, path, "kind", "tree");
  if (kind == "tree") {
    spec.kind = TopologyKind::tree;
    expect_keys(obj, path, {"kind", "nodes"});
  } else if (kind == "erdos-renyi") {
    spec.kind = TopologyKind::erdos_renyi;
    expect_keys(obj, path, {"kind", "nodes"});
  } else if (kind == "file") {
    spec.kind = TopologyKind::file;
    expect_keys(obj, path, {"kind", "path"});
    spec.path = get_string(obj, path, "path", "");
    if (spec.path.empty()) fail(join(path, "path"), "is required");
    return spec;
  } else {
    fail(join(path, "kind"), "must be one of tree, erdos-renyi, file");
  }
  const std::int64_t nodes = get_int(obj, path, "nodes", 1);
  if (nodes < 1 || nodes > 100000)
    fail(join(path, "nodes"), "must be in [1, 100000]");
  spec.nodes = static_cast<std::uint32_t>(nodes);
  return spec;
}

ProblemSpec parse_problem(const json& obj, const std::string& path) {
  if (!obj.is_object()) fail(path, "must be an object");
  ProblemSpec spec;
  const std::string kind = get_string(obj, path, "kind", "synth-quadratic");
  if (kind == "synth-quadratic") {
    spec.kind = ProblemKind::synth_quadratic;
    expect_keys(obj, path, {"kind", "dimension", "mu", "hessian_bound"});
    spec.dimension = static_cast<int>(get_int(obj, path, "dimension", 8));
    spec.mu = get_double(obj, path, "mu", 1.0);
    spec.hessian_bound = get_double(obj, path, "hessian_bound", 10.0);
  } else if (kind == "synth-logistic") {
    spec.kind = ProblemKind::synth_logistic;
    expect_keys(obj, path,
                {"kind", "dimension", "samples", "feature_scale", "ridge",
                 "ridge_split"});
    spec.dimension = static_cast<int>(get_int(obj, path, "dimension", 8));
    spec.samples = get_uint(obj, path, "samples", 200);
    spec.feature_scale = get_double(obj, path, "feature_scale", 1.0);
  } else if (kind == "csv") {
    spec.kind = ProblemKind::csv;
    expect_keys(obj, path,
                {"kind", "path", "label_column", "normalize", "has_header",
                 "ridge", "ridge_split"});
    spec.path = get_string(obj, path, "path", "");
    if (spec.path.empty()) fail(join(path, "path"), "is required");
    spec.label_column =
        static_cast<int>(get_int(obj, path, "label_column", -1));
    spec.normalize = get_bool(obj, path, "normalize", true);
    spec.has_header = get_bool(obj, path, "has_header", false);
  } else {
    fail(join(path, "kind"),
         "must be one of synth-quadratic, synth-logistic, csv");
  }
  if (kind != "synth-quadratic") {
    if (find(obj, "ridge"))
      spec.ridge = get_double(obj, path, "ridge", 0.0);
    const std::string split =
        get_string(obj, path, "ridge_split", "proportional");
    if (split == "proportional") {
      spec.ridge_split = RidgeSplit::proportional;
    } else if (split == "equal") {
      spec.ridge_split = RidgeSplit::equal;
    } else {
      fail(join(path, "ridge_split"), "must be proportional or equal");
    }
  }
  return spec;
}

ProblemConstants parse_constants(const json& obj, const std::string& path) {
  if (!obj.is_object()) fail(path, "must be an object");
  expect_keys(obj, path,
              {"mu", "hessian_lipschitz", "hessian_bound", "balance"});
  ProblemConstants c;
  if (!find(obj, "mu")) fail(join(path, "mu"), "is required");
  if (!find(obj, "hessian_lipschitz"))
    fail(join(path, "hessian_lipschitz"), "is required");
  if (!find(obj, "hessian_bound"))
    fail(join(path, "hessian_bound"), "is required");
  c.strong_convexity = get_double(obj, path, "mu", 0.0);
  c.hessian_lipschitz = get_double(obj, path, "hessian_lipschitz", 0.0);
  c.hessian_bound = get_double(obj, path, "hessian_bound", 0.0);
  c.balance = get_double(obj, path, "balance", 0.0);
  return c;
}

SimConfig parse_config_json(const json& root, const std::string& path) {
  if (!root.is_object()) fail(path.empty() ? "root" : path, "must be an object");
  expect_keys(root, path,
              {"algorithm", "seed", "topology", "problem", "constants",
               "certified_constants", "balance", "warm_start",
               "warm_start_smoothness", "tolerance", "max_iterations",
               "use_smw", "x0_scale"});

  SimConfig config;
  config.algorithm = parse_algorithm(
      get_string(root, path, "algorithm", "dan"), join(path, "algorithm"));
  config.seed = get_uint(root, path, "seed", 0);
  if (const json* topo = find(root, "topology"))
    config.topology = parse_topology(*topo, join(path, "topology"));
  if (const json* prob = find(root, "problem"))
    config.problem = parse_problem(*prob, join(path, "problem"));
  if (const json* consts = find(root, "constants"))
    config.constants = parse_constants(*consts, join(path, "constants"));
  config.certified_constants =
      get_bool(root, path, "certified_constants", true);
  config.balance = get_double(root, path, "balance", 0.0);
  config.warm_start =
      static_cast<int>(get_int(root, path, "warm_start", 0));
  config.warm_start_smoothness =
      get_double(root, path, "warm_start_smoothness", 0.0);
  config.tolerance = get_double(root, path, "tolerance", 1e-10);
  config.max_iterations =
      static_cast<int>(get_int(root, path, "max_iterations", 500));
  config.use_smw = get_bool(root, path, "use_smw", false);
  config.x0_scale = get_double(root, path, "x0_scale", 0.0);
  config.validate();
  return config;
}

json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: not valid JSON: ") + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

void SimConfig::validate() const {
  if (topology.kind == TopologyKind::file) {
    if (topology.path.empty()) fail("topology.path", "is required");
    if (!std::filesystem::exists(topology.path))
      fail("topology.path", "does not exist: " + topology.path);
  } else if (topology.nodes < 1) {
    fail("topology.nodes", "must be >= 1");
  }

  switch (problem.kind) {
    case ProblemKind::synth_quadratic:
      if (problem.dimension < 1) fail("problem.dimension", "must be >= 1");
      if (!(problem.mu > 0)) fail("problem.mu", "must be > 0");
      if (!(problem.hessian_bound >= problem.mu))
        fail("problem.hessian_bound", "must be >= problem.mu");
      break;
    case ProblemKind::synth_logistic:
      if (problem.dimension < 1) fail("problem.dimension", "must be >= 1");
      if (problem.samples < 1) fail("problem.samples", "must be >= 1");
      if (!(problem.feature_scale > 0))
        fail("problem.feature_scale", "must be > 0");
      break;
    case ProblemKind::csv:
      if (problem.path.empty()) fail("problem.path", "is required");
      if (!std::filesystem::exists(problem.path))
        fail("problem.path", "does not exist: " + problem.path);
      if (problem.label_column < -1)
        fail("problem.label_column", "must be >= -1 (-1 means last)");
      break;
  }
  if (problem.ridge && !(*problem.ridge > 0))
    fail("problem.ridge", "must be > 0");
  if (problem.kind != ProblemKind::synth_quadratic && !certified_constants &&
      problem.ridge) {
    fail("certified_constants",
         "= false uses the conventional preset, which presumes the default "
         "ridge 0.01 m; drop the ridge override or the flag");
  }

  if (!(balance >= 0)) fail("balance", "must be >= 0");
  if (warm_start < 0) fail("warm_start", "must be >= 0");
  if (!(warm_start_smoothness >= 0))
    fail("warm_start_smoothness", "must be >= 0");
  if (!(tolerance > 0)) fail("tolerance", "must be > 0");
  if (max_iterations < 1) fail("max_iterations", "must be >= 1");
  if (!(x0_scale >= 0)) fail("x0_scale", "must be >= 0");
}

Algorithm algorithm_from_string(const std::string& text) {
  return parse_algorithm(text, "algorithm");
}

SimConfig parse_config(const std::string& json_text) {
  return parse_config_json(parse_json_text(json_text), "");
}

SimConfig load_config(const std::string& path) {
  return parse_config(read_file(path));
}

std::vector<SimConfig> parse_sweep_config(const std::string& json_text) {
  const json root = parse_json_text(json_text);
  if (!root.is_object()) fail("root", "must be an object");
  expect_keys(root, "", {"runs"});
  const json* runs = find(root, "runs");
  if (!runs || !runs->is_array()) fail("runs", "must be an array");
  if (runs->empty()) fail("runs", "must not be empty");
  std::vector<SimConfig> configs;
  configs.reserve(runs->size());
  for (std::size_t i = 0; i < runs->size(); ++i) {
    configs.push_back(
        parse_config_json((*runs)[i], "runs[" + std::to_string(i) + "]"));
  }
  return configs;
}

std::vector<SimConfig> load_sweep_config(const std::string& path) {
  return parse_sweep_config(read_file(path));
}

std::string canonical_config_json(const SimConfig& config) {
  json j;
  j["algorithm"] = to_string(config.algorithm);
  j["seed"] = config.seed;
  j["balance"] = config.balance;
  j["certified_constants"] = config.certified_constants;
  j["warm_start"] = config.warm_start;
  j["warm_start_smoothness"] = config.warm_start_smoothness;
  j["tolerance"] = config.tolerance;
  j["max_iterations"] = config.max_iterations;
  j["use_smw"] = config.use_smw;
  j["x0_scale"] = config.x0_scale;

  json topo;
  switch (config.topology.kind) {
    case TopologyKind::tree:
      topo["kind"] = "tree";
      topo["nodes"] = config.topology.nodes;
      break;
    case TopologyKind::erdos_renyi:
      topo["kind"] = "erdos-renyi";
      topo["nodes"] = config.topology.nodes;
      break;
    case TopologyKind::file:
      topo["kind"] = "file";
      topo["path"] = config.topology.path;
      break;
  }
  j["topology"] = topo;

  json prob;
  switch (config.problem.kind) {
    case ProblemKind::synth_quadratic:
      prob["kind"] = "synth-quadratic";
      prob["dimension"] = config.problem.dimension;
      prob["mu"] = config.problem.mu;
      prob["hessian_bound"] = config.problem.hessian_bound;
      break;
    case ProblemKind::synth_logistic:
      prob["kind"] = "synth-logistic";
      prob["dimension"] = config.problem.dimension;
      prob["samples"] = config.problem.samples;
      prob["feature_scale"] = config.problem.feature_scale;
      break;
    case ProblemKind::csv:
      prob["kind"] = "csv";
      prob["path"] = config.problem.path;
      prob["label_column"] = config.problem.label_column;
      prob["normalize"] = config.problem.normalize;
      prob["has_header"] = config.problem.has_header;
      break;
  }
  if (config.problem.kind != ProblemKind::synth_quadratic) {
    if (config.problem.ridge) prob["ridge"] = *config.problem.ridge;
    prob["ridge_split"] = config.problem.ridge_split == RidgeSplit::equal
                              ? "equal"
                              : "proportional";
  }
  j["problem"] = prob;

  if (config.constants) {
    j["constants"] = {
        {"mu", config.constants->strong_convexity},
        {"hessian_lipschitz", config.constants->hessian_lipschitz},
        {"hessian_bound", config.constants->hessian_bound},
        {"balance", config.constants->balance},
    };
  }
  return j.dump();
}

std::uint64_t config_hash(const SimConfig& config) {
  const std::string text = canonical_config_json(config);
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

struct BuiltProblem {
  std::vector<std::shared_ptr<const ObjectiveOracle>> oracles;
  ProblemConstants constants;
  std::optional<Eigen::VectorXd> x_star;
  std::optional<Partition> partition;
  int dimension = 0;
};

BuiltProblem build_problem(const SimConfig& config, std::uint32_t nodes,
                           std::uint64_t problem_seed,
                           std::uint64_t partition_seed) {
  BuiltProblem built;
  if (config.problem.kind == ProblemKind::synth_quadratic) {
    QuadraticFamily family =
        synth_quadratic(nodes, config.problem.dimension, config.problem.mu,
                        config.problem.hessian_bound, problem_seed);
    built.oracles = std::move(family.node_oracles);
    built.x_star = std::move(family.x_star);
    built.dimension = config.problem.dimension;
    if (config.constants) {
      built.constants = *config.constants;
    } else {
      // Any positive Lipschitz constant is valid for a quadratic; 1 is the
      // neutral default. Override via "constants" to study the step rule.
      built.constants = ProblemConstants{config.problem.mu, 1.0,
                                         config.problem.hessian_bound,
                                         config.balance};
    }
    return built;
  }

  LogisticProblem problem =
      config.problem.kind == ProblemKind::csv
          ? load_csv_dataset(config.problem.path, config.problem.label_column,
                             config.problem.normalize,
                             config.problem.has_header)
          : make_synthetic_logistic(config.problem.samples,
                                    config.problem.dimension, problem_seed,
                                    config.problem.feature_scale);
  if (config.problem.ridge) problem.ridge = *config.problem.ridge;
  built.dimension = problem.feature_count();

  const std::size_t m = problem.sample_count();
  auto shared = std::make_shared<const LogisticProblem>(std::move(problem));
  Partition partition = partition_dataset(m, nodes, partition_seed);
  built.oracles = make_logistic_node_oracles(shared, partition,
                                             config.problem.ridge_split);
  built.partition = std::move(partition);

  if (config.constants) {
    built.constants = *config.constants;
  } else if (config.certified_constants) {
    built.constants = certified_logistic_constants(*shared);
    built.constants.balance = config.balance;
  } else {
    built.constants = standard_logistic_preset(m).constants;
    built.constants.balance = config.balance;
  }
  return built;
}

}  // namespace

RunResult run_experiment(const SimConfig& config) {
  config.validate();

  const std::uint64_t topology_seed =
      stream_seed(config.seed, SeedStream::topology);
  const std::uint64_t partition_seed =
      stream_seed(config.seed, SeedStream::partition);
  const std::uint64_t problem_seed =
      stream_seed(config.seed, SeedStream::problem);
  const std::uint64_t x0_seed =
      stream_seed(config.seed, SeedStream::initial_point);

  const bool distributed = config.algorithm == Algorithm::dan ||
                           config.algorithm == Algorithm::dan_la;

  // Topology first: it fixes the node count. The spanning tree is built
  // once here and reused by every iteration.
  std::uint32_t nodes = config.topology.nodes;
  std::optional<SpanningTree> tree;
  switch (config.topology.kind) {
    case TopologyKind::tree:
      if (distributed) tree = generate_random_tree(nodes, topology_seed);
      break;
    case TopologyKind::erdos_renyi:
      if (distributed) {
        const Graph g = generate_erdos_renyi(nodes, topology_seed);
        tree = bfs_spanning_tree(g, 0);
      }
      break;
    case TopologyKind::file: {
      const Graph g = load_graph(config.topology.path);
      if (g.directed())
        throw ConfigError(
            "config: topology.path: optimizer runs need an undirected "
            "graph; directed graphs are supported by the consensus demo "
            "only");
      nodes = g.node_count();
      if (distributed) tree = bfs_spanning_tree(g, 0);
      break;
    }
  }

  BuiltProblem built =
      build_problem(config, nodes, problem_seed, partition_seed);
  built.constants.validate();

  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(built.dimension);
  if (config.x0_scale > 0) {
    Rng rng(x0_seed);
    for (int i = 0; i < built.dimension; ++i)
      x0[i] = rng.normal() * config.x0_scale;
  }

  RunOptions options;
  options.stop.tol_rel = config.tolerance;
  options.stop.max_iterations = config.max_iterations;
  options.warm_start_iterations = config.warm_start;
  options.warm_start_smoothness = config.warm_start_smoothness;
  options.use_smw = config.use_smw;
  options.x_star = built.x_star;

  RunResult result;
  result.config = config;
  result.node_count = nodes;
  result.dimension = built.dimension;
  result.x_star = built.x_star;
  result.partition = built.partition;
  result.effective_constants = built.constants;

  switch (config.algorithm) {
    case Algorithm::dan:
      result.engine = run_dan(std::move(*tree), std::move(built.oracles),
                              built.constants, x0, options);
      break;
    case Algorithm::dan_la:
      result.engine = run_danla(std::move(*tree), std::move(built.oracles),
                                built.constants, x0, options);
      break;
    case Algorithm::polyak: {
      SumObjective objective(std::move(built.oracles));
      result.engine = run_polyak_newton(objective, x0, built.constants,
                                        options);
      break;
    }
    case Algorithm::gd: {
      SumObjective objective(std::move(built.oracles));
      const double smoothness = config.warm_start_smoothness > 0
                                    ? config.warm_start_smoothness
                                    : built.constants.hessian_bound;
      result.engine = run_gradient_descent(
          objective, x0, built.constants.strong_convexity, smoothness,
          options);
      break;
    }
  }

  // Closed-form guarantees apply to the adaptive Newton iteration run from
  // the very first step.
  const bool newton_like = config.algorithm == Algorithm::dan ||
                           config.algorithm == Algorithm::polyak;
  if (newton_like && config.warm_start == 0 && !result.engine.trace.empty()) {
    result.bounds = convergence_bounds(result.engine.trace.front().grad_norm,
                                       built.constants.strong_convexity,
                                       built.constants.hessian_lipschitz);
  }
  return result;
}

std::vector<SweepEntry> sweep(const std::vector<SimConfig>& configs) {
  if (configs.empty()) throw ConfigError("sweep: empty config list");
  std::vector<SweepEntry> entries;
  entries.reserve(configs.size());
  for (const SimConfig& config : configs) {
    SweepEntry entry;
    try {
      entry.result = run_experiment(config);
    } catch (const std::exception& e) {
      entry.error = e.what();
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

namespace {

std::string hash_hex(std::uint64_t h) {
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx",
                static_cast<unsigned long long>(h));
  return buffer;
}

}  // namespace

void write_summary_json(std::ostream& out, const RunResult& result) {
  ordered_json j;
  j["config_hash"] = hash_hex(config_hash(result.config));
  j["iterations"] = result.engine.iterations;
  j["final_grad_norm"] = result.engine.final_grad_norm;
  j["total_bits_per_node"] = result.engine.ledger.avg_total_bits_per_node();
  j["payload_bits_per_node"] =
      result.engine.ledger.avg_payload_bits_per_node();
  j["algorithm"] = to_string(result.config.algorithm);
  j["converged"] = result.engine.converged;
  j["updating_iterations"] = result.engine.updating_iterations;
  j["nodes"] = result.node_count;
  j["dimension"] = result.dimension;
  if (result.bounds) {
    j["bound_diagnostics"] = ordered_json{
        {"damped_iterations", result.bounds->damped_iterations},
        {"gamma", result.bounds->gamma},
        {"gamma_clamped", result.bounds->gamma_clamped},
        {"grad0_norm", result.bounds->grad0_norm},
    };
  }
  out << j.dump(2) << '\n';
}

void write_ledger_json(std::ostream& out, const RunResult& result) {
  const CommLedger& ledger = result.engine.ledger;
  ordered_json j;
  j["node_count"] = ledger.node_count();
  j["id_bits"] = ledger.id_bits();
  j["conservation_ok"] = ledger.conservation_ok();

  ordered_json per_node = ordered_json::array();
  for (NodeId v = 0; v < ledger.node_count(); ++v) {
    per_node.push_back(ordered_json{
        {"node", v},
        {"sent_scalars", ledger.sent_scalars(v)},
        {"sent_messages", ledger.sent_messages(v)},
        {"received_scalars", ledger.received_scalars(v)},
        {"received_messages", ledger.received_messages(v)},
        {"payload_bits", ledger.payload_bits(v)},
        {"total_bits", ledger.total_bits(v)},
    });
  }
  j["per_node"] = std::move(per_node);
  j["totals"] = ordered_json{
      {"sent_scalars", ledger.total_sent_scalars()},
      {"sent_messages", ledger.total_sent_messages()},
      {"avg_scalars_per_node", ledger.avg_scalars_per_node()},
      {"avg_payload_bits_per_node", ledger.avg_payload_bits_per_node()},
      {"avg_total_bits_per_node", ledger.avg_total_bits_per_node()},
  };

  // Per-message payload sizes for the two flooding formats at this
  // dimension. The dense format ships the packed upper triangle; the naive
  // full-matrix figure is what unpacked accounting would charge.
  const std::int64_t p = result.dimension;
  j["message_scalars"] = ordered_json{
      {"dense_flood", p * (p + 1) / 2 + p},
      {"dense_flood_naive_full_matrix", p * p + p},
      {"lowrank_flood", 2 * p + 2},
  };
  out << j.dump(2) << '\n';
}

void write_partition_json(std::ostream& out, const Partition& partition) {
  ordered_json j;
  for (std::size_t v = 0; v < partition.blocks.size(); ++v)
    j[std::to_string(v)] = partition.blocks[v];
  out << j.dump() << '\n';
}

}  // namespace danopt
