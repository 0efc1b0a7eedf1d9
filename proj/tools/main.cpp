// Command-line front end: run experiments, sweep configurations, demo the
// set-consensus protocol, evaluate convergence guarantees, validate data.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "danopt/dsf.hpp"
#include "danopt/errors.hpp"
#include "danopt/graph.hpp"
#include "danopt/newton.hpp"
#include "danopt/objectives.hpp"
#include "danopt/rng.hpp"
#include "danopt/sim.hpp"
#include "danopt/trace.hpp"

namespace fs = std::filesystem;
using namespace danopt;

namespace {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> algorithm;
  std::optional<std::uint32_t> nodes;
  std::optional<double> balance;
  std::optional<int> warm_start;
  std::optional<int> cap;
  std::optional<double> tol;
};

void add_override_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--seed", o.seed, "Master seed override");
  cmd->add_option("--algorithm", o.algorithm,
                  "Algorithm override: dan, dan-la, gd, polyak");
  cmd->add_option("--nodes", o.nodes,
                  "Node count override (tree / erdos-renyi topologies)");
  cmd->add_option("--c", o.balance,
                  "Balance constant for the low-rank update gate");
  cmd->add_option("--warm-start", o.warm_start,
                  "Gradient-descent iterations before the Newton phase");
  cmd->add_option("--cap", o.cap, "Iteration cap override");
  cmd->add_option("--tol", o.tol, "Relative stop tolerance override");
}

void apply_overrides(const Overrides& o, SimConfig& config) {
  if (o.seed) config.seed = *o.seed;
  if (o.algorithm) config.algorithm = algorithm_from_string(*o.algorithm);
  if (o.nodes) {
    if (config.topology.kind == TopologyKind::file)
      throw ConfigError(
          "--nodes cannot override a file topology; edit the graph file");
    config.topology.nodes = *o.nodes;
  }
  if (o.balance) {
    config.balance = *o.balance;
    if (config.constants) config.constants->balance = *o.balance;
  }
  if (o.warm_start) config.warm_start = *o.warm_start;
  if (o.cap) config.max_iterations = *o.cap;
  if (o.tol) config.tolerance = *o.tol;
  config.validate();
}

fs::path resolve_out_dir(const std::string& cli_out) {
  if (!cli_out.empty()) return cli_out;
  if (const char* env = std::getenv("DANOPT_OUT")) {
    if (*env) return env;
  }
  return "danopt-out";
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

void write_run_outputs(const fs::path& dir, const RunResult& result) {
  fs::create_directories(dir);
  {
    auto out = open_output(dir / "trace.csv");
    write_trace_csv(out, result.engine.trace);
  }
  {
    auto out = open_output(dir / "summary.json");
    write_summary_json(out, result);
  }
  {
    auto out = open_output(dir / "ledger.json");
    write_ledger_json(out, result);
  }
  if (result.partition) {
    auto out = open_output(dir / "partition.json");
    write_partition_json(out, *result.partition);
  }
}

void print_run_line(std::ostream& out, const RunResult& result) {
  out << to_string(result.config.algorithm) << ": "
      << result.engine.iterations << " iterations, final |g| = "
      << std::setprecision(6) << std::scientific
      << result.engine.final_grad_norm
      << (result.engine.converged ? " (converged)" : " (iteration cap)")
      << std::defaultfloat << "\n";
}

int cmd_run(const std::string& config_path, const std::string& out,
            const Overrides& overrides) {
  SimConfig config = load_config(config_path);
  apply_overrides(overrides, config);
  const RunResult result = run_experiment(config);
  const fs::path dir = resolve_out_dir(out);
  write_run_outputs(dir, result);
  print_run_line(std::cout, result);
  std::cout << "outputs in " << dir.string() << "\n";
  return result.engine.converged ? 0 : 2;
}

int cmd_sweep(const std::string& config_path, const std::string& out,
              const Overrides& overrides) {
  std::vector<SimConfig> configs = load_sweep_config(config_path);
  for (SimConfig& config : configs) apply_overrides(overrides, config);
  const std::vector<SweepEntry> entries = sweep(configs);

  const fs::path dir = resolve_out_dir(out);
  bool any_error = false;
  bool any_cap = false;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    char name[16];
    std::snprintf(name, sizeof name, "run_%03zu", i);
    if (entries[i].ok()) {
      write_run_outputs(dir / name, *entries[i].result);
      std::cout << name << " ";
      print_run_line(std::cout, *entries[i].result);
      any_cap = any_cap || !entries[i].result->engine.converged;
    } else {
      any_error = true;
      std::cerr << name << " failed: " << entries[i].error << "\n";
    }
  }
  std::cout << "outputs in " << dir.string() << "\n";
  return any_error ? 1 : (any_cap ? 2 : 0);
}

Graph demo_graph(const std::string& topology, const std::string& graph_path,
                 std::uint32_t nodes, std::uint64_t seed, std::ostream& log) {
  const std::uint64_t topo_seed = stream_seed(seed, SeedStream::topology);
  if (topology == "tree") return generate_random_tree(nodes, topo_seed).graph;
  if (topology == "line") {
    Graph g(nodes, false);
    for (NodeId v = 0; v + 1 < nodes; ++v) g.add_edge(v, v + 1);
    return g;
  }
  if (topology == "er") {
    const Graph g = generate_erdos_renyi(nodes, topo_seed);
    log << "extracted a BFS spanning tree from the random graph ("
        << g.edge_count() << " edges); undirected consensus runs on trees\n";
    return bfs_spanning_tree(g, 0).graph;
  }
  if (topology == "directed-cycle") {
    Graph g(nodes, true);
    if (nodes > 1)
      for (NodeId v = 0; v < nodes; ++v) g.add_edge(v, (v + 1) % nodes);
    return g;
  }
  if (topology == "file") {
    if (graph_path.empty())
      throw ConfigError("topology 'file' needs --graph <path>");
    Graph g = load_graph(graph_path);
    if (!g.directed() && g.edge_count() + 1 != g.node_count()) {
      log << "file graph is not a tree; extracted a BFS spanning tree\n";
      return bfs_spanning_tree(g, 0).graph;
    }
    return g;
  }
  throw ConfigError(
      "unknown topology '" + topology +
      "'; expected tree, line, er, directed-cycle or file");
}

int cmd_consensus_demo(const std::string& topology,
                       const std::string& graph_path, std::uint32_t nodes,
                       std::uint64_t seed, const std::string& out) {
  const Graph g = demo_graph(topology, graph_path, nodes, seed, std::cout);
  const NodeId n = g.node_count();
  const int bound = default_round_budget(g);

  std::vector<TaggedMessage> payloads(n);
  for (NodeId v = 0; v < n; ++v) {
    payloads[v].origin = v;
    payloads[v].payload = {static_cast<double>(v)};
  }
  const DsfResult result = run_dsf(g, payloads);

  // Replay the reports to show how every node's information set grows.
  std::vector<std::set<NodeId>> info(n);
  for (NodeId v = 0; v < n; ++v) info[v].insert(v);
  for (const RoundReport& round : result.rounds) {
    for (const Transmission& t : round.transmissions)
      info[t.to].insert(t.origin);
    std::size_t lo = info[0].size(), hi = info[0].size();
    std::cout << "round " << round.round << ": info-set sizes";
    for (NodeId v = 0; v < n; ++v) {
      lo = std::min(lo, info[v].size());
      hi = std::max(hi, info[v].size());
    }
    if (n <= 16) {
      std::cout << " [";
      for (NodeId v = 0; v < n; ++v)
        std::cout << (v ? " " : "") << info[v].size();
      std::cout << "]";
    } else {
      std::cout << " min=" << lo << " max=" << hi;
    }
    std::cout << ", " << round.transmissions.size() << " transmissions\n";
  }

  const int completed = result.completion_round.value_or(-1);
  std::cout << "completed at round " << completed << " (round bound " << bound
            << ", " << (g.directed() ? "n + diameter - 1" : "n - 1") << ")\n";
  std::cout << "total transmissions: " << result.total_transmissions()
            << " (any protocol needs at least n - 1 = " << (n - 1) << ")\n";

  if (!out.empty()) {
    const fs::path dir = resolve_out_dir(out);
    fs::create_directories(dir);
    auto file = open_output(dir / "rounds.jsonl");
    write_round_reports_jsonl(file, result.rounds, message_id_bits(n));
    std::cout << "round log in " << (dir / "rounds.jsonl").string() << "\n";
  }

  if (completed > bound) {
    std::cerr << "error: completion exceeded the round bound\n";
    return 1;
  }
  return 0;
}

int cmd_bounds(double mu, double lipschitz, double grad0) {
  const ConvergenceBounds b = convergence_bounds(grad0, mu, lipschitz);
  std::cout << "k0 = " << b.damped_iterations << "\n";
  std::cout << std::setprecision(17);
  std::cout << "gamma = " << b.gamma << "\n";
  if (b.gamma_clamped)
    std::cout << "warning: gamma fell on the 1/2 boundary and was clamped "
                 "to the largest double below 1/2\n";
  if (b.damped_iterations == 0)
    std::cout << "pure Newton phase from the first iteration (no damped "
                 "phase)\n";
  for (double eps : {1e-4, 1e-8, 1e-12}) {
    std::cout << "eps = " << std::setprecision(1) << std::scientific << eps
              << std::defaultfloat << std::setprecision(17)
              << ": estimated iterations to |x - x*| <= eps: "
              << b.iteration_estimate(eps) << "\n";
  }
  return 0;
}

int cmd_validate_data(const std::string& data_path, int label_column,
                      bool no_normalize, bool has_header) {
  const LogisticProblem problem =
      load_csv_dataset(data_path, label_column, !no_normalize, has_header);
  const std::size_t m = problem.sample_count();
  std::size_t positives = 0;
  for (std::size_t i = 0; i < m; ++i)
    if (problem.labels[i] == 1.0) ++positives;

  std::cout << "samples: " << m << "\n";
  std::cout << "features: " << problem.feature_count() << "\n";
  std::cout << "positive labels: " << positives << " (" << (m - positives)
            << " negative)\n";
  std::cout << "default ridge (0.01 m): " << problem.ridge << "\n";

  const ProblemConstants constants = certified_logistic_constants(problem);
  std::cout << std::setprecision(17);
  std::cout << "certified constants:\n";
  std::cout << "  strong convexity  mu = " << constants.strong_convexity
            << "\n";
  std::cout << "  hessian lipschitz L  = " << constants.hessian_lipschitz
            << "\n";
  std::cout << "  hessian bound     M  = " << constants.hessian_bound << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Deterministic testbed for communication-efficient distributed "
      "second-order optimization over peer-to-peer networks"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand(
      "run", "Run one experiment from a JSON config; writes trace.csv, "
             "summary.json, ledger.json");
  std::string run_config, run_out;
  Overrides run_overrides;
  run->add_option("--config", run_config, "JSON config path")->required();
  run->add_option("--out", run_out,
                  "Output directory (default: $DANOPT_OUT or ./danopt-out)");
  add_override_flags(run, run_overrides);

  auto* sw = app.add_subcommand(
      "sweep", "Run every config in {\"runs\": [...]}; one subdirectory per "
               "run, failures reported on stderr");
  std::string sweep_config, sweep_out;
  Overrides sweep_overrides;
  sw->add_option("--config", sweep_config, "JSON sweep config path")
      ->required();
  sw->add_option("--out", sweep_out,
                 "Output directory (default: $DANOPT_OUT or ./danopt-out)");
  add_override_flags(sw, sweep_overrides);

  auto* demo = app.add_subcommand(
      "consensus-demo", "Run finite-time set consensus on a chosen topology "
                        "and print per-round progress");
  std::string demo_topology = "tree", demo_graph_path, demo_out;
  std::uint32_t demo_nodes = 10;
  std::uint64_t demo_seed = 0;
  demo->add_option("--topology", demo_topology,
                   "tree, line, er, directed-cycle or file");
  demo->add_option("--graph", demo_graph_path,
                   "Graph file (for --topology file)");
  demo->add_option("--nodes", demo_nodes, "Node count (generated topologies)");
  demo->add_option("--seed", demo_seed, "Topology seed");
  demo->add_option("--out", demo_out, "Write rounds.jsonl to this directory");

  auto* bounds = app.add_subcommand(
      "bounds", "Print the damped-phase length, contraction factor and "
                "iteration estimates for the adaptive Newton step rule");
  double bounds_mu = 1.0, bounds_lipschitz = 1.0, bounds_grad0 = 1.0;
  bounds->add_option("--mu", bounds_mu, "Strong convexity constant")
      ->required();
  bounds->add_option("--lipschitz", bounds_lipschitz,
                     "Hessian Lipschitz constant")
      ->required();
  bounds->add_option("--grad0", bounds_grad0, "Initial gradient norm")
      ->required();

  auto* validate = app.add_subcommand(
      "validate-data", "Parse a CSV dataset strictly and print its shape "
                       "and certified constants");
  std::string validate_path;
  int validate_label = -1;
  bool validate_no_normalize = false, validate_header = false;
  validate->add_option("--data", validate_path, "CSV path")->required();
  validate->add_option("--label-column", validate_label,
                       "Label column index (-1 means last)");
  validate->add_flag("--no-normalize", validate_no_normalize,
                     "Skip the affine [-1,1] feature normalization");
  validate->add_flag("--has-header", validate_header,
                     "Skip the first line");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) return cmd_run(run_config, run_out, run_overrides);
    if (sw->parsed()) return cmd_sweep(sweep_config, sweep_out, sweep_overrides);
    if (demo->parsed())
      return cmd_consensus_demo(demo_topology, demo_graph_path, demo_nodes,
                                demo_seed, demo_out);
    if (bounds->parsed())
      return cmd_bounds(bounds_mu, bounds_lipschitz, bounds_grad0);
    if (validate->parsed())
      return cmd_validate_data(validate_path, validate_label,
                               validate_no_normalize, validate_header);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cerr << "error: no subcommand\n";
  return 1;
}
