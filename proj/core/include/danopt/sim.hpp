#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "danopt/engines.hpp"
#include "danopt/graph.hpp"
#include "danopt/newton.hpp"
#include "danopt/objectives.hpp"

namespace danopt {

enum class Algorithm { dan, dan_la, gd, polyak };
enum class TopologyKind { tree, erdos_renyi, file };
enum class ProblemKind { synth_quadratic, synth_logistic, csv };

std::string to_string(Algorithm a);
// Inverse of to_string; throws ConfigError on unknown names.
Algorithm algorithm_from_string(const std::string& text);

struct TopologySpec {
  TopologyKind kind = TopologyKind::tree;
  std::uint32_t nodes = 1;
  std::string path;  // kind == file only
};

struct ProblemSpec {
  ProblemKind kind = ProblemKind::synth_quadratic;
  // synth-quadratic: spectrum edges of the summed Hessian.
  int dimension = 8;
  double mu = 1.0;
  double hessian_bound = 10.0;
  // synth-logistic
  std::uint64_t samples = 200;
  double feature_scale = 1.0;
  // csv
  std::string path;
  int label_column = -1;
  bool normalize = true;
  bool has_header = false;
  // logistic problems (synthetic and csv)
  std::optional<double> ridge;  // total ridge override
  RidgeSplit ridge_split = RidgeSplit::proportional;
};

// Full description of one experiment. The master seed fans out into one
// child stream per consumer (topology, partition, problem, initial point),
// so the run is a pure function of this struct.
struct SimConfig {
  Algorithm algorithm = Algorithm::dan;
  std::uint64_t seed = 0;
  TopologySpec topology;
  ProblemSpec problem;

  // Explicit regularity constants. When absent they are derived: from the
  // declared spectrum for synthetic quadratics (with unit Lipschitz
  // constant, valid for any quadratic), or from the certified worst-case
  // formulas for logistic problems (the conventional preset when
  // certified_constants is false).
  std::optional<ProblemConstants> constants;
  bool certified_constants = true;
  double balance = 0;  // applied when constants are derived

  int warm_start = 0;
  double warm_start_smoothness = 0;  // 0 -> hessian bound
  double tolerance = 1e-10;
  int max_iterations = 500;
  bool use_smw = false;
  double x0_scale = 0;  // 0 -> zeros; else seeded gaussian * scale

  void validate() const;  // throws ConfigError naming the field
};

// Strict JSON parsing: unknown keys, wrong types and out-of-range values
// raise ConfigError naming the offending field path.
SimConfig parse_config(const std::string& json_text);
SimConfig load_config(const std::string& path);

// {"runs": [config, config, ...]} -> the list; empty list is an error.
std::vector<SimConfig> parse_sweep_config(const std::string& json_text);
std::vector<SimConfig> load_sweep_config(const std::string& path);

// Stable serialization of the effective configuration (defaults filled in,
// keys sorted); equal configs produce equal strings.
std::string canonical_config_json(const SimConfig& config);
// FNV-1a 64 over the canonical serialization.
std::uint64_t config_hash(const SimConfig& config);

struct RunResult {
  SimConfig config;
  EngineResult engine;
  std::uint32_t node_count = 1;
  int dimension = 0;
  std::optional<Eigen::VectorXd> x_star;          // known optimum (quadratics)
  std::optional<ConvergenceBounds> bounds;        // adaptive-Newton runs only
  std::optional<Partition> partition;             // logistic runs only
  ProblemConstants effective_constants;
};

// Builds topology, problem and engine from the config and drives the run
// to completion. Deterministic given the master seed: the spanning tree is
// extracted once up front and reused every iteration.
RunResult run_experiment(const SimConfig& config);

// Independent runs in input order. Per-run failures are recorded, not
// thrown; an empty input list is an error.
struct SweepEntry {
  std::optional<RunResult> result;
  std::string error;  // empty on success

  bool ok() const { return result.has_value(); }
};
std::vector<SweepEntry> sweep(const std::vector<SimConfig>& configs);

// {config_hash, iterations, final_grad_norm, total_bits_per_node} plus a
// few labelled extras (algorithm, converged, payload-only bits).
void write_summary_json(std::ostream& out, const RunResult& result);

// Per-node sent/received scalars, messages and bits, both payload-only and
// with identifier overhead, plus the per-message scalar sizes of the two
// flooding formats (the dense-Hessian format is also listed under its
// naive full-matrix size for comparability with unpacked accounting).
void write_ledger_json(std::ostream& out, const RunResult& result);

// {"0": [row indices], "1": [...], ...}
void write_partition_json(std::ostream& out, const Partition& partition);

}  // namespace danopt
