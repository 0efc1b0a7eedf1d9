#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <vector>

#include "danopt/comm_ledger.hpp"
#include "danopt/dsf.hpp"
#include "danopt/graph.hpp"
#include "danopt/linalg.hpp"
#include "danopt/newton.hpp"
#include "danopt/objectives.hpp"

namespace danopt {

// What one optimizer iteration did, as observed at node 0 (all nodes make
// the same decision; run loops verify that).
struct IterationOutcome {
  double grad_norm = 0;
  double stepsize = 0;
  bool updated = false;
  bool converged = false;
  double error_bound = 0;  // accumulated low-rank error, low-rank engine only
};

// Distributed adaptive Newton over a spanning tree. Every node floods its
// local gradient and Hessian, aggregates all n contributions in ascending
// node order, and applies the same damped Newton step. The arithmetic per
// node is identical to the centralized baseline, so iterates agree bit for
// bit with it (and across nodes).
class DanEngine {
 public:
  DanEngine(SpanningTree tree,
            std::vector<std::shared_ptr<const ObjectiveOracle>> oracles,
            ProblemConstants constants, const Eigen::VectorXd& x0);

  // Full iteration: oracles, flood of (gradient, packed Hessian), Newton
  // update. The convergence threshold is fixed by the first observed
  // global gradient norm.
  IterationOutcome iterate(const StopRule& stop);
  // Gradient-only flood and a descent step of 2/(mu + smoothness); the
  // warm-start phase.
  IterationOutcome iterate_gradient(const StopRule& stop, double smoothness);

  NodeId node_count() const { return tree_.node_count(); }
  const Eigen::VectorXd& node_state(NodeId v) const { return x_.at(v); }
  bool states_identical() const;
  const CommLedger& ledger() const { return ledger_; }

 private:
  SpanningTree tree_;
  std::vector<std::shared_ptr<const ObjectiveOracle>> oracles_;
  ProblemConstants constants_;
  std::vector<Eigen::VectorXd> x_;
  CommLedger ledger_;
  std::optional<double> threshold_;
  int dim_ = 0;
};

// Communication-compressed variant. Each node keeps a running estimate of
// its own Hessian and of the global one; per iteration it floods only
// (error, sign, gradient, direction), i.e. 2p+2 scalars, where sign and
// direction encode the best rank-1 approximation of its local Hessian
// innovation. Updates are gated on the accumulated error bound; gated-off
// iterations leave x unchanged and sharpen the estimate instead.
class DanLaEngine {
 public:
  DanLaEngine(SpanningTree tree,
              std::vector<std::shared_ptr<const ObjectiveOracle>> oracles,
              ProblemConstants constants, const Eigen::VectorXd& x0,
              bool use_smw = false);

  IterationOutcome iterate(const StopRule& stop);
  IterationOutcome iterate_gradient(const StopRule& stop, double smoothness);

  NodeId node_count() const { return tree_.node_count(); }
  const Eigen::VectorXd& node_state(NodeId v) const { return x_.at(v); }
  // Node v's estimate of the global Hessian and of its own local one.
  const SymmetricMatrix& node_global_estimate(NodeId v) const;
  const SymmetricMatrix& node_local_estimate(NodeId v) const;
  bool states_identical() const;
  const CommLedger& ledger() const { return ledger_; }

 private:
  Eigen::VectorXd solve_direction(NodeId v, const Eigen::VectorXd& g);

  SpanningTree tree_;
  std::vector<std::shared_ptr<const ObjectiveOracle>> oracles_;
  ProblemConstants constants_;
  bool use_smw_ = false;
  std::vector<Eigen::VectorXd> x_;
  std::vector<SymmetricMatrix> local_est_;
  std::vector<SymmetricMatrix> global_est_;
  std::vector<SmwSolver> smw_;
  std::vector<char> smw_valid_;
  CommLedger ledger_;
  std::optional<double> threshold_;
  int dim_ = 0;
};

// Drives an engine until the stop rule fires or the iteration cap is hit,
// recording one trace row per iteration (communication columns are per-node
// cumulative averages). The first warm_start_iterations iterations run the
// gradient phase.
EngineResult run_dan(SpanningTree tree,
                     std::vector<std::shared_ptr<const ObjectiveOracle>> oracles,
                     const ProblemConstants& constants,
                     const Eigen::VectorXd& x0, const RunOptions& options);

EngineResult run_danla(
    SpanningTree tree,
    std::vector<std::shared_ptr<const ObjectiveOracle>> oracles,
    const ProblemConstants& constants, const Eigen::VectorXd& x0,
    const RunOptions& options);

}  // namespace danopt
