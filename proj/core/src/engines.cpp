#include "danopt/engines.hpp"

#include <algorithm>
#include <cstring>

#include "danopt/errors.hpp"

namespace danopt {

namespace {

std::vector<double> pack_gradient(const Eigen::VectorXd& g) {
  return {g.data(), g.data() + g.size()};
}

std::vector<double> pack_gradient_hessian(const Eigen::VectorXd& g,
                                          const SymmetricMatrix& h) {
  std::vector<double> payload;
  payload.reserve(g.size() + h.packed_size());
  payload.insert(payload.end(), g.data(), g.data() + g.size());
  const auto packed = h.packed();
  payload.insert(payload.end(), packed.begin(), packed.end());
  return payload;
}

// [error, sign, gradient, direction]
std::vector<double> pack_lowrank(double error, double sign,
                                 const Eigen::VectorXd& g,
                                 const Eigen::VectorXd& h) {
  std::vector<double> payload;
  payload.reserve(2 + g.size() + h.size());
  payload.push_back(error);
  payload.push_back(sign);
  payload.insert(payload.end(), g.data(), g.data() + g.size());
  payload.insert(payload.end(), h.data(), h.data() + h.size());
  return payload;
}

// Sum of the gradient blocks at `offset`, ascending origin. Coefficient-wise
// adds in the same order as SumObjective::gradient, so the result is
// bit-identical to the centralized aggregate.
Eigen::VectorXd sum_gradients(const std::vector<TaggedMessage>& payloads,
                              int dim, std::size_t offset) {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(dim);
  for (const auto& m : payloads)
    g += Eigen::Map<const Eigen::VectorXd>(m.payload.data() + offset, dim);
  return g;
}

bool bytes_equal(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(),
                     sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

int common_dimension(
    const std::vector<std::shared_ptr<const ObjectiveOracle>>& oracles,
    const SpanningTree& tree, const Eigen::VectorXd& x0) {
  if (oracles.size() != tree.node_count())
    throw ConfigError("need exactly one objective per node");
  for (const auto& o : oracles)
    if (!o || o->dimension() != oracles[0]->dimension())
      throw ConfigError("objective dimension mismatch across nodes");
  if (x0.size() != oracles[0]->dimension())
    throw ConfigError("starting point dimension mismatch");
  return oracles[0]->dimension();
}

}  // namespace

DanEngine::DanEngine(SpanningTree tree,
                     std::vector<std::shared_ptr<const ObjectiveOracle>> oracles,
                     ProblemConstants constants, const Eigen::VectorXd& x0)
    : tree_(std::move(tree)),
      oracles_(std::move(oracles)),
      constants_(constants),
      ledger_(tree_.node_count()) {
  constants_.validate();
  dim_ = common_dimension(oracles_, tree_, x0);
  x_.assign(tree_.node_count(), x0);
}

bool DanEngine::states_identical() const {
  for (std::size_t v = 1; v < x_.size(); ++v)
    if (!bytes_equal(x_[v], x_[0])) return false;
  return true;
}

IterationOutcome DanEngine::iterate(const StopRule& stop) {
  const NodeId n = node_count();
  std::vector<TaggedMessage> payloads(n);
  for (NodeId i = 0; i < n; ++i) {
    payloads[i].origin = i;
    payloads[i].payload = pack_gradient_hessian(oracles_[i]->gradient(x_[i]),
                                                oracles_[i]->hessian(x_[i]));
  }
  run_dsf(tree_.graph, payloads, {}, &ledger_);

  IterationOutcome out;
  for (NodeId i = 0; i < n; ++i) {
    const Eigen::VectorXd gbar = sum_gradients(payloads, dim_, 0);
    SymmetricMatrix hbar(dim_);
    auto acc = hbar.packed();
    for (const auto& m : payloads) {
      const double* block = m.payload.data() + dim_;
      for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += block[k];
    }
    const double grad_norm = gbar.norm();
    if (i == 0) {
      if (!threshold_) threshold_ = stop.threshold(grad_norm);
      out.grad_norm = grad_norm;
    }
    if (grad_norm <= *threshold_) {
      if (i == 0) out.converged = true;
      continue;
    }
    const double alpha = polyak_stepsize(grad_norm, constants_.strong_convexity,
                                         constants_.hessian_lipschitz);
    const Eigen::VectorXd direction = spd_solve(hbar, gbar);
    x_[i] -= alpha * direction;
    if (i == 0) {
      out.stepsize = alpha;
      out.updated = true;
    }
  }
  ledger_.mark_iteration();
  return out;
}

IterationOutcome DanEngine::iterate_gradient(const StopRule& stop,
                                             double smoothness) {
  const NodeId n = node_count();
  std::vector<TaggedMessage> payloads(n);
  for (NodeId i = 0; i < n; ++i) {
    payloads[i].origin = i;
    payloads[i].payload = pack_gradient(oracles_[i]->gradient(x_[i]));
  }
  run_dsf(tree_.graph, payloads, {}, &ledger_);

  IterationOutcome out;
  const double step = 2.0 / (constants_.strong_convexity + smoothness);
  for (NodeId i = 0; i < n; ++i) {
    const Eigen::VectorXd gbar = sum_gradients(payloads, dim_, 0);
    const double grad_norm = gbar.norm();
    if (i == 0) {
      if (!threshold_) threshold_ = stop.threshold(grad_norm);
      out.grad_norm = grad_norm;
    }
    if (grad_norm <= *threshold_) {
      if (i == 0) out.converged = true;
      continue;
    }
    x_[i] -= step * gbar;
    if (i == 0) {
      out.stepsize = step;
      out.updated = true;
    }
  }
  ledger_.mark_iteration();
  return out;
}

DanLaEngine::DanLaEngine(
    SpanningTree tree, std::vector<std::shared_ptr<const ObjectiveOracle>> oracles,
    ProblemConstants constants, const Eigen::VectorXd& x0, bool use_smw)
    : tree_(std::move(tree)),
      oracles_(std::move(oracles)),
      constants_(constants),
      use_smw_(use_smw),
      ledger_(tree_.node_count()) {
  constants_.validate();
  if (constants_.balance == 0 &&
      !(constants_.hessian_bound > constants_.strong_convexity))
    throw ConfigError(
        "low-rank engine: balance 0 needs the Hessian bound strictly above "
        "the strong convexity constant");
  dim_ = common_dimension(oracles_, tree_, x0);
  const NodeId n = tree_.node_count();
  x_.assign(n, x0);
  local_est_.assign(n, SymmetricMatrix(dim_));
  global_est_.assign(n, SymmetricMatrix(dim_));
  smw_.resize(n);
  smw_valid_.assign(n, 0);
}

const SymmetricMatrix& DanLaEngine::node_global_estimate(NodeId v) const {
  return global_est_.at(v);
}

const SymmetricMatrix& DanLaEngine::node_local_estimate(NodeId v) const {
  return local_est_.at(v);
}

bool DanLaEngine::states_identical() const {
  for (std::size_t v = 1; v < x_.size(); ++v) {
    if (!bytes_equal(x_[v], x_[0])) return false;
    if (!(global_est_[v] == global_est_[0])) return false;
  }
  return true;
}

Eigen::VectorXd DanLaEngine::solve_direction(NodeId v,
                                             const Eigen::VectorXd& g) {
  if (!use_smw_) return spd_solve(global_est_[v], g);
  if (!smw_valid_[v]) {
    smw_[v] = SmwSolver(global_est_[v]);
    smw_valid_[v] = 1;
  }
  return smw_[v].solve(g);
}

IterationOutcome DanLaEngine::iterate(const StopRule& stop) {
  const NodeId n = node_count();
  std::vector<TaggedMessage> payloads(n);
  for (NodeId i = 0; i < n; ++i) {
    SymmetricMatrix innovation = oracles_[i]->hessian(x_[i]);
    innovation -= local_est_[i];
    const Rank1Truncation trunc = rank1_truncate(innovation);
    local_est_[i].add_rank1(trunc.sign, trunc.direction);
    payloads[i].origin = i;
    payloads[i].payload =
        pack_lowrank(trunc.residual_norm, trunc.sign,
                     oracles_[i]->gradient(x_[i]), trunc.direction);
  }
  run_dsf(tree_.graph, payloads, {}, &ledger_);

  // Factorizing anew is worth it once the update chain outgrows ~2 dims.
  const int rebase_limit = 2 * dim_;

  IterationOutcome out;
  for (NodeId i = 0; i < n; ++i) {
    const Eigen::VectorXd ghat = sum_gradients(payloads, dim_, 2);
    double error_bound = 0;
    for (const auto& m : payloads) error_bound += m.payload[0];
    for (const auto& m : payloads) {
      const double sign = m.payload[1];
      const Eigen::Map<const Eigen::VectorXd> h(m.payload.data() + 2 + dim_,
                                                dim_);
      global_est_[i].add_rank1(sign, h);
      if (use_smw_ && smw_valid_[i]) {
        if (smw_[i].update_count() >= rebase_limit ||
            !smw_[i].update(sign, h))
          smw_valid_[i] = 0;  // refactorize lazily at the next solve
      }
    }
    const double grad_norm = ghat.norm();
    if (i == 0) {
      if (!threshold_) threshold_ = stop.threshold(grad_norm);
      out.grad_norm = grad_norm;
      out.error_bound = error_bound;
    }
    if (grad_norm <= *threshold_) {
      if (i == 0) out.converged = true;
      continue;
    }
    const double alpha = lowrank_stepsize(grad_norm, error_bound, constants_);
    if (alpha == 0.0) continue;  // gated off: estimate sharpens, x holds
    const Eigen::VectorXd direction = solve_direction(i, ghat);
    x_[i] -= alpha * direction;
    if (i == 0) {
      out.stepsize = alpha;
      out.updated = true;
    }
  }
  ledger_.mark_iteration();
  return out;
}

IterationOutcome DanLaEngine::iterate_gradient(const StopRule& stop,
                                               double smoothness) {
  const NodeId n = node_count();
  std::vector<TaggedMessage> payloads(n);
  for (NodeId i = 0; i < n; ++i) {
    payloads[i].origin = i;
    payloads[i].payload = pack_gradient(oracles_[i]->gradient(x_[i]));
  }
  run_dsf(tree_.graph, payloads, {}, &ledger_);

  IterationOutcome out;
  const double step = 2.0 / (constants_.strong_convexity + smoothness);
  for (NodeId i = 0; i < n; ++i) {
    const Eigen::VectorXd gbar = sum_gradients(payloads, dim_, 0);
    const double grad_norm = gbar.norm();
    if (i == 0) {
      if (!threshold_) threshold_ = stop.threshold(grad_norm);
      out.grad_norm = grad_norm;
    }
    if (grad_norm <= *threshold_) {
      if (i == 0) out.converged = true;
      continue;
    }
    x_[i] -= step * gbar;
    if (i == 0) {
      out.stepsize = step;
      out.updated = true;
    }
  }
  ledger_.mark_iteration();
  return out;
}

namespace {

template <class Engine>
EngineResult drive(Engine& engine, const ProblemConstants& constants,
                   const RunOptions& options) {
  const double warm_smooth = options.warm_start_smoothness > 0
                                 ? options.warm_start_smoothness
                                 : constants.hessian_bound;
  EngineResult result;
  if (options.record_iterates)
    result.iterates.push_back(engine.node_state(0));

  for (int k = 0; k < options.stop.max_iterations; ++k) {
    Eigen::VectorXd x_before;
    if (options.x_star) x_before = engine.node_state(0);

    IterationOutcome out;
    try {
      out = k < options.warm_start_iterations
                ? engine.iterate_gradient(options.stop, warm_smooth)
                : engine.iterate(options.stop);
    } catch (const NumericalError& e) {
      throw NumericalError("iteration " + std::to_string(k) + ": " + e.what());
    }
    if (!engine.states_identical())
      throw ProtocolError("node states diverged at iteration " +
                          std::to_string(k));

    IterationRecord row;
    row.k = k;
    row.grad_norm = out.grad_norm;
    row.stepsize = out.stepsize;
    row.updated = out.updated;
    row.scalars_sent_per_node_cum = engine.ledger().avg_scalars_per_node();
    row.bits_sent_per_node_cum = engine.ledger().avg_total_bits_per_node();
    if (options.x_star) row.dist_to_opt = (x_before - *options.x_star).norm();
    result.trace.push_back(row);

    if (options.record_iterates && out.updated)
      result.iterates.push_back(engine.node_state(0));
    if (out.converged) {
      result.converged = true;
      break;
    }
  }

  result.final_x = engine.node_state(0);
  result.iterations = static_cast<int>(result.trace.size());
  for (const auto& row : result.trace)
    if (row.updated) ++result.updating_iterations;
  result.final_grad_norm =
      result.trace.empty() ? 0.0 : result.trace.back().grad_norm;
  result.ledger = engine.ledger();
  return result;
}

}  // namespace

EngineResult run_dan(SpanningTree tree,
                     std::vector<std::shared_ptr<const ObjectiveOracle>> oracles,
                     const ProblemConstants& constants,
                     const Eigen::VectorXd& x0, const RunOptions& options) {
  DanEngine engine(std::move(tree), std::move(oracles), constants, x0);
  return drive(engine, constants, options);
}

EngineResult run_danla(
    SpanningTree tree,
    std::vector<std::shared_ptr<const ObjectiveOracle>> oracles,
    const ProblemConstants& constants, const Eigen::VectorXd& x0,
    const RunOptions& options) {
  DanLaEngine engine(std::move(tree), std::move(oracles), constants, x0,
                     options.use_smw);
  return drive(engine, constants, options);
}

}  // namespace danopt
