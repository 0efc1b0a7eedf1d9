#include "danopt/newton.hpp"

#include <cmath>
#include <limits>

#include "danopt/errors.hpp"
#include "danopt/linalg.hpp"

namespace danopt {

double StopRule::threshold(double grad0_norm) const {
  return tol_rel * std::max(1.0, grad0_norm);
}

double polyak_stepsize(double grad_norm, double mu, double lipschitz) {
  if (grad_norm == 0.0) return 1.0;
  return std::min(1.0, mu * mu / (lipschitz * grad_norm));
}

double lowrank_error_threshold(double mu, double hessian_bound,
                               double balance) {
  const double mc = hessian_bound + balance;
  return (std::sqrt(mc * mc + 3.0 * mu * mu) - mc) / 3.0;
}

double lowrank_phi(const ProblemConstants& constants) {
  const double mu = constants.strong_convexity;
  const double lipschitz = constants.hessian_lipschitz;
  const double bound = constants.hessian_bound;
  if (!(lipschitz > 0))
    throw ConfigError("low-rank stepsize needs a positive Lipschitz constant");
  const double r = lowrank_error_threshold(mu, bound, constants.balance);
  const double phi = 2.0 * mu * (mu - r) * (mu - r) / (lipschitz * (bound + mu)) -
                     2.0 * r * (mu - r) / lipschitz;
  if (!(phi > 0))
    throw NumericalError("nonpositive low-rank stepsize numerator");
  return phi;
}

double lowrank_stepsize(double grad_norm, double error_bound,
                        const ProblemConstants& constants) {
  const double r = lowrank_error_threshold(
      constants.strong_convexity, constants.hessian_bound, constants.balance);
  if (error_bound > r) return 0.0;
  if (grad_norm == 0.0) return 1.0;
  return std::min(1.0, lowrank_phi(constants) / grad_norm);
}

ConvergenceBounds convergence_bounds(double grad0_norm, double mu,
                                     double lipschitz) {
  if (!(mu > 0)) throw ConfigError("bounds need positive strong convexity");
  if (!(lipschitz > 0))
    throw ConfigError("bounds need a positive Lipschitz constant");
  if (!(grad0_norm >= 0)) throw ConfigError("bounds need |g0| >= 0");

  ConvergenceBounds b;
  b.grad0_norm = grad0_norm;
  b.mu = mu;
  b.lipschitz = lipschitz;
  const double scaled = 2.0 * lipschitz / (mu * mu) * grad0_norm;
  b.damped_iterations =
      std::max(0, static_cast<int>(std::ceil(scaled)) - 2);
  b.gamma = lipschitz / (2.0 * mu * mu) * grad0_norm -
            0.25 * b.damped_iterations;
  if (b.gamma >= 0.5) {
    // Happens only when the ceiling lands exactly on an integer.
    b.gamma = std::nextafter(0.5, 0.0);
    b.gamma_clamped = true;
  }
  return b;
}

namespace {
// gamma^(2^j); exponent overflow saturates to +inf, and pow(q<1, inf) is
// the mathematically right 0.
double doubly_exp(double gamma, int j) {
  return std::pow(gamma, std::exp2(static_cast<double>(j)));
}
}  // namespace

double ConvergenceBounds::gradient_bound(int k) const {
  if (k <= damped_iterations)
    return grad0_norm - mu * mu / (2.0 * lipschitz) * k;
  return 2.0 * mu * mu / lipschitz * doubly_exp(gamma, k - damped_iterations);
}

double ConvergenceBounds::distance_bound(int k) const {
  if (k <= damped_iterations)
    return mu / lipschitz *
           (damped_iterations - k + 2.0 * gamma / (1.0 - gamma));
  const double q = doubly_exp(gamma, k - damped_iterations);
  return 2.0 * mu * q / (lipschitz * (1.0 - q));
}

double ConvergenceBounds::iteration_estimate(double eps) const {
  if (!(eps > 0)) throw ConfigError("iteration estimate needs eps > 0");
  const double target = 4.0 * mu / (lipschitz * eps);
  if (target <= 1.0 || gamma == 0.0) return damped_iterations;
  const double value =
      damped_iterations + std::log2(std::log(target) / std::log(1.0 / gamma));
  return std::isfinite(value) ? value : damped_iterations;
}

namespace {

struct LoopState {
  EngineResult result;
  double threshold = 0;
  int k = 0;
};

void record(LoopState& state, double grad_norm, double stepsize, bool updated,
            const Eigen::VectorXd& x, const RunOptions& options) {
  IterationRecord row;
  row.k = state.k;
  row.grad_norm = grad_norm;
  row.stepsize = stepsize;
  row.updated = updated;
  if (options.x_star) row.dist_to_opt = (x - *options.x_star).norm();
  state.result.trace.push_back(row);
}

void finish(LoopState& state, Eigen::VectorXd x) {
  state.result.final_x = std::move(x);
  state.result.iterations = static_cast<int>(state.result.trace.size());
  for (const auto& row : state.result.trace)
    if (row.updated) ++state.result.updating_iterations;
  state.result.final_grad_norm =
      state.result.trace.empty() ? 0.0 : state.result.trace.back().grad_norm;
}

}  // namespace

EngineResult run_polyak_newton(const ObjectiveOracle& objective,
                               const Eigen::VectorXd& x0,
                               const ProblemConstants& constants,
                               const RunOptions& options) {
  constants.validate();
  const double mu = constants.strong_convexity;
  const double warm_smooth = options.warm_start_smoothness > 0
                                 ? options.warm_start_smoothness
                                 : constants.hessian_bound;

  LoopState state;
  Eigen::VectorXd x = x0;
  if (options.record_iterates) state.result.iterates.push_back(x);

  for (; state.k < options.stop.max_iterations; ++state.k) {
    const Eigen::VectorXd g = objective.gradient(x);
    const double grad_norm = g.norm();
    if (state.k == 0) state.threshold = options.stop.threshold(grad_norm);
    if (grad_norm <= state.threshold) {
      record(state, grad_norm, 0.0, false, x, options);
      state.result.converged = true;
      break;
    }
    if (state.k < options.warm_start_iterations) {
      const double step = 2.0 / (mu + warm_smooth);
      record(state, grad_norm, step, true, x, options);
      x -= step * g;
    } else {
      const double alpha =
          polyak_stepsize(grad_norm, mu, constants.hessian_lipschitz);
      const Eigen::VectorXd direction = spd_solve(objective.hessian(x), g);
      record(state, grad_norm, alpha, true, x, options);
      x -= alpha * direction;
    }
    if (options.record_iterates) state.result.iterates.push_back(x);
  }
  finish(state, std::move(x));
  return state.result;
}

EngineResult run_gradient_descent(const ObjectiveOracle& objective,
                                  const Eigen::VectorXd& x0, double mu,
                                  double smoothness, const RunOptions& options) {
  if (!(mu > 0) || !(smoothness > 0))
    throw ConfigError("gradient descent needs positive mu and smoothness");
  const double step = 2.0 / (mu + smoothness);

  LoopState state;
  Eigen::VectorXd x = x0;
  if (options.record_iterates) state.result.iterates.push_back(x);

  for (; state.k < options.stop.max_iterations; ++state.k) {
    const Eigen::VectorXd g = objective.gradient(x);
    const double grad_norm = g.norm();
    if (state.k == 0) state.threshold = options.stop.threshold(grad_norm);
    if (grad_norm <= state.threshold) {
      record(state, grad_norm, 0.0, false, x, options);
      state.result.converged = true;
      break;
    }
    record(state, grad_norm, step, true, x, options);
    x -= step * g;
    if (options.record_iterates) state.result.iterates.push_back(x);
  }
  finish(state, std::move(x));
  return state.result;
}

}  // namespace danopt
