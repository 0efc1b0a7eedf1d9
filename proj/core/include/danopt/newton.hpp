#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "danopt/comm_ledger.hpp"
#include "danopt/objectives.hpp"
#include "danopt/trace.hpp"

namespace danopt {

// Relative stop rule: finish once |g| <= tol_rel * max(1, |g_0|).
struct StopRule {
  double tol_rel = 1e-10;
  int max_iterations = 500;

  double threshold(double grad0_norm) const;
};

// min{1, mu^2 / (L |g|)}; a zero gradient (converged) takes the pure step.
double polyak_stepsize(double grad_norm, double mu, double lipschitz);

// Error threshold gating low-rank Newton updates:
//   (sqrt((M+c)^2 + 3 mu^2) - (M+c)) / 3.
double lowrank_error_threshold(double mu, double hessian_bound, double balance);

// Stepsize numerator for gated updates:
//   2 mu (mu-r)^2 / (L (M+mu)) - 2 r (mu-r) / L,  r the threshold above.
// Positive whenever the constants validate (which requires L > 0).
double lowrank_phi(const ProblemConstants& constants);

// 0 when the accumulated error bound exceeds the threshold, otherwise
// min{1, phi / |g|} with the same degenerate cases as polyak_stepsize.
double lowrank_stepsize(double grad_norm, double error_bound,
                        const ProblemConstants& constants);

// Closed-form guarantees for the adaptive Newton iteration. gamma
// mathematically lies in [0, 1/2); draws on the boundary are clamped to
// the largest double below 1/2 and flagged.
struct ConvergenceBounds {
  int damped_iterations = 0;  // k0
  double gamma = 0;
  bool gamma_clamped = false;
  double grad0_norm = 0;
  double mu = 0;
  double lipschitz = 0;

  double gradient_bound(int k) const;
  double distance_bound(int k) const;
  // Iterations until |x_k - x*| <= eps:  k0 + log2 log_{1/gamma}(4mu/(L eps)).
  double iteration_estimate(double eps) const;
};
ConvergenceBounds convergence_bounds(double grad0_norm, double mu,
                                     double lipschitz);

// Per-run knobs shared by every engine.
struct RunOptions {
  StopRule stop;
  // Gradient-descent iterations before the Newton phase.
  int warm_start_iterations = 0;
  // Smoothness constant for the warm start; 0 falls back to the Hessian
  // bound M, which upper-bounds the gradient Lipschitz constant.
  double warm_start_smoothness = 0;
  // Low-rank engine only: solve through incremental rank-1 updates
  // instead of refactorizing the estimate.
  bool use_smw = false;
  // Keep a copy of every iterate (x_0 included).
  bool record_iterates = false;
  // Known optimum; fills the dist_to_opt trace column.
  std::optional<Eigen::VectorXd> x_star;
};

struct EngineResult {
  std::vector<IterationRecord> trace;
  Eigen::VectorXd final_x;
  double final_grad_norm = 0;
  bool converged = false;
  int iterations = 0;           // trace rows observed
  int updating_iterations = 0;  // rows where x actually moved
  std::vector<Eigen::VectorXd> iterates;
  CommLedger ledger;  // empty for centralized runs
};

// Centralized adaptive Newton (the single-machine reference for the
// distributed engine; identical arithmetic by construction).
EngineResult run_polyak_newton(const ObjectiveOracle& objective,
                               const Eigen::VectorXd& x0,
                               const ProblemConstants& constants,
                               const RunOptions& options);

// Centralized gradient descent with stepsize 2/(mu + smoothness).
EngineResult run_gradient_descent(const ObjectiveOracle& objective,
                                  const Eigen::VectorXd& x0, double mu,
                                  double smoothness, const RunOptions& options);

}  // namespace danopt
