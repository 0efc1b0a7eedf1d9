#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <memory>

#include "danopt/errors.hpp"
#include "danopt/newton.hpp"
#include "danopt/objectives.hpp"
#include "danopt/symmetric_matrix.hpp"

using namespace danopt;

namespace {

// one-dimensional quadratic with unit curvature centered at `center`
std::shared_ptr<QuadraticObjective> line_objective(double center) {
  Eigen::VectorXd b(1);
  b << center;
  return std::make_shared<QuadraticObjective>(SymmetricMatrix::identity(1), b);
}

}  // namespace

TEST_CASE("stop rule threshold is relative above unit gradients") {
  StopRule rule;
  CHECK(rule.tol_rel == 1e-10);
  CHECK(rule.threshold(5.0) == 1e-10 * 5.0);
  CHECK(rule.threshold(0.5) == 1e-10);  // floor at |g0| = 1
  CHECK(rule.threshold(0.0) == 1e-10);
  StopRule loose{1e-3, 10};
  CHECK(loose.threshold(2.0) == 1e-3 * 2.0);
}

TEST_CASE("damped stepsize on frozen values") {
  CHECK(polyak_stepsize(10.0, 1.0, 2.0) == 0.05);
  CHECK(polyak_stepsize(0.0, 1.0, 2.0) == 1.0);   // converged: pure step
  CHECK(polyak_stepsize(0.1, 10.0, 1.0) == 1.0);  // capped at 1
  CHECK(polyak_stepsize(2.0, 1.0, 1.0) == 0.5);
}

TEST_CASE("low-rank error threshold on frozen values") {
  CHECK(lowrank_error_threshold(1.0, 2.0, 1.0) == 0.15470053837925146);
  CHECK(lowrank_error_threshold(1.0, 1.0, 0.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  // decreasing in the balance term
  CHECK(lowrank_error_threshold(1.0, 2.0, 2.0) < lowrank_error_threshold(1.0, 2.0, 1.0));
}

TEST_CASE("low-rank stepsize numerator and gate") {
  ProblemConstants c{1.0, 1.0, 2.0, 1.0};
  CHECK(lowrank_phi(c) == doctest::Approx(0.21481755626870913).epsilon(1e-14));
  CHECK(lowrank_stepsize(10.0, 0.1, c) ==
        doctest::Approx(0.021481755626870914).epsilon(1e-14));
  // accumulated error above the threshold gates the step off entirely
  const double r = lowrank_error_threshold(1.0, 2.0, 1.0);
  CHECK(lowrank_stepsize(10.0, r + 1e-9, c) == 0.0);
  CHECK(lowrank_stepsize(10.0, r, c) > 0.0);  // boundary still steps
  CHECK(lowrank_stepsize(0.0, 0.0, c) == 1.0);
  CHECK(lowrank_stepsize(1e-6, 0.0, c) == 1.0);  // phi/|g| caps at 1

  ProblemConstants bad{1.0, 0.0, 2.0, 1.0};
  CHECK_THROWS_AS(lowrank_phi(bad), ConfigError);
}

TEST_CASE("convergence bounds on the boundary-clamped case") {
  auto b = convergence_bounds(3.0, 1.0, 1.0);
  CHECK(b.damped_iterations == 4);
  CHECK(b.gamma_clamped);
  CHECK(b.gamma == std::nextafter(0.5, 0.0));
  CHECK(b.gamma == doctest::Approx(0.49999999999999994).epsilon(1e-16));
  CHECK(b.iteration_estimate(1e-4) ==
        doctest::Approx(7.9343006359487394).epsilon(1e-12));
  CHECK(b.iteration_estimate(1e-8) ==
        doctest::Approx(8.8367030384116667).epsilon(1e-12));
  CHECK(b.iteration_estimate(1e-12) ==
        doctest::Approx(9.3876085231743467).epsilon(1e-12));
}

TEST_CASE("convergence bounds on a regular case") {
  auto b = convergence_bounds(2.6, 1.0, 1.0);
  CHECK(b.damped_iterations == 4);
  CHECK_FALSE(b.gamma_clamped);
  CHECK(b.gamma == 0.30000000000000004);

  // linear branch: g0 - k mu^2 / (2L)
  CHECK(b.gradient_bound(0) == 2.6);
  CHECK(b.gradient_bound(3) == 1.1);
  // doubly exponential branch: 2 mu^2/L gamma^(2^(k - k0))
  CHECK(b.gradient_bound(5) == doctest::Approx(0.18000000000000005).epsilon(1e-12));
  CHECK(b.gradient_bound(7) == doctest::Approx(0.00013122000000000014).epsilon(1e-12));
  CHECK(b.distance_bound(2) == doctest::Approx(2.857142857142857).epsilon(1e-12));
  CHECK(b.distance_bound(6) == doctest::Approx(0.016332291561649368).epsilon(1e-12));
  CHECK(b.iteration_estimate(1e-8) ==
        doctest::Approx(8.040133860999743).epsilon(1e-12));
  // bounds collapse toward zero past the damped phase
  CHECK(b.gradient_bound(40) == 0.0);
  CHECK(b.distance_bound(40) == 0.0);
}

TEST_CASE("convergence bounds guards") {
  CHECK_THROWS_AS(convergence_bounds(1.0, 0.0, 1.0), ConfigError);
  CHECK_THROWS_AS(convergence_bounds(1.0, 1.0, 0.0), ConfigError);
  CHECK_THROWS_AS(convergence_bounds(-1.0, 1.0, 1.0), ConfigError);

  auto zero = convergence_bounds(0.0, 1.0, 1.0);
  CHECK(zero.damped_iterations == 0);
  CHECK(zero.gamma == 0.0);
  CHECK(zero.gradient_bound(0) == 0.0);
  CHECK(zero.iteration_estimate(1e-8) == 0.0);  // gamma 0: already there

  auto b = convergence_bounds(2.6, 1.0, 1.0);
  CHECK_THROWS_AS(b.iteration_estimate(0.0), ConfigError);
  CHECK(b.iteration_estimate(100.0) == 4.0);  // target below 1: damped phase only
}

TEST_CASE("adaptive newton takes the pure step once the gradient is small") {
  auto obj = line_objective(3.0);
  Eigen::VectorXd x0(1);
  x0 << 3.5;  // |g0| = 0.5 <= mu^2/L: alpha = 1 immediately
  RunOptions opts;
  opts.record_iterates = true;
  auto res = run_polyak_newton(*obj, x0, {1.0, 1.0, 1.0, 0.0}, opts);
  REQUIRE(res.trace.size() == 2);
  CHECK(res.trace[0].grad_norm == 0.5);
  CHECK(res.trace[0].stepsize == 1.0);
  CHECK(res.trace[0].updated);
  // terminal row: converged marker, no step
  CHECK(res.trace[1].grad_norm == 0.0);
  CHECK(res.trace[1].stepsize == 0.0);
  CHECK_FALSE(res.trace[1].updated);
  CHECK(res.converged);
  CHECK(res.iterations == 2);
  CHECK(res.updating_iterations == 1);
  CHECK(res.final_x[0] == 3.0);
  CHECK(res.final_grad_norm == 0.0);
  REQUIRE(res.iterates.size() == 2);  // x0 plus one update
  CHECK(res.iterates[0][0] == 3.5);
  CHECK(res.iterates[1][0] == 3.0);
}

TEST_CASE("adaptive newton on a seeded aggregate quadratic") {
  auto fam = synth_quadratic(3, 5, 1.0, 6.0, 13);
  SumObjective sum(fam.node_oracles);
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(5);
  RunOptions opts;
  opts.x_star = fam.x_star;
  auto res = run_polyak_newton(sum, x0, {1.0, 1.0, 6.0, 0.0}, opts);
  CHECK(res.converged);
  CHECK((res.final_x - fam.x_star).norm() <= 1e-8);

  for (std::size_t i = 0; i + 1 < res.trace.size(); ++i) {
    CHECK(res.trace[i].grad_norm > res.trace[i + 1].grad_norm);
    CHECK(res.trace[i].stepsize <= 1.0);
    CHECK(res.trace[i].stepsize > 0.0);
    CHECK(res.trace[i].updated);
  }
  // distance column populated and shrinking alongside the gradient
  REQUIRE(res.trace.front().dist_to_opt.has_value());
  CHECK(*res.trace.front().dist_to_opt > *res.trace.back().dist_to_opt);
  // the trace records the pre-update point: row 0 sits at x0
  CHECK(*res.trace.front().dist_to_opt ==
        doctest::Approx(fam.x_star.norm()).epsilon(1e-12));
}

TEST_CASE("iteration cap reports an unconverged run honestly") {
  auto fam = synth_quadratic(2, 4, 1.0, 8.0, 3);
  SumObjective sum(fam.node_oracles);
  Eigen::VectorXd x0 = Eigen::VectorXd::Constant(4, 50.0);
  RunOptions opts;
  opts.stop.max_iterations = 3;
  auto res = run_polyak_newton(sum, x0, {1.0, 1.0, 8.0, 0.0}, opts);
  CHECK_FALSE(res.converged);
  CHECK(res.iterations == 3);
  CHECK(res.updating_iterations == 3);
  CHECK(res.final_grad_norm == res.trace.back().grad_norm);
  CHECK(res.final_grad_norm > 0.0);
}

TEST_CASE("warm start runs plain descent before the newton phase") {
  auto fam = synth_quadratic(2, 3, 1.0, 4.0, 21);
  SumObjective sum(fam.node_oracles);
  Eigen::VectorXd x0 = Eigen::VectorXd::Constant(3, 2.0);
  RunOptions opts;
  opts.warm_start_iterations = 3;
  auto res = run_polyak_newton(sum, x0, {1.0, 1.0, 4.0, 0.0}, opts);
  REQUIRE(res.trace.size() > 4);
  for (int k = 0; k < 3; ++k)
    CHECK(res.trace[k].stepsize == 2.0 / (1.0 + 4.0));  // 2 / (mu + M)
  CHECK(res.trace[3].stepsize != 2.0 / 5.0);

  // overriding the smoothness changes the warm step
  RunOptions opts2 = opts;
  opts2.warm_start_smoothness = 9.0;
  auto res2 = run_polyak_newton(sum, x0, {1.0, 1.0, 4.0, 0.0}, opts2);
  CHECK(res2.trace[0].stepsize == 2.0 / 10.0);
  CHECK(res2.converged);
}

TEST_CASE("gradient descent solves the unit-curvature line in one step") {
  auto obj = line_objective(3.0);
  Eigen::VectorXd x0(1);
  x0 << 10.0;
  RunOptions opts;
  opts.record_iterates = true;
  auto res = run_gradient_descent(*obj, x0, 1.0, 1.0, opts);  // step 2/(1+1) = 1
  REQUIRE(res.trace.size() == 2);
  CHECK(res.trace[0].grad_norm == 7.0);
  CHECK(res.trace[0].stepsize == 1.0);
  CHECK(res.trace[1].grad_norm == 0.0);
  CHECK(res.converged);
  CHECK(res.final_x[0] == 3.0);
  REQUIRE(res.iterates.size() == 2);

  CHECK_THROWS_AS(run_gradient_descent(*obj, x0, 0.0, 1.0, {}), ConfigError);
  CHECK_THROWS_AS(run_gradient_descent(*obj, x0, 1.0, 0.0, {}), ConfigError);
}
