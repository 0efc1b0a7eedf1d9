#include "danopt/linalg.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "danopt/errors.hpp"

namespace danopt {

Eigen::VectorXd spd_solve(const SymmetricMatrix& a, const Eigen::VectorXd& b) {
  Eigen::LLT<Eigen::MatrixXd> llt(a.to_dense());
  if (llt.info() != Eigen::Success)
    throw NumericalError("Cholesky failed: matrix is not positive definite");
  return llt.solve(b);
}

EigenRange eigenvalue_range(const SymmetricMatrix& a) {
  if (a.dimension() == 0) return {0.0, 0.0};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      a.to_dense(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericalError("symmetric eigendecomposition failed");
  const auto& ev = solver.eigenvalues();
  return {ev(0), ev(ev.size() - 1)};
}

double operator_norm(const SymmetricMatrix& a) {
  const EigenRange r = eigenvalue_range(a);
  return std::max(std::abs(r.min), std::abs(r.max));
}

TopTwoEigen top_two_eigen(const SymmetricMatrix& a, double tol) {
  const int p = a.dimension();
  TopTwoEigen out;
  out.w1 = Eigen::VectorXd::Zero(p);
  if (p == 0) return out;

  for (double v : a.packed()) {
    if (!std::isfinite(v))
      throw NumericalError("top_two_eigen: matrix has non-finite entries");
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.to_dense());
  if (solver.info() != Eigen::Success)
    throw NumericalError("symmetric eigendecomposition failed");
  const auto& ev = solver.eigenvalues();  // ascending

  // Dominant index by magnitude; tie between ev(0) < 0 and ev(p-1) > 0
  // of equal magnitude goes to the positive one.
  const int lo = 0, hi = p - 1;
  const int dom = std::abs(ev(lo)) > std::abs(ev(hi)) ? lo : hi;
  out.lambda1 = ev(dom);

  // Second-largest magnitude among the rest. With ascending order the only
  // candidates are the remaining extremes.
  if (p > 1) {
    const int lo2 = dom == lo ? lo + 1 : lo;
    const int hi2 = dom == hi ? hi - 1 : hi;
    out.lambda2_abs = std::max(std::abs(ev(lo2)), std::abs(ev(hi2)));
  }

  Eigen::VectorXd w = solver.eigenvectors().col(dom);
  for (int i = 0; i < p; ++i) {
    if (w[i] != 0.0) {
      if (w[i] < 0.0) w = -w;
      break;
    }
  }
  out.w1 = std::move(w);

  const double scale = std::max(std::abs(ev(lo)), std::abs(ev(hi)));
  const double residual = (a.multiply(out.w1) - out.lambda1 * out.w1).norm();
  if (!(residual <= tol * std::max(1.0, scale)))
    throw NumericalError("top_two_eigen: eigenpair residual " +
                         std::to_string(residual) + " exceeds tolerance");
  return out;
}

Rank1Truncation rank1_truncate(const SymmetricMatrix& delta, double tol) {
  const int p = delta.dimension();
  Rank1Truncation out;
  out.direction = Eigen::VectorXd::Zero(p);
  if (p == 0) return out;

  TopTwoEigen top = top_two_eigen(delta, tol);
  out.dominant = top.lambda1;
  out.sign = top.lambda1 < 0.0 ? -1.0 : 1.0;
  out.residual_norm = top.lambda2_abs;
  out.direction = std::sqrt(std::abs(top.lambda1)) * top.w1;
  return out;
}

SmwSolver::SmwSolver(const SymmetricMatrix& base, double breakdown_tol)
    : base_(base.to_dense()), tol_(breakdown_tol) {
  if (base_.info() != Eigen::Success)
    throw NumericalError("Cholesky failed: base matrix is not positive definite");
}

int SmwSolver::dimension() const {
  return static_cast<int>(base_.matrixL().rows());
}

Eigen::VectorXd SmwSolver::solve(const Eigen::VectorXd& b) const {
  Eigen::VectorXd v = base_.solve(b);
  for (const Link& link : chain_)
    v -= link.gamma * link.h.dot(v) * link.c;
  return v;
}

bool SmwSolver::update(double s, const Eigen::VectorXd& h) {
  const Eigen::VectorXd c = solve(h);
  const double denom = 1.0 + s * h.dot(c);
  if (denom <= tol_) return false;
  chain_.push_back({h, c, s / denom});
  return true;
}

}  // namespace danopt
