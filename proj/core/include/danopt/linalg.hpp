#pragma once

#include <Eigen/Dense>
#include <vector>

#include "danopt/symmetric_matrix.hpp"

namespace danopt {

// Solves A x = b for symmetric positive definite A via Cholesky.
// Throws NumericalError when the factorization fails.
Eigen::VectorXd spd_solve(const SymmetricMatrix& a, const Eigen::VectorXd& b);

struct EigenRange {
  double min = 0;
  double max = 0;
};
EigenRange eigenvalue_range(const SymmetricMatrix& a);

// max(|lambda_min|, |lambda_max|), the spectral norm of a symmetric matrix.
double operator_norm(const SymmetricMatrix& a);

// Dominant eigenpair of a symmetric matrix plus the magnitude of the
// runner-up. "Dominant" means largest |lambda|; a tie between +lambda and
// -lambda resolves to the positive one. The eigenvector is unit length,
// normalized so its first nonzero entry is positive, which makes the
// output deterministic. The result is verified: if the eigenpair residual
// |a w - lambda w| exceeds tol * max(1, |a|) or the input is not finite,
// a NumericalError is thrown.
struct TopTwoEigen {
  double lambda1 = 0.0;       // dominant eigenvalue (signed)
  Eigen::VectorXd w1;         // unit eigenvector for lambda1
  double lambda2_abs = 0.0;   // second-largest |eigenvalue|
};
TopTwoEigen top_two_eigen(const SymmetricMatrix& a, double tol = 1e-10);

// Best rank-1 approximation of a symmetric matrix in the spectral norm:
// Delta ~ s h h^T with s = sign of the dominant eigenvalue, h scaled so
// h h^T carries the dominant eigenvalue's weight. residual_norm is the
// second-largest eigenvalue magnitude, which equals |Delta - s h h^T|_2.
// Determinism and verification follow top_two_eigen.
struct Rank1Truncation {
  double sign = 1.0;           // s in {-1, +1}
  Eigen::VectorXd direction;   // h, length sqrt(|lambda_1|)
  double residual_norm = 0.0;  // r = |lambda_2|
  double dominant = 0.0;       // lambda_1 (signed)
};
Rank1Truncation rank1_truncate(const SymmetricMatrix& delta,
                               double tol = 1e-10);

// Incremental solver for K = base + sum_u s_u h_u h_u^T built on the
// rank-1 update identity
//   (A + s h h^T)^{-1} v = A^{-1} v - gamma (h . A^{-1} v) c,
//   c = A^{-1} h, gamma = s / (1 + s h . c).
// The base is factorized once; each update costs one chain application.
// update() reports breakdown (denominator <= tol) without mutating state,
// letting the caller refactorize instead.
class SmwSolver {
 public:
  SmwSolver() = default;
  explicit SmwSolver(const SymmetricMatrix& base, double breakdown_tol = 1e-12);

  int dimension() const;
  int update_count() const { return static_cast<int>(chain_.size()); }

  [[nodiscard]] bool update(double s, const Eigen::VectorXd& h);
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

 private:
  struct Link {
    Eigen::VectorXd h;
    Eigen::VectorXd c;
    double gamma = 0;
  };

  Eigen::LLT<Eigen::MatrixXd> base_;
  std::vector<Link> chain_;
  double tol_ = 1e-12;
};

}  // namespace danopt
