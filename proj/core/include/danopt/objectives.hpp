#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "danopt/symmetric_matrix.hpp"

namespace danopt {

// Regularity constants the step rules rely on. mu lower-bounds and
// hessian_bound upper-bounds the Hessian of the global objective;
// hessian_lipschitz bounds its variation (any positive value is valid for
// a quadratic, whose Hessian is constant). balance shifts the low-rank
// error threshold away from zero; it may be 0 only when hessian_bound
// exceeds mu strictly (enforced by the low-rank engine, which is the only
// consumer).
struct ProblemConstants {
  double strong_convexity = 0;    // mu > 0
  double hessian_lipschitz = 0;   // L > 0
  double hessian_bound = 0;       // M >= mu
  double balance = 0;             // c >= 0

  void validate() const;  // throws ConfigError
};

// Local objective of one node: value, gradient and Hessian at a point.
class ObjectiveOracle {
 public:
  virtual ~ObjectiveOracle() = default;
  virtual int dimension() const = 0;
  virtual double value(const Eigen::VectorXd& x) const = 0;
  virtual Eigen::VectorXd gradient(const Eigen::VectorXd& x) const = 0;
  virtual SymmetricMatrix hessian(const Eigen::VectorXd& x) const = 0;
};

// Sum of per-node objectives, accumulated in index order. Used by the
// centralized baselines; the fixed order makes their arithmetic match the
// node-side aggregation bit for bit.
class SumObjective : public ObjectiveOracle {
 public:
  explicit SumObjective(std::vector<std::shared_ptr<const ObjectiveOracle>> terms);

  int dimension() const override;
  double value(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const override;
  SymmetricMatrix hessian(const Eigen::VectorXd& x) const override;

 private:
  std::vector<std::shared_ptr<const ObjectiveOracle>> terms_;
};

// f(x) = (x-b)'A(x-b)/2, a quadratic centered at b. A only needs to be
// symmetric positive semidefinite per node; strong convexity is a property
// of the sum across nodes.
class QuadraticObjective : public ObjectiveOracle {
 public:
  QuadraticObjective(SymmetricMatrix a, Eigen::VectorXd center);

  int dimension() const override { return a_.dimension(); }
  double value(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const override;
  SymmetricMatrix hessian(const Eigen::VectorXd& x) const override;

  const SymmetricMatrix& matrix() const { return a_; }
  const Eigen::VectorXd& center() const { return b_; }

 private:
  SymmetricMatrix a_;
  Eigen::VectorXd b_;
};

// Binary logistic regression dataset: m samples, p features, labels in
// {0,1}, plus the total ridge coefficient of the regularized objective
//   sum_i [softplus(x_i'w) - y_i x_i'w] + rho/2 |w|^2.
struct LogisticProblem {
  Eigen::MatrixXd features;  // m x p
  Eigen::VectorXd labels;    // entries 0 or 1
  double ridge = 0;          // rho, for the whole dataset

  std::size_t sample_count() const { return features.rows(); }
  int feature_count() const { return static_cast<int>(features.cols()); }
};

// Value, gradient and Hessian of the logistic loss over a sample subset in
// one pass, with the ridge term scaled proportionally: rho |subset| / m.
struct LogisticEval {
  double value = 0;
  Eigen::VectorXd gradient;
  SymmetricMatrix hessian;
};
LogisticEval logistic_eval(const LogisticProblem& problem,
                           const std::vector<std::uint32_t>& subset,
                           const Eigen::VectorXd& x);

// Logistic loss over a sample subset with an explicit ridge share.
class LogisticObjective : public ObjectiveOracle {
 public:
  LogisticObjective(std::shared_ptr<const LogisticProblem> problem,
                    std::vector<std::uint32_t> subset, double ridge_share);

  int dimension() const override;
  double value(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const override;
  SymmetricMatrix hessian(const Eigen::VectorXd& x) const override;

 private:
  std::shared_ptr<const LogisticProblem> problem_;
  std::vector<std::uint32_t> subset_;
  double ridge_share_;
};

// Row indices per node. Built by shuffling 0..m-1 and cutting into n
// contiguous blocks whose sizes differ by at most one (the first m mod n
// blocks get the extra row).
struct Partition {
  std::vector<std::vector<std::uint32_t>> blocks;
};
Partition partition_dataset(std::size_t samples, std::uint32_t nodes,
                            std::uint64_t seed);

// How the total ridge is shared among nodes: proportional to block size,
// or equally.
enum class RidgeSplit { proportional, equal };

std::vector<std::shared_ptr<const ObjectiveOracle>> make_logistic_node_oracles(
    std::shared_ptr<const LogisticProblem> problem, const Partition& partition,
    RidgeSplit split = RidgeSplit::proportional);

// Features uniform in [-scale, scale], labels sampled from a logistic
// model with a standard normal ground-truth weight vector. ridge is set to
// 0.01 * samples.
LogisticProblem make_synthetic_logistic(std::size_t samples, int features,
                                        std::uint64_t seed,
                                        double feature_scale = 1.0);

// Loads a numeric CSV. label_column < 0 selects the last column. With
// normalize, every feature column is mapped affinely onto [-1,1] (its
// observed min to -1, max to +1; constant columns map to 0). Labels must
// be exactly 0 or 1. Parsing is strict; any malformed cell raises
// DataError with line and column.
LogisticProblem load_csv_dataset(const std::string& path,
                                 int label_column = -1, bool normalize = true,
                                 bool has_header = false);

// Worst-case constants valid for any ridge-regularized logistic problem:
//   mu = rho,
//   hessian_bound = rho + lambda_max(sum_i x_i x_i') / 4,
//   hessian_lipschitz = sum_i |x_i|^3 / (6 sqrt(3)).
// balance is left 0; pick it per run.
ProblemConstants certified_logistic_constants(const LogisticProblem& problem);

// The conventional configuration for normalized datasets ([-1,1] features,
// ridge 0.01 m): mu = 0.02 m, hessian_lipschitz = m, hessian_bound = 0.04 m.
struct LogisticPreset {
  ProblemConstants constants;
  double ridge = 0;
};
LogisticPreset standard_logistic_preset(std::size_t samples);

// Family of centered quadratic node objectives f_i = (x-b_i)'A_i(x-b_i)/2
// with seeded positive definite A_i. The summed Hessian has its largest
// eigenvalue exactly at hessian_bound and its smallest at or above mu, so
// the declared constants are valid bounds. x_star solves the aggregate
// problem.
struct QuadraticFamily {
  std::vector<std::shared_ptr<const ObjectiveOracle>> node_oracles;
  SymmetricMatrix global_hessian;
  Eigen::VectorXd x_star;
};
QuadraticFamily synth_quadratic(std::uint32_t nodes, int dim, double mu,
                                double hessian_bound, std::uint64_t seed);

}  // namespace danopt
