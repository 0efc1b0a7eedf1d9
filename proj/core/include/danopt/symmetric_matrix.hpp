#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <vector>

namespace danopt {

// Dense symmetric matrix stored as the packed row-major upper triangle.
// Packed storage halves payload size on the wire and makes bit-level state
// comparison a flat memcmp. All mutating arithmetic walks the packed array
// in index order, so two instances fed the same operands in the same order
// end up bit-identical.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(int dim);

  static SymmetricMatrix identity(int dim, double scale = 1.0);
  // Averages A and A^T; intended for matrices symmetric up to roundoff.
  static SymmetricMatrix from_dense(const Eigen::MatrixXd& a);

  int dimension() const { return dim_; }
  std::size_t packed_size() const { return data_.size(); }

  double operator()(int i, int j) const { return data_[index(i, j)]; }
  double& at(int i, int j) { return data_[index(i, j)]; }

  SymmetricMatrix& operator+=(const SymmetricMatrix& other);
  SymmetricMatrix& operator-=(const SymmetricMatrix& other);
  SymmetricMatrix& operator*=(double scale);
  void add_scaled_identity(double scale);
  // A += s * h h^T
  void add_rank1(double s, const Eigen::VectorXd& h);

  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
  double quadratic_form(const Eigen::VectorXd& x) const;

  Eigen::MatrixXd to_dense() const;

  std::span<const double> packed() const { return data_; }
  std::span<double> packed() { return data_; }

  friend bool operator==(const SymmetricMatrix& a, const SymmetricMatrix& b) {
    return a.dim_ == b.dim_ && a.data_ == b.data_;
  }

 private:
  std::size_t index(int i, int j) const;

  int dim_ = 0;
  std::vector<double> data_;
};

SymmetricMatrix operator+(SymmetricMatrix a, const SymmetricMatrix& b);
SymmetricMatrix operator-(SymmetricMatrix a, const SymmetricMatrix& b);

}  // namespace danopt
