#include "danopt/symmetric_matrix.hpp"

#include <cassert>

#include "danopt/errors.hpp"

namespace danopt {

SymmetricMatrix::SymmetricMatrix(int dim)
    : dim_(dim),
      data_(static_cast<std::size_t>(dim) * (dim + 1) / 2, 0.0) {
  if (dim < 0) throw ConfigError("negative matrix dimension");
}

SymmetricMatrix SymmetricMatrix::identity(int dim, double scale) {
  SymmetricMatrix m(dim);
  for (int i = 0; i < dim; ++i) m.at(i, i) = scale;
  return m;
}

SymmetricMatrix SymmetricMatrix::from_dense(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols())
    throw ConfigError("from_dense needs a square matrix");
  SymmetricMatrix m(static_cast<int>(a.rows()));
  for (int i = 0; i < m.dim_; ++i)
    for (int j = i; j < m.dim_; ++j)
      m.at(i, j) = 0.5 * (a(i, j) + a(j, i));
  return m;
}

std::size_t SymmetricMatrix::index(int i, int j) const {
  if (i > j) std::swap(i, j);
  assert(i >= 0 && j < dim_);
  // Row-major upper triangle: row i starts after i full rows minus the
  // triangle above, i.e. i*dim - i(i-1)/2.
  return static_cast<std::size_t>(i) * dim_ -
         static_cast<std::size_t>(i) * (i - 1) / 2 + (j - i);
}

namespace {
void check_same_dim(int a, int b) {
  if (a != b) throw ConfigError("symmetric matrix dimension mismatch");
}
}  // namespace

SymmetricMatrix& SymmetricMatrix::operator+=(const SymmetricMatrix& other) {
  check_same_dim(dim_, other.dim_);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

SymmetricMatrix& SymmetricMatrix::operator-=(const SymmetricMatrix& other) {
  check_same_dim(dim_, other.dim_);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

SymmetricMatrix& SymmetricMatrix::operator*=(double scale) {
  for (double& v : data_) v *= scale;
  return *this;
}

void SymmetricMatrix::add_scaled_identity(double scale) {
  for (int i = 0; i < dim_; ++i) at(i, i) += scale;
}

void SymmetricMatrix::add_rank1(double s, const Eigen::VectorXd& h) {
  check_same_dim(dim_, static_cast<int>(h.size()));
  std::size_t k = 0;
  for (int i = 0; i < dim_; ++i)
    for (int j = i; j < dim_; ++j) data_[k++] += s * h[i] * h[j];
}

Eigen::VectorXd SymmetricMatrix::multiply(const Eigen::VectorXd& x) const {
  check_same_dim(dim_, static_cast<int>(x.size()));
  Eigen::VectorXd y = Eigen::VectorXd::Zero(dim_);
  std::size_t k = 0;
  for (int i = 0; i < dim_; ++i) {
    for (int j = i; j < dim_; ++j) {
      const double a = data_[k++];
      y[i] += a * x[j];
      if (i != j) y[j] += a * x[i];
    }
  }
  return y;
}

double SymmetricMatrix::quadratic_form(const Eigen::VectorXd& x) const {
  return x.dot(multiply(x));
}

Eigen::MatrixXd SymmetricMatrix::to_dense() const {
  Eigen::MatrixXd a(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = i; j < dim_; ++j) a(i, j) = a(j, i) = (*this)(i, j);
  return a;
}

SymmetricMatrix operator+(SymmetricMatrix a, const SymmetricMatrix& b) {
  a += b;
  return a;
}

SymmetricMatrix operator-(SymmetricMatrix a, const SymmetricMatrix& b) {
  a -= b;
  return a;
}

}  // namespace danopt
