#pragma once

#include <cstddef>
#include <vector>

namespace framelab {

using Vector = std::vector<double>;

double dot(const Vector& a, const Vector& b);
double norm_sq(const Vector& v);
double norm(const Vector& v);
bool all_finite(const Vector& v);

// Small dense row-major matrix. Everything in this library is d x d or n x d
// with d well below 100, so no sparsity or blocking.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t d);

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& m);
Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& m);
Vector matvec(const Matrix& m, const Vector& v);
double frobenius_norm(const Matrix& m);
double matrix_trace(const Matrix& m);
bool all_finite(const Matrix& m);

// eigenvalues descending; eigenvectors[i] is the unit eigenvector paired
// with eigenvalues[i].
struct EigenDecomposition {
  Vector eigenvalues;
  std::vector<Vector> eigenvectors;
};

// Cyclic Jacobi for symmetric matrices. Sweeps until the off-diagonal
// Frobenius mass drops below 1e-13 * ||A||_F, at most 100 sweeps.
EigenDecomposition eig_sym(const Matrix& m);

// f applied to the spectrum: V f(Lambda) V^T. Throws NumericError when the
// matrix is numerically singular (lambda_min <= 1e-12 * lambda_max) and
// require_invertible is set.
Matrix symmetric_inverse(const Matrix& m);
Matrix symmetric_inverse_sqrt(const Matrix& m);

}  // namespace framelab
