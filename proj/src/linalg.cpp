#include "framelab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "framelab/errors.hpp"

namespace framelab {

double dot(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm_sq(const Vector& v) { return dot(v, v); }

double norm(const Vector& v) { return std::sqrt(norm_sq(v)); }

bool all_finite(const Vector& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

Matrix Matrix::identity(std::size_t d) {
  Matrix m(d, d);
  for (std::size_t i = 0; i < d; ++i) m(i, i) = 1.0;
  return m;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < out.data().size(); ++i)
    out.data()[i] = a.data()[i] + b.data()[i];
  return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < out.data().size(); ++i)
    out.data()[i] = a.data()[i] - b.data()[i];
  return out;
}

Matrix operator*(double s, const Matrix& m) {
  Matrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] = s * m.data()[i];
  return out;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

Matrix transpose(const Matrix& m) {
  Matrix out(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = m(i, j);
  return out;
}

Vector matvec(const Matrix& m, const Vector& v) {
  Vector out(m.rows(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

double frobenius_norm(const Matrix& m) {
  double s = 0.0;
  for (double x : m.data()) s += x * x;
  return std::sqrt(s);
}

double matrix_trace(const Matrix& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i) s += m(i, i);
  return s;
}

bool all_finite(const Matrix& m) {
  for (double x : m.data())
    if (!std::isfinite(x)) return false;
  return true;
}

namespace {

double off_diagonal_frobenius(const Matrix& a) {
  double s = 0.0;
  for (std::size_t p = 0; p < a.rows(); ++p)
    for (std::size_t q = 0; q < a.cols(); ++q)
      if (p != q) s += a(p, q) * a(p, q);
  return std::sqrt(s);
}

}  // namespace

EigenDecomposition eig_sym(const Matrix& m) {
  if (m.rows() != m.cols()) throw ValidationError("eig_sym: matrix is not square");
  if (!all_finite(m)) throw ValidationError("eig_sym: non-finite entries");
  const std::size_t d = m.rows();

  Matrix a = m;
  // Symmetrize stored asymmetry before iterating.
  for (std::size_t p = 0; p < d; ++p)
    for (std::size_t q = p + 1; q < d; ++q) {
      const double v = 0.5 * (a(p, q) + a(q, p));
      a(p, q) = v;
      a(q, p) = v;
    }

  Matrix v = Matrix::identity(d);
  const double stop = 1e-13 * std::max(frobenius_norm(a), 1e-300);

  const int max_sweeps = 100;
  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    if (off_diagonal_frobenius(a) <= stop) break;
    for (std::size_t p = 0; p + 1 < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= stop / (d * d + 1.0)) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        const double app = a(p, p);
        const double aqq = a(q, q);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
          if (k == p || k == q) continue;
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = akp - s * (akq + tau * akp);
          a(p, k) = a(k, p);
          a(k, q) = akq + s * (akp - tau * akq);
          a(q, k) = a(k, q);
        }
        for (std::size_t k = 0; k < d; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = vkp - s * (vkq + tau * vkp);
          v(k, q) = vkq + s * (vkp - tau * vkq);
        }
      }
    }
  }
  if (sweep == max_sweeps && off_diagonal_frobenius(a) > stop)
    throw NumericError("eig_sym: Jacobi did not converge in 100 sweeps");

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&a](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

  EigenDecomposition out;
  out.eigenvalues.resize(d);
  out.eigenvectors.assign(d, Vector(d, 0.0));
  for (std::size_t i = 0; i < d; ++i) {
    out.eigenvalues[i] = a(order[i], order[i]);
    for (std::size_t k = 0; k < d; ++k) out.eigenvectors[i][k] = v(k, order[i]);
  }
  return out;
}

namespace {

Matrix spectral_map(const Matrix& m, double (*f)(double)) {
  const EigenDecomposition eig = eig_sym(m);
  const std::size_t d = m.rows();
  const double lambda_max = eig.eigenvalues.front();
  const double lambda_min = eig.eigenvalues.back();
  if (lambda_min <= 1e-12 * lambda_max || lambda_max <= 0.0)
    throw NumericError("symmetric operator is numerically singular");
  Matrix out(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    const double fi = f(eig.eigenvalues[i]);
    const Vector& u = eig.eigenvectors[i];
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) out(r, c) += fi * u[r] * u[c];
  }
  // Force exact symmetry of the assembled result.
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = r + 1; c < d; ++c) {
      const double val = 0.5 * (out(r, c) + out(c, r));
      out(r, c) = val;
      out(c, r) = val;
    }
  return out;
}

}  // namespace

Matrix symmetric_inverse(const Matrix& m) {
  return spectral_map(m, +[](double x) { return 1.0 / x; });
}

Matrix symmetric_inverse_sqrt(const Matrix& m) {
  return spectral_map(m, +[](double x) { return 1.0 / std::sqrt(x); });
}

}  // namespace framelab
