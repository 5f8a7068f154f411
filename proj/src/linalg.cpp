#include "adt/linalg.hpp"

#include <cmath>
#include <limits>

namespace adt {

double Sym2::min_eigenvalue() const {
  const double mean = 0.5 * (a + d);
  const double disc = std::sqrt(0.25 * (a - d) * (a - d) + b * b);
  return mean - disc;
}

double Sym2::condition() const {
  const double mean = 0.5 * (a + d);
  const double disc = std::sqrt(0.25 * (a - d) * (a - d) + b * b);
  const double lo = mean - disc, hi = mean + disc;
  if (lo <= 0.0) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

bool Sym2::invertible() const {
  const double scale = a * d + b * b;
  return std::abs(det()) > 1e-14 * std::max(scale, 1e-300);
}

void Sym2::solve(double c0, double c1, double& u0, double& u1) const {
  const double dt = det();
  if (!invertible()) throw std::domain_error("Sym2::solve: singular matrix");
  u0 = (d * c0 - b * c1) / dt;
  u1 = (-b * c0 + a * c1) / dt;
}

double Sym2::quad_form_inv(double c0, double c1) const {
  double u0, u1;
  solve(c0, c1, u0, u1);
  return c0 * u0 + c1 * u1;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix operator*(const Matrix& x, const Matrix& y) {
  if (x.cols() != y.rows()) throw std::invalid_argument("Matrix multiply: shape mismatch");
  Matrix r(x.rows(), y.cols());
  for (std::size_t j = 0; j < y.cols(); ++j)
    for (std::size_t k = 0; k < x.cols(); ++k) {
      const double v = y(k, j);
      if (v == 0.0) continue;
      for (std::size_t i = 0; i < x.rows(); ++i) r(i, j) += x(i, k) * v;
    }
  return r;
}

Matrix operator+(const Matrix& x, const Matrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw std::invalid_argument("Matrix add: shape mismatch");
  Matrix r = x;
  for (std::size_t j = 0; j < y.cols(); ++j)
    for (std::size_t i = 0; i < y.rows(); ++i) r(i, j) += y(i, j);
  return r;
}

Matrix operator*(double s, const Matrix& m) {
  Matrix r = m;
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) r(i, j) *= s;
  return r;
}

Matrix Matrix::inverse() const {
  if (rows_ != cols_) throw std::invalid_argument("Matrix::inverse: not square");
  const std::size_t n = rows_;
  Matrix a = *this;
  Matrix inv = identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    if (std::abs(a(piv, col)) < 1e-300) throw std::domain_error("Matrix::inverse: singular");
    if (piv != col)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(col, j), a(piv, j));
        std::swap(inv(col, j), inv(piv, j));
      }
    const double p = a(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      a(col, j) /= p;
      inv(col, j) /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a(r, col);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        a(r, j) -= f * a(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

std::vector<double> Matrix::solve(const std::vector<double>& b) const {
  if (b.size() != rows_) throw std::invalid_argument("Matrix::solve: size mismatch");
  Matrix rhs(rows_, 1);
  for (std::size_t i = 0; i < rows_; ++i) rhs(i, 0) = b[i];
  Matrix x = inverse() * rhs;
  std::vector<double> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = x(i, 0);
  return out;
}

Matrix Matrix::kronecker(const Matrix& A, const Matrix& B) {
  Matrix r(A.rows() * B.rows(), A.cols() * B.cols());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j)
      for (std::size_t k = 0; k < B.rows(); ++k)
        for (std::size_t l = 0; l < B.cols(); ++l)
          r(i * B.rows() + k, j * B.cols() + l) = A(i, j) * B(k, l);
  return r;
}

Matrix Matrix::from_sym2(const Sym2& s) {
  Matrix m(2, 2);
  m(0, 0) = s.a;
  m(0, 1) = s.b;
  m(1, 0) = s.b;
  m(1, 1) = s.d;
  return m;
}

}  // namespace adt
