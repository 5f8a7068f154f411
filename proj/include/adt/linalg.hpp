#pragma once

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace adt {

// Symmetric 2x2 matrix [[a, b], [b, d]].
struct Sym2 {
  double a = 0.0;
  double b = 0.0;
  double d = 0.0;

  Sym2& operator+=(const Sym2& o) {
    a += o.a;
    b += o.b;
    d += o.d;
    return *this;
  }
  friend Sym2 operator+(Sym2 x, const Sym2& y) { return x += y; }
  friend Sym2 operator*(double s, const Sym2& m) { return {s * m.a, s * m.b, s * m.d}; }

  // s * (u0, u1)(u0, u1)^T
  static Sym2 outer(double u0, double u1, double s = 1.0) {
    return {s * u0 * u0, s * u0 * u1, s * u1 * u1};
  }

  double det() const { return a * d - b * b; }
  double trace() const { return a + d; }
  double min_eigenvalue() const;
  double condition() const;

  // (c0, c1) M^-1 (c0, c1)^T; throws std::domain_error if singular.
  double quad_form_inv(double c0, double c1) const;
  // M^-1 (c0, c1)^T
  void solve(double c0, double c1, double& u0, double& u1) const;
  bool invertible() const;
};

// Small dense column-major matrix for the mixed-model blocks and the test
// oracles; not meant for large dimensions.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }

  Matrix transpose() const;
  friend Matrix operator*(const Matrix& x, const Matrix& y);
  friend Matrix operator+(const Matrix& x, const Matrix& y);
  friend Matrix operator*(double s, const Matrix& m);

  // Gauss-Jordan inverse with partial pivoting; throws std::domain_error on
  // (near-)singular input.
  Matrix inverse() const;
  // Solve M x = b for a single right-hand side.
  std::vector<double> solve(const std::vector<double>& b) const;

  // Kronecker product, row-major convention: (A kron B)(i*p+k, j*q+l) = A(i,j)B(k,l).
  static Matrix kronecker(const Matrix& A, const Matrix& B);

  static Matrix from_sym2(const Sym2& s);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

}  // namespace adt
