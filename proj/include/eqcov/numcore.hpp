#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "eqcov/error.hpp"

namespace eqcov {

using Vector = std::vector<double>;

// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  double& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);

// Symmetric matrix with full storage. Construction symmetrizes its input and
// rejects matrices whose asymmetry exceeds a small relative tolerance, so
// every downstream routine may assume exact symmetry.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t dim);  // zero matrix
  SymMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static SymMatrix from_matrix(const Matrix& m, double rel_tol = 1e-12);
  static SymMatrix identity(std::size_t dim);

  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * dim_ + j];
  }
  // Writes both (i,j) and (j,i).
  void set(std::size_t i, std::size_t j, double v) {
    data_[i * dim_ + j] = v;
    data_[j * dim_ + i] = v;
  }

  std::size_t dim() const { return dim_; }
  Matrix to_matrix() const;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

struct EigenDecomposition {
  Vector values;   // descending
  Matrix vectors;  // columns correspond to values
};

// Full symmetric eigendecomposition (cyclic Jacobi rotations).
EigenDecomposition sym_eigen(const SymMatrix& s);

// Lower-triangular Cholesky factor. Throws NotPositiveDefinite with the
// failing pivot index in detail() when a pivot is not strictly positive.
Matrix cholesky(const SymMatrix& s);

// log(det(S)) for symmetric positive definite S, via the Cholesky factor.
double log_det(const SymMatrix& s);

// Squared Mahalanobis distance (y - center)' S^{-1} (y - center).
double mahalanobis_sq(const Vector& y, const Vector& center,
                      const SymMatrix& s);

// Solve L x = b (forward) or L' x = b (backward) for lower-triangular L.
Vector forward_solve(const Matrix& l, const Vector& b);
Vector backward_solve_t(const Matrix& l, const Vector& b);

// Distribution helpers. Probabilities are clamped nowhere: out-of-domain
// arguments throw InvalidArgument.
double chisq_sf(double x, double df);        // P[X > x]
double chisq_quantile(double prob, double df);
double f_sf(double x, double df1, double df2);
double normal_quantile(double prob);

namespace detail {
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);
double regularized_beta(double a, double b, double x);
}  // namespace detail

}  // namespace eqcov
