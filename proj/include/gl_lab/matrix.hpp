#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "gl_lab/errors.hpp"

namespace gl_lab {

/// Row-major dense matrix of doubles; the single carrier for designs,
/// observations, coefficients, noise and covariances.
class Matrix {
 public:
  Matrix() = default;
  /// Zero-filled rows x cols matrix.
  Matrix(std::size_t rows, std::size_t cols);
  /// Takes ownership of row-major entries; validates size and finiteness.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
  /// Brace construction for small literals: Matrix{{4, 2}, {2, 5}}.
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t k);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  double* row_ptr(std::size_t i) { return data_.data() + i * cols_; }
  const double* row_ptr(std::size_t i) const {
    return data_.data() + i * cols_;
  }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  double row_norm2(std::size_t i) const;

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double c, const Matrix& a);

Matrix matmul(const Matrix& a, const Matrix& b);
/// A^T * B without forming the transpose.
Matrix matmul_transa(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
double frobenius_norm(const Matrix& a);
double max_abs(const Matrix& a);

/// Cholesky factorization of a symmetric positive-definite matrix,
/// reusable for repeated solves against the same matrix.
class Cholesky {
 public:
  /// Requires symmetry within 1e-12 relative tolerance; declares the matrix
  /// non-PD when a pivot falls at or below 1e-14 * max diagonal entry.
  explicit Cholesky(const Matrix& a);

  const Matrix& lower() const { return l_; }
  /// Solves A * X = B via forward/backward substitution.
  Matrix solve(const Matrix& b) const;
  Matrix inverse() const;

 private:
  Matrix l_;
};

/// Lower-triangular L with A = L L^T.
Matrix cholesky(const Matrix& a);
/// X with A X = B for SPD A.
Matrix solve_spd(const Matrix& a, const Matrix& b);

/// Largest singular value by power iteration on A^T A, run from the
/// normalized all-ones vector plus one seeded random restart.
double spectral_norm(const Matrix& a, double rel_tol = 1e-10,
                     std::size_t max_iter = 10000);

/// Norm orders accepted by block_norm.
enum class Ord { one, two, inf };

/// l_a/l_b block norm over rows: outer l_a norm of the row-wise l_b norms.
/// Outer order must be one or inf.
double block_norm(const Matrix& a, Ord outer, Ord inner);

/// Max over rows of the sum of absolute entries (the l_inf operator norm).
double linf_operator_norm(const Matrix& a);

}  // namespace gl_lab
