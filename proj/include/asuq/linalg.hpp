#pragma once

// Small dense linear algebra for the least-squares fits and the symmetric
// eigenproblem. Problem sizes here are tiny (tens of rows, <= ~20 columns),
// so everything is plain row-major storage and O(n^3) kernels.

#include <cstddef>
#include <span>
#include <vector>

namespace asuq {

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }

  Matrix transposed() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix multiply(const Matrix& a, const Matrix& b);
std::vector<double> multiply(const Matrix& a, std::span<const double> x);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm1(std::span<const double> a);

struct LeastSquaresResult {
  std::vector<double> solution;
  std::vector<double> residual;       // A x - b
  double residual_norm = 0.0;
  std::vector<double> singular_values;  // of A, descending
  double condition = 0.0;               // sigma_max / sigma_min
  Matrix r;                             // upper-triangular factor, cols x cols
};

/// Minimizes ||A x - b||_2 by Householder QR. The numerical rank is the count
/// of singular values above rank_tol * sigma_max; anything short of full
/// column rank throws RankError. Requires rows >= cols.
LeastSquaresResult solve_least_squares(const Matrix& a, std::span<const double> b,
                                       double rank_tol = 1e-10);

// Singular values by one-sided Jacobi, descending.
std::vector<double> singular_values(const Matrix& a);

/// (R^T R)^{-1} for an invertible upper-triangular R, i.e. (A^T A)^{-1} when A = QR.
Matrix gram_inverse_from_r(const Matrix& r);

struct SymmetricEigen {
  std::vector<double> values;  // descending
  Matrix vectors;              // column k pairs with values[k]
};

// Cyclic Jacobi rotations. The input must be symmetric.
SymmetricEigen symmetric_eigen(const Matrix& s, double tol = 1e-14, int max_sweeps = 100);

}  // namespace asuq
