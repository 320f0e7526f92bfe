#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace expose {

/// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  static Matrix identity(std::size_t n);
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const { return {values_.data() + r * cols_, cols_}; }
  std::vector<double> column(std::size_t c) const;
  const std::vector<double>& values() const { return values_; }

  Matrix transposed() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
double frobenius_norm(const Matrix& a);

double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> a);

struct EigenDecomposition {
  std::vector<double> values;  ///< descending
  Matrix vectors;              ///< column i pairs with values[i]
  int sweeps = 0;
};

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// Rejects input that is not symmetric to 1e-10 (scaled by the largest
/// entry) and throws std::runtime_error if the off-diagonal mass has not
/// collapsed after 100 sweeps. Eigenvectors are sign-normalized so that the
/// first entry of largest magnitude is positive.
EigenDecomposition jacobi_eigh(const Matrix& a);

}  // namespace expose
