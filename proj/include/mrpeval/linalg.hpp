#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mrpeval {

using Vector = std::vector<double>;

/// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);
  /// Builds from nested rows; all rows must have equal length.
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }

  std::span<const double> data() const noexcept { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// y = M x
Vector multiply(const Matrix& m, std::span<const double> x);

/// out = bias + scale * (M x)
Vector affine_multiply(const Matrix& m, std::span<const double> x, std::span<const double> bias, double scale);

/// I - gamma * M for a square M.
Matrix discounted_identity_minus(const Matrix& m, double gamma);

double linf_norm(std::span<const double> v);
double linf_distance(std::span<const double> a, std::span<const double> b);

/// LU factorization with partial pivoting of a square matrix.
class LuFactorization {
 public:
  /// Throws Error("linalg.singular") when a pivot is exactly zero.
  explicit LuFactorization(Matrix a);

  std::size_t dim() const noexcept { return lu_.rows(); }
  Vector solve(std::span<const double> b) const;

 private:
  Matrix lu_;
  std::vector<std::size_t> pivot_;
};

}  // namespace mrpeval
