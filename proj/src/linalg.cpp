#include "mrpeval/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "mrpeval/error.hpp"
#include "mrpeval/kernels.hpp"

namespace mrpeval {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  Matrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    require(rows[i].size() == cols, "linalg.ragged_rows",
            "row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) + " entries, expected " +
                std::to_string(cols));
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Vector multiply(const Matrix& m, std::span<const double> x) {
  require(m.cols() == x.size(), "linalg.dimension_mismatch", "matrix-vector dimension mismatch");
  const auto& k = kernels::active();
  Vector y(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) y[i] = k.dot(m.row(i).data(), x.data(), x.size());
  return y;
}

Vector affine_multiply(const Matrix& m, std::span<const double> x, std::span<const double> bias, double scale) {
  require(m.cols() == x.size() && m.rows() == bias.size(), "linalg.dimension_mismatch",
          "affine map dimension mismatch");
  const auto& k = kernels::active();
  Vector y(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) y[i] = bias[i] + scale * k.dot(m.row(i).data(), x.data(), x.size());
  return y;
}

Matrix discounted_identity_minus(const Matrix& m, double gamma) {
  require(m.rows() == m.cols(), "linalg.not_square", "matrix must be square");
  Matrix a(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) a(i, j) = (i == j ? 1.0 : 0.0) - gamma * m(i, j);
  }
  return a;
}

double linf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

double linf_distance(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), "linalg.dimension_mismatch", "vector length mismatch");
  return kernels::max_abs_diff(a, b);
}

LuFactorization::LuFactorization(Matrix a) : lu_(std::move(a)), pivot_(lu_.rows()) {
  require(lu_.rows() == lu_.cols(), "linalg.not_square", "LU needs a square matrix");
  const std::size_t n = lu_.rows();
  const auto& k = kernels::active();
  for (std::size_t i = 0; i < n; ++i) pivot_[i] = i;

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t best = col;
    double best_abs = std::fabs(lu_(col, col));
    for (std::size_t i = col + 1; i < n; ++i) {
      const double v = std::fabs(lu_(i, col));
      if (v > best_abs) {
        best = i;
        best_abs = v;
      }
    }
    if (best_abs == 0.0) throw Error("linalg.singular", "matrix is singular at column " + std::to_string(col));
    if (best != col) {
      auto r1 = lu_.row(best);
      auto r2 = lu_.row(col);
      std::swap_ranges(r1.begin(), r1.end(), r2.begin());
      std::swap(pivot_[best], pivot_[col]);
    }
    const double diag = lu_(col, col);
    const double* pivot_row = lu_.row(col).data() + col + 1;
    const std::size_t tail = n - col - 1;
    for (std::size_t i = col + 1; i < n; ++i) {
      const double factor = lu_(i, col) / diag;
      lu_(i, col) = factor;
      if (factor != 0.0) k.sub_scaled(lu_.row(i).data() + col + 1, factor, pivot_row, tail);
    }
  }
}

Vector LuFactorization::solve(std::span<const double> b) const {
  const std::size_t n = lu_.rows();
  require(b.size() == n, "linalg.dimension_mismatch", "right-hand side has wrong length");
  const auto& k = kernels::active();
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[pivot_[i]];
  // Unit lower triangle.
  for (std::size_t i = 0; i < n; ++i) x[i] -= k.dot(lu_.row(i).data(), x.data(), i);
  for (std::size_t i = n; i-- > 0;) {
    const auto r = lu_.row(i);
    x[i] = (x[i] - k.dot(r.data() + i + 1, x.data() + i + 1, n - i - 1)) / r[i];
  }
  return x;
}

}  // namespace mrpeval
