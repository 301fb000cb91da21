#pragma once

// Reference implementations used only by the tests. They are written
// independently of the library code paths they check: long-double
// Gauss-Jordan instead of the LU kernels, explicit bucket scans instead of the
// run-length operator, and exact enumeration instead of Monte Carlo.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "mrpeval/linalg.hpp"
#include "mrpeval/mrp.hpp"
#include "mrpeval/sampling.hpp"

namespace oracle {

using mrpeval::Matrix;
using mrpeval::Vector;

// Random row-stochastic matrix with some exact zeros.
inline Matrix random_stochastic(std::mt19937_64& gen, std::size_t dim) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix p(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      const double w = u(gen) < 0.3 ? 0.0 : u(gen);
      p(i, j) = w;
      sum += w;
    }
    if (sum == 0.0) {
      p(i, i) = 1.0;
      sum = 1.0;
    }
    for (std::size_t j = 0; j < dim; ++j) p(i, j) /= sum;
  }
  return p;
}

inline mrpeval::Mrp random_mrp(std::mt19937_64& gen, std::size_t dim, double gamma, double noise = 0.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector r(dim);
  for (auto& x : r) x = u(gen);
  return mrpeval::Mrp(random_stochastic(gen, dim), std::move(r), Vector(dim, noise), gamma);
}

// Solves (I - gamma P) x = b by Gauss-Jordan in long double.
inline Vector gauss_jordan_solve(const Matrix& p, double gamma, const Vector& b) {
  const std::size_t n = b.size();
  std::vector<std::vector<long double>> a(n, std::vector<long double>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = (i == j ? 1.0L : 0.0L) - static_cast<long double>(gamma) * p(i, j);
    a[i][n] = b[i];
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t i = c + 1; i < n; ++i) {
      if (std::fabs(a[i][c]) > std::fabs(a[piv][c])) piv = i;
    }
    std::swap(a[c], a[piv]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c) continue;
      const long double f = a[i][c] / a[c][c];
      for (std::size_t j = c; j <= n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(a[i][n] / a[i][i]);
  return x;
}

// sum_{t < terms} gamma^t P^t, as a dense matrix.
inline Matrix neumann_resolvent(const Matrix& p, double gamma, std::size_t terms) {
  const std::size_t n = p.rows();
  Matrix sum = Matrix::identity(n);
  Matrix power = Matrix::identity(n);
  for (std::size_t t = 1; t < terms; ++t) {
    Matrix next(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j) next(i, j) += gamma * power(i, k) * p(k, j);
    power = next;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) sum(i, j) += power(i, j);
  }
  return sum;
}

// Median-of-means fixed point by direct bucket scans: every application
// walks the rounds of every bucket, sorts the K means and picks the
// floor(K/2)-th largest.
inline Vector straight_mom_fixed_point(const mrpeval::SampleBatch& batch, std::size_t k, double tol,
                                       std::size_t max_iter = 100000) {
  const std::size_t d = batch.dim();
  const std::size_t m = batch.n() / k;
  const double gamma = batch.source_gamma();
  Vector r_hat(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    double s = 0.0;
    for (std::size_t t = 0; t < batch.n(); ++t) s += batch.reward(t, j);
    r_hat[j] = s / static_cast<double>(batch.n());
  }
  Vector theta(d, 0.0);
  for (std::size_t it = 0; it < max_iter; ++it) {
    Vector next(d);
    for (std::size_t j = 0; j < d; ++j) {
      std::vector<double> means(k);
      for (std::size_t b = 0; b < k; ++b) {
        double s = 0.0;
        for (std::size_t t = b * m; t < (b + 1) * m; ++t) s += theta[batch.next_state(t, j)];
        means[b] = s / static_cast<double>(m);
      }
      std::sort(means.begin(), means.end(), std::greater<>());
      next[j] = r_hat[j] + gamma * means[k == 1 ? 0 : k / 2 - 1];
    }
    double gap = 0.0;
    for (std::size_t j = 0; j < d; ++j) gap = std::max(gap, std::fabs(next[j] - theta[j]));
    theta = next;
    if (gap <= tol) return theta;
  }
  return theta;
}

// E[max_{j <= k} |Y_j - n q|] for k i.i.d. Bin(n, q), by summing over the
// distinct values v of |Y - n q|: E = sum_v v (F(v)^k - F(v-)^k).
inline double expected_max_abs_deviation(std::size_t k, std::size_t n, double q) {
  std::vector<std::pair<double, double>> mass;  // (|y - nq|, probability)
  const double mean = static_cast<double>(n) * q;
  for (std::size_t y = 0; y <= n; ++y) {
    const double logp = std::lgamma(n + 1.0) - std::lgamma(y + 1.0) - std::lgamma(n - y + 1.0) +
                        (y > 0 ? y * std::log(q) : 0.0) + (n - y > 0 ? (n - y) * std::log1p(-q) : 0.0);
    mass.emplace_back(std::fabs(static_cast<double>(y) - mean), std::exp(logp));
  }
  std::sort(mass.begin(), mass.end());
  double expectation = 0.0, cdf = 0.0;
  for (std::size_t i = 0; i < mass.size();) {
    const double v = mass[i].first;
    const double before = cdf;
    while (i < mass.size() && mass[i].first == v) cdf += mass[i++].second;
    expectation += v * (std::pow(std::min(cdf, 1.0), static_cast<double>(k)) - std::pow(before, static_cast<double>(k)));
  }
  return expectation;
}

// Scratch directory removed on scope exit.
struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() /
           ("mrpeval_" + tag + "_" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace oracle
