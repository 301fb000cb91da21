#include "mrpeval/kernels.hpp"

#include <cmath>

namespace mrpeval::kernels::scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double l0 = 0.0, l1 = 0.0, l2 = 0.0, l3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    l0 += a[i] * b[i];
    l1 += a[i + 1] * b[i + 1];
    l2 += a[i + 2] * b[i + 2];
    l3 += a[i + 3] * b[i + 3];
  }
  double sum = (l0 + l1) + (l2 + l3);
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

double centered_square_dot(const double* w, const double* x, double center, std::size_t n) {
  double l0 = 0.0, l1 = 0.0, l2 = 0.0, l3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const double d0 = x[i] - center;
    const double d1 = x[i + 1] - center;
    const double d2 = x[i + 2] - center;
    const double d3 = x[i + 3] - center;
    l0 += w[i] * (d0 * d0);
    l1 += w[i + 1] * (d1 * d1);
    l2 += w[i + 2] * (d2 * d2);
    l3 += w[i + 3] * (d3 * d3);
  }
  double sum = (l0 + l1) + (l2 + l3);
  for (; i < n; ++i) {
    const double d = x[i] - center;
    sum += w[i] * (d * d);
  }
  return sum;
}

void sub_scaled(double* y, double alpha, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] -= alpha * x[i];
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::fabs(a[i] - b[i]);
    if (d > m || std::isnan(d)) m = d;
  }
  return m;
}

}  // namespace mrpeval::kernels::scalar
