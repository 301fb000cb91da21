// Compiled with -mavx2 -mno-fma. Keep this file free of library headers other
// than intrinsics so no AVX2-encoded inline function can leak into other
// translation units.
#include <immintrin.h>

#include <cstddef>

namespace mrpeval::kernels::avx2 {

namespace {

// (l0 + l1) + (l2 + l3), matching the scalar lane combination.
inline double combine_lanes(__m256d acc) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  double sum = combine_lanes(acc);
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

double centered_square_dot(const double* w, const double* x, double center, std::size_t n) {
  const __m256d c = _mm256_set1_pd(center);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), c);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_mul_pd(d, d)));
  }
  double sum = combine_lanes(acc);
  for (; i < n; ++i) {
    const double d = x[i] - center;
    sum += w[i] * (d * d);
  }
  return sum;
}

void sub_scaled(double* y, double alpha, const double* x, std::size_t n) {
  const __m256d a = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d prod = _mm256_mul_pd(a, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_sub_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (; i < n; ++i) y[i] -= alpha * x[i];
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d m = _mm256_setzero_pd();
  __m256d nan_seen = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_andnot_pd(sign_mask, _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    nan_seen = _mm256_or_pd(nan_seen, _mm256_cmp_pd(d, d, _CMP_UNORD_Q));
    m = _mm256_max_pd(m, d);
  }
  if (_mm256_movemask_pd(nan_seen) != 0) return __builtin_nan("");
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, m);
  double result = lanes[0];
  for (int l = 1; l < 4; ++l) {
    if (lanes[l] > result) result = lanes[l];
  }
  for (; i < n; ++i) {
    const double d = __builtin_fabs(a[i] - b[i]);
    if (d > result || __builtin_isnan(d)) result = d;
  }
  return result;
}

}  // namespace mrpeval::kernels::avx2
