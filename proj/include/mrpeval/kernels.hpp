#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Data-parallel inner loops. Every kernel has a portable scalar reference and,
// where the target allows, a vector variant. The vector variants reproduce the
// reference bit for bit: reductions accumulate in four interleaved lanes that
// are combined as (l0 + l1) + (l2 + l3) before the tail is added in order, and
// no fused multiply-add is used anywhere.

namespace mrpeval::kernels {

enum class Isa { scalar, avx2 };

struct KernelTable {
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // sum_i w[i] * (x[i] - center)^2
  double (*centered_square_dot)(const double* w, const double* x, double center, std::size_t n);
  // y[i] -= alpha * x[i]
  void (*sub_scaled)(double* y, double alpha, const double* x, std::size_t n);
  // max_i |a[i] - b[i]|, 0 for n == 0
  double (*max_abs_diff)(const double* a, const double* b, std::size_t n);
};

bool isa_supported(Isa isa) noexcept;
std::string_view isa_name(Isa isa) noexcept;

/// Kernel table for a specific ISA. Throws if the ISA is not supported by
/// this build or CPU.
const KernelTable& table(Isa isa);

/// Best supported ISA, unless MRPEVAL_ISA=scalar is set in the environment.
Isa active_isa() noexcept;
const KernelTable& active() noexcept;

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double centered_square_dot(const double* w, const double* x, double center, std::size_t n);
void sub_scaled(double* y, double alpha, const double* x, std::size_t n);
double max_abs_diff(const double* a, const double* b, std::size_t n);
}  // namespace scalar

#if defined(MRPEVAL_HAVE_AVX2)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double centered_square_dot(const double* w, const double* x, double center, std::size_t n);
void sub_scaled(double* y, double alpha, const double* x, std::size_t n);
double max_abs_diff(const double* a, const double* b, std::size_t n);
}  // namespace avx2
#endif

// Span conveniences over the active table.
inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}
inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  return active().max_abs_diff(a.data(), b.data(), a.size());
}

}  // namespace mrpeval::kernels
