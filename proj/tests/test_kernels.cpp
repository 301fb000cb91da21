#include <doctest.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "mrpeval/kernels.hpp"

using namespace mrpeval::kernels;

namespace {

std::vector<double> random_values(std::mt19937_64& gen, std::size_t n, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> v(n);
  for (auto& x : v) x = u(gen);
  return v;
}

bool same_bits(double a, double b) { return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b); }

}  // namespace

TEST_CASE("scalar dot follows the four-lane summation order") {
  const std::vector<double> a{1e16, 1.0, -1e16, 1.0, 1.0, 3.0, 5.0};
  const std::vector<double> b(7, 1.0);
  // One full block of four lanes, then a tail of three. A left-to-right sum
  // would give 10 here.
  const double l0 = 1e16, l1 = 1.0, l2 = -1e16, l3 = 1.0;
  const double expected = ((l0 + l1) + (l2 + l3)) + 1.0 + 3.0 + 5.0;
  CHECK(same_bits(scalar::dot(a.data(), b.data(), 7), expected));
  CHECK(scalar::dot(a.data(), b.data(), 7) == 9.0);
}

TEST_CASE("scalar kernels on small exact inputs") {
  const std::vector<double> w{0.25, 0.25, 0.5};
  const std::vector<double> x{1.0, 3.0, 2.0};
  CHECK(scalar::dot(w.data(), x.data(), 3) == doctest::Approx(2.0));
  CHECK(scalar::centered_square_dot(w.data(), x.data(), 2.0, 3) == doctest::Approx(0.5));
  std::vector<double> y{1.0, 1.0, 1.0};
  scalar::sub_scaled(y.data(), 2.0, x.data(), 3);
  CHECK(y == std::vector<double>{-1.0, -5.0, -3.0});
  CHECK(scalar::max_abs_diff(w.data(), x.data(), 3) == doctest::Approx(2.75));
  CHECK(scalar::max_abs_diff(w.data(), x.data(), 0) == 0.0);
  CHECK(scalar::dot(w.data(), x.data(), 0) == 0.0);
}

TEST_CASE("max_abs_diff propagates NaN") {
  const std::vector<double> a{0.0, std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0, 0.0};
  const std::vector<double> b(5, 1.0);
  CHECK(std::isnan(scalar::max_abs_diff(a.data(), b.data(), 5)));
  if (isa_supported(Isa::avx2)) CHECK(std::isnan(table(Isa::avx2).max_abs_diff(a.data(), b.data(), 5)));
}

TEST_CASE("vector kernels are bitwise identical to the scalar reference") {
  if (!isa_supported(Isa::avx2)) {
    MESSAGE("AVX2 not available; equivalence test skipped");
    return;
  }
  const KernelTable& ref = table(Isa::scalar);
  const KernelTable& vec = table(Isa::avx2);
  std::mt19937_64 gen(11);
  for (std::size_t n = 0; n <= 70; ++n) {
    for (int rep = 0; rep < 20; ++rep) {
      const double scale = rep % 2 ? 1e8 : 1.0;
      const auto a = random_values(gen, n, scale);
      const auto b = random_values(gen, n, 1.0);
      const double center = random_values(gen, 1, 3.0)[0];
      CHECK(same_bits(ref.dot(a.data(), b.data(), n), vec.dot(a.data(), b.data(), n)));
      CHECK(same_bits(ref.centered_square_dot(b.data(), a.data(), center, n),
                      vec.centered_square_dot(b.data(), a.data(), center, n)));
      CHECK(same_bits(ref.max_abs_diff(a.data(), b.data(), n), vec.max_abs_diff(a.data(), b.data(), n)));
      auto y1 = a, y2 = a;
      ref.sub_scaled(y1.data(), center, b.data(), n);
      vec.sub_scaled(y2.data(), center, b.data(), n);
      bool all = true;
      for (std::size_t i = 0; i < n; ++i) all = all && same_bits(y1[i], y2[i]);
      CHECK(all);
    }
  }
}

TEST_CASE("unaligned and offset views agree across ISAs") {
  if (!isa_supported(Isa::avx2)) return;
  std::mt19937_64 gen(5);
  const auto a = random_values(gen, 40, 10.0);
  const auto b = random_values(gen, 40, 10.0);
  for (std::size_t off = 0; off < 4; ++off) {
    const std::size_t n = 40 - off;
    CHECK(same_bits(table(Isa::scalar).dot(a.data() + off, b.data(), n),
                    table(Isa::avx2).dot(a.data() + off, b.data(), n)));
  }
}

TEST_CASE("dispatch reports a supported ISA") {
  CHECK(isa_supported(Isa::scalar));
  CHECK(isa_supported(active_isa()));
  CHECK(isa_name(Isa::scalar) == "scalar");
  CHECK(isa_name(Isa::avx2) == "avx2");
}
