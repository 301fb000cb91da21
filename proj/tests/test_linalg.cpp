#include <doctest.h>

#include <random>

#include "mrpeval/error.hpp"
#include "mrpeval/linalg.hpp"
#include "support.hpp"

using namespace mrpeval;

TEST_CASE("LU solves a system that needs pivoting") {
  const Matrix a = Matrix::from_rows({{0.0, 2.0, 1.0}, {1.0, 1.0, 0.0}, {3.0, 0.0, 1.0}});
  const LuFactorization lu(a);
  const Vector x = lu.solve(Vector{5.0, 3.0, 6.0});
  const Vector ax = multiply(a, x);
  CHECK(ax[0] == doctest::Approx(5.0));
  CHECK(ax[1] == doctest::Approx(3.0));
  CHECK(ax[2] == doctest::Approx(6.0));
}

TEST_CASE("LU matches long-double Gauss-Jordan on random resolvent systems") {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = 1 + rep % 17;
    const Matrix p = oracle::random_stochastic(gen, n);
    Vector b(n);
    for (auto& x : b) x = u(gen);
    const Vector ref = oracle::gauss_jordan_solve(p, 0.95, b);
    const Vector got = LuFactorization(discounted_identity_minus(p, 0.95)).solve(b);
    CHECK(linf_distance(ref, got) < 1e-11);
  }
}

TEST_CASE("singular matrices are rejected") {
  const Matrix a = Matrix::from_rows({{1.0, 2.0}, {2.0, 4.0}});
  try {
    LuFactorization lu(a);
    FAIL("expected linalg.singular");
  } catch (const Error& e) {
    CHECK(e.id() == "linalg.singular");
  }
}

TEST_CASE("matrix construction and helpers") {
  CHECK_THROWS_AS(Matrix::from_rows({{1.0, 2.0}, {3.0}}), Error);
  const Matrix i3 = Matrix::identity(3);
  CHECK(i3(1, 1) == 1.0);
  CHECK(i3(0, 1) == 0.0);
  const Matrix m = Matrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
  CHECK(multiply(m, Vector{1.0, 1.0}) == Vector{3.0, 7.0});
  CHECK(affine_multiply(m, Vector{1.0, 1.0}, Vector{1.0, -1.0}, 0.5) == Vector{2.5, 2.5});
  const Matrix d = discounted_identity_minus(m, 0.5);
  CHECK(d == Matrix::from_rows({{0.5, -1.0}, {-1.5, -1.0}}));
  CHECK(linf_norm(Vector{-3.0, 2.0}) == 3.0);
  CHECK(linf_distance(Vector{1.0, 2.0}, Vector{0.0, 4.5}) == 2.5);
  CHECK_THROWS_AS(linf_distance(Vector{1.0}, Vector{1.0, 2.0}), Error);
}
