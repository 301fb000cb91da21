#include <doctest.h>

#include <cmath>
#include <random>

#include "mrpeval/error.hpp"
#include "mrpeval/experiments.hpp"
#include "mrpeval/rng.hpp"
#include "mrpeval/sampling.hpp"
#include "support.hpp"

using namespace mrpeval;

namespace {

Mrp basic_two_state(double noise = 0.0) {
  return Mrp(Matrix::from_rows({{2.0 / 3.0, 1.0 / 3.0}, {0.0, 1.0}}), {1.0, 0.0}, {noise, noise}, 0.5);
}

}  // namespace

TEST_CASE("deterministic rows always draw their target") {
  const Matrix perm = Matrix::from_rows({{0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}, {1.0, 0.0, 0.0}});
  const Mrp mrp(perm, {1.0, 2.0, 3.0}, {0.0, 0.0, 0.0}, 0.9);
  const SampleBatch b = sample_batch(mrp, 500, RngSpec{4});
  for (std::size_t k = 0; k < b.n(); ++k) {
    CHECK(b.next_state(k, 0) == 1);
    CHECK(b.next_state(k, 1) == 2);
    CHECK(b.next_state(k, 2) == 0);
    CHECK(b.reward(k, 1) == 2.0);
  }
  const EmpiricalModel model = empirical_model(b);
  CHECK(model.p_hat == perm);
  CHECK(model.r_hat == Vector{1.0, 2.0, 3.0});
}

TEST_CASE("self-loop frequency concentrates at 2/3") {
  const SampleBatch b = sample_batch(basic_two_state(), 10000, RngSpec{2024});
  std::size_t stay = 0;
  for (std::size_t k = 0; k < b.n(); ++k) stay += b.next_state(k, 0) == 0 ? 1 : 0;
  const double freq = static_cast<double>(stay) / 10000.0;
  CHECK(std::fabs(freq - 2.0 / 3.0) <= 3.0 * std::sqrt((2.0 / 9.0) / 10000.0));
  for (std::size_t k = 0; k < b.n(); ++k) REQUIRE(b.next_state(k, 1) == 1);
}

TEST_CASE("empirical model counts draws") {
  // State 0 draws [0, 1, 1, 0]; state 1 always draws 1.
  const SampleBatch b(2, 4, 0.5, {0, 1, 1, 1, 1, 1, 0, 1}, {1.0, 0.0, 3.0, 0.0, 1.0, 0.0, 3.0, 0.0});
  const EmpiricalModel m = empirical_model(b);
  CHECK(m.p_hat(0, 0) == 0.5);
  CHECK(m.p_hat(0, 1) == 0.5);
  CHECK(m.p_hat(1, 0) == 0.0);
  CHECK(m.p_hat(1, 1) == 1.0);
  CHECK(m.r_hat == Vector{2.0, 0.0});
  CHECK(empirical_reward_mean(b) == m.r_hat);
}

TEST_CASE("noiseless rewards are reported exactly") {
  const SampleBatch b = sample_batch(basic_two_state(), 200, RngSpec{1});
  for (std::size_t k = 0; k < b.n(); ++k) {
    REQUIRE(b.reward(k, 0) == 1.0);
    REQUIRE(b.reward(k, 1) == 0.0);
  }
  CHECK(empirical_model(b).r_hat == Vector{1.0, 0.0});
}

TEST_CASE("batches are bit-identical for identical seeds and differ across seeds") {
  const Mrp mrp = basic_two_state(0.7);
  const SampleBatch a = sample_batch(mrp, 300, RngSpec{99});
  const SampleBatch b = sample_batch(mrp, 300, RngSpec{99});
  const SampleBatch c = sample_batch(mrp, 300, RngSpec{100});
  CHECK(std::equal(a.next_states().begin(), a.next_states().end(), b.next_states().begin()));
  CHECK(std::equal(a.rewards().begin(), a.rewards().end(), b.rewards().begin()));
  CHECK_FALSE(std::equal(a.rewards().begin(), a.rewards().end(), c.rewards().begin()));
}

TEST_CASE("every cell uses its own derived stream") {
  std::mt19937_64 gen(8);
  const Mrp mrp = oracle::random_mrp(gen, 4, 0.5, 1.0);
  const SampleBatch b = sample_batch(mrp, 20, RngSpec{55});
  const Matrix cum = cumulative_rows(mrp.transition());
  for (std::size_t k = 0; k < 20; ++k) {
    for (std::size_t j = 0; j < 4; ++j) {
      Xoshiro256StarStar s(derive_cell_seed(55, k, j, StreamPurpose::next_state));
      CHECK(b.next_state(k, j) == categorical(cum.row(j), s.uniform()));
      Xoshiro256StarStar r(derive_cell_seed(55, k, j, StreamPurpose::reward));
      CHECK(b.reward(k, j) == mrp.reward()[j] + 1.0 * standard_normal(r));
    }
  }
}

TEST_CASE("prefix keeps the first rounds and a longer batch extends a shorter one") {
  const Mrp mrp = basic_two_state(0.3);
  const SampleBatch longer = sample_batch(mrp, 50, RngSpec{6});
  const SampleBatch shorter = sample_batch(mrp, 20, RngSpec{6});
  const SampleBatch pre = longer.prefix(20);
  CHECK(pre.n() == 20);
  CHECK(std::equal(pre.rewards().begin(), pre.rewards().end(), shorter.rewards().begin()));
  CHECK(std::equal(pre.next_states().begin(), pre.next_states().end(), shorter.next_states().begin()));
}

TEST_CASE("empirical rows are multiples of 1/N and sum to one") {
  std::mt19937_64 gen(12);
  const Mrp mrp = oracle::random_mrp(gen, 6, 0.8);
  const std::size_t n = 37;
  const EmpiricalModel m = empirical_model(sample_batch(mrp, n, RngSpec{3}));
  for (std::size_t i = 0; i < 6; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < 6; ++j) {
      const double scaled = m.p_hat(i, j) * static_cast<double>(n);
      CHECK(scaled == doctest::Approx(std::round(scaled)).epsilon(1e-12));
      sum += m.p_hat(i, j);
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("empirical model is unbiased over many seeds") {
  std::mt19937_64 gen(31);
  const Mrp mrp = oracle::random_mrp(gen, 3, 0.5, 0.5);
  constexpr int seeds = 400;
  constexpr std::size_t n = 25;
  Matrix p_sum(3, 3), p_sq(3, 3);
  Vector r_sum(3, 0.0), r_sq(3, 0.0);
  for (int s = 0; s < seeds; ++s) {
    const EmpiricalModel m = empirical_model(sample_batch(mrp, n, RngSpec{derive_trial_seed(17, s)}));
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        p_sum(i, j) += m.p_hat(i, j);
        p_sq(i, j) += m.p_hat(i, j) * m.p_hat(i, j);
      }
      r_sum[i] += m.r_hat[i];
      r_sq[i] += m.r_hat[i] * m.r_hat[i];
    }
  }
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      const double mean = p_sum(i, j) / seeds;
      const double se = std::sqrt(std::max(p_sq(i, j) / seeds - mean * mean, 0.0) / seeds);
      CHECK(std::fabs(mean - mrp.transition()(i, j)) <= 4.0 * se + 1e-15);
    }
    const double mean = r_sum[i] / seeds;
    const double se = std::sqrt((r_sq[i] / seeds - mean * mean) / seeds);
    CHECK(std::fabs(mean - mrp.reward()[i]) <= 4.0 * se);
  }
}

TEST_CASE("batch CSV round trip with sidecar") {
  oracle::TempDir dir("batch");
  const Mrp mrp = basic_two_state(0.4);
  const SampleBatch b = sample_batch(mrp, 30, RngSpec{12});
  write_batch_csv(dir / "b.csv", b);
  const SampleBatch back = read_batch_csv(dir / "b.csv");
  CHECK(back.n() == 30);
  CHECK(back.dim() == 2);
  CHECK(back.source_gamma() == 0.5);
  CHECK(back.base_seed() == 12);
  CHECK(std::equal(back.rewards().begin(), back.rewards().end(), b.rewards().begin()));
  CHECK(std::equal(back.next_states().begin(), back.next_states().end(), b.next_states().begin()));
}

TEST_CASE("sampling input validation") {
  CHECK_THROWS_AS(sample_batch(basic_two_state(), 0, RngSpec{1}), Error);
  CHECK_THROWS_AS(SampleBatch(2, 1, 0.5, {0, 5}, {0.0, 0.0}), Error);
  CHECK_THROWS_AS(SampleBatch(2, 2, 0.5, {0, 1}, {0.0, 0.0}), Error);
  oracle::TempDir dir("batch_missing");
  try {
    read_batch_csv(dir / "absent.csv");
    FAIL("expected an io error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::io);
  }
}
