#include "mrpeval/self_check.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "mrpeval/estimators.hpp"
#include "mrpeval/instances.hpp"
#include "mrpeval/kernels.hpp"
#include "mrpeval/sampling.hpp"

namespace mrpeval {

namespace {

constexpr double kSlack = 1e-12;

double uniform_in(Xoshiro256StarStar& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

std::size_t index_in(Xoshiro256StarStar& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.next() % (hi - lo + 1));
}

Vector random_vector(Xoshiro256StarStar& rng, std::size_t n, double scale) {
  Vector v(n);
  for (auto& x : v) x = uniform_in(rng, -scale, scale);
  return v;
}

void record(CheckResult& r, double excess) {
  ++r.cases;
  if (excess > 0.0 || std::isnan(excess)) {
    ++r.violations;
    r.worst = std::isnan(excess) ? excess : std::max(r.worst, excess);
  }
}

double relative_gap(double a, double b) { return std::fabs(a - b) / std::max(1.0, std::fabs(b)); }

}  // namespace

Mrp random_mrp(Xoshiro256StarStar& rng, std::size_t dim, double gamma, double reward_noise) {
  Matrix p(dim, dim);
  Vector r(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      p(i, j) = rng.uniform();
      sum += p(i, j);
    }
    if (sum == 0.0) {
      p(i, i) = 1.0;
      sum = 1.0;
    }
    for (std::size_t j = 0; j < dim; ++j) p(i, j) /= sum;
    r[i] = uniform_in(rng, -1.0, 1.0);
  }
  return Mrp(std::move(p), std::move(r), Vector(dim, reward_noise), gamma);
}

CheckResult check_solver_oracle(std::size_t cases, std::uint64_t seed) {
  CheckResult out{"solver_oracle"};
  Xoshiro256StarStar rng(seed);
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t dim = index_in(rng, 1, 50);
    const Mrp mrp = random_mrp(rng, dim, uniform_in(rng, 0.0, 0.99));
    const ValueVector direct = exact_value(mrp);
    const ValueVector iterated = value_iteration(mrp, Vector(dim, 0.0), 1e-12).theta;
    record(out, linf_distance(direct, iterated) - 1e-8);
  }
  return out;
}

CheckResult check_closed_forms(std::size_t cases, std::uint64_t seed) {
  CheckResult out{"closed_forms"};
  Xoshiro256StarStar rng(seed);
  constexpr double tol = 1e-10;
  for (std::size_t c = 0; c < cases; ++c) {
    const BasicMrpParams params{rng.uniform(), uniform_in(rng, 0.1, 2.0), rng.uniform(), uniform_in(rng, 0.0, 0.99)};
    const Mrp mrp = basic_mrp(params);
    const BasicClosedForms closed = basic_closed_forms(params);
    const ValueVector theta = exact_value(mrp);
    const ValueVector sigma = population_sigma(mrp, theta);
    double excess = -tol;
    for (std::size_t j = 0; j < 2; ++j) {
      excess = std::max(excess, relative_gap(theta[j], closed.theta_star[j]) - tol);
      excess = std::max(excess, relative_gap(sigma[j], closed.sigma_star[j]) - tol);
    }
    excess = std::max(excess, relative_gap(span_seminorm(theta), closed.span) - tol);
    excess = std::max(excess, relative_gap(resolvent_weighted_norm(mrp, sigma), closed.weighted_sigma) - tol);
    record(out, excess);
  }
  return out;
}

namespace {

// Small noisy batch shared by a handful of operator checks.
struct OperatorFixture {
  SampleBatch batch;
  MomOperator op;
};

OperatorFixture make_fixture(Xoshiro256StarStar& rng) {
  const std::size_t dim = index_in(rng, 2, 8);
  const std::size_t buckets = index_in(rng, 1, 9);
  const std::size_t n = buckets * index_in(rng, 1, 6) + index_in(rng, 0, 3);
  const Mrp mrp = random_mrp(rng, dim, uniform_in(rng, 0.0, 0.99), 0.5);
  SampleBatch batch = sample_batch(mrp, n, RngSpec{rng.next()});
  MomOperator op(batch, buckets);
  return {std::move(batch), std::move(op)};
}

template <typename Body>
CheckResult operator_check(const char* name, std::size_t cases, std::uint64_t seed, Body body) {
  CheckResult out{name};
  Xoshiro256StarStar rng(seed);
  constexpr std::size_t per_fixture = 10;
  for (std::size_t c = 0; c < cases;) {
    const OperatorFixture fx = make_fixture(rng);
    for (std::size_t i = 0; i < per_fixture && c < cases; ++i, ++c) {
      const std::size_t dim = fx.batch.dim();
      const double scale = uniform_in(rng, 0.01, 100.0);
      const Vector u = random_vector(rng, dim, scale);
      Vector v = u;
      // Mix far and near pairs so ties between buckets are exercised.
      const double step = rng.uniform() < 0.5 ? scale : 1e-6 * scale;
      for (auto& x : v) x += uniform_in(rng, -step, step);
      record(out, body(fx, u, v));
    }
  }
  return out;
}

}  // namespace

CheckResult check_mom_lipschitz(std::size_t cases, std::uint64_t seed) {
  return operator_check("mom_lipschitz", cases, seed, [](const OperatorFixture& fx, const Vector& u, const Vector& v) {
    return linf_distance(fx.op.apply(u), fx.op.apply(v)) - linf_distance(u, v) - kSlack;
  });
}

CheckResult check_mom_contraction(std::size_t cases, std::uint64_t seed) {
  return operator_check("mom_contraction", cases, seed, [](const OperatorFixture& fx, const Vector& u, const Vector& v) {
    const double gamma = fx.batch.source_gamma();
    const Vector r_hat = empirical_reward_mean(fx.batch);
    const ValueVector mu = fx.op.apply(u), mv = fx.op.apply(v);
    Vector bu(u.size()), bv(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) {
      bu[j] = r_hat[j] + gamma * mu[j];
      bv[j] = r_hat[j] + gamma * mv[j];
    }
    return linf_distance(bu, bv) - gamma * linf_distance(u, v) - kSlack;
  });
}

CheckResult check_order_statistic(std::size_t cases, std::uint64_t seed) {
  CheckResult out{"order_statistic"};
  Xoshiro256StarStar rng(seed);
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t len = index_in(rng, 1, 25);
    const double scale = uniform_in(rng, 0.01, 100.0);
    const Vector u = random_vector(rng, len, scale);
    Vector v = u;
    const double step = uniform_in(rng, 0.0, scale);
    for (auto& x : v) x += uniform_in(rng, -step, step);
    const std::size_t i = index_in(rng, 1, len);
    record(out, std::fabs(order_statistic_largest(u, i) - order_statistic_largest(v, i)) - linf_distance(u, v) -
                    kSlack);
  }
  return out;
}

CheckResult check_kl_inequality(std::size_t cases, std::uint64_t seed) {
  CheckResult out{"kl_inequality"};
  Xoshiro256StarStar rng(seed);
  for (std::size_t c = 0; c < cases; ++c) {
    const double p = uniform_in(rng, 0.5, 1.0 - 1e-6);
    const double q = uniform_in(rng, 0.5, 1.0 - 1e-6);
    const KlBound kb = kl_bernoulli_bound_pair(p, q);
    record(out, kb.kl - kb.bound);
  }
  return out;
}

CheckResult check_kernel_equivalence(std::size_t cases, std::uint64_t seed) {
  CheckResult out{"kernel_equivalence"};
  if (!kernels::isa_supported(kernels::Isa::avx2)) return out;
  const auto& ref = kernels::table(kernels::Isa::scalar);
  const auto& vec = kernels::table(kernels::Isa::avx2);
  Xoshiro256StarStar rng(seed);
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t n = index_in(rng, 0, 67);
    const Vector a = random_vector(rng, n, 10.0);
    const Vector b = random_vector(rng, n, 10.0);
    const double center = uniform_in(rng, -1.0, 1.0);
    const double alpha = uniform_in(rng, -2.0, 2.0);
    bool same = std::bit_cast<std::uint64_t>(ref.dot(a.data(), b.data(), n)) ==
                    std::bit_cast<std::uint64_t>(vec.dot(a.data(), b.data(), n)) &&
                std::bit_cast<std::uint64_t>(ref.centered_square_dot(a.data(), b.data(), center, n)) ==
                    std::bit_cast<std::uint64_t>(vec.centered_square_dot(a.data(), b.data(), center, n)) &&
                std::bit_cast<std::uint64_t>(ref.max_abs_diff(a.data(), b.data(), n)) ==
                    std::bit_cast<std::uint64_t>(vec.max_abs_diff(a.data(), b.data(), n));
    Vector y1 = a, y2 = a;
    ref.sub_scaled(y1.data(), alpha, b.data(), n);
    vec.sub_scaled(y2.data(), alpha, b.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
      same = same && std::bit_cast<std::uint64_t>(y1[i]) == std::bit_cast<std::uint64_t>(y2[i]);
    }
    record(out, same ? -1.0 : 1.0);
  }
  return out;
}

std::vector<CheckResult> run_self_checks(std::size_t scale, std::uint64_t seed) {
  const std::size_t s = std::max<std::size_t>(scale, 1);
  return {check_solver_oracle(20 * s, splitmix64(seed ^ 1)),  check_closed_forms(200 * s, splitmix64(seed ^ 2)),
          check_mom_lipschitz(500 * s, splitmix64(seed ^ 3)), check_mom_contraction(500 * s, splitmix64(seed ^ 4)),
          check_order_statistic(500 * s, splitmix64(seed ^ 5)), check_kl_inequality(5000 * s, splitmix64(seed ^ 6)),
          check_kernel_equivalence(500 * s, splitmix64(seed ^ 7))};
}

}  // namespace mrpeval
