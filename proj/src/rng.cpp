#include "mrpeval/rng.hpp"

#include <algorithm>
#include <cmath>

namespace mrpeval {

std::uint64_t splitmix64(std::uint64_t state) noexcept {
  std::uint64_t z = state + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::next() noexcept {
  const std::uint64_t out = splitmix64(state_);
  state_ += 0x9E3779B97F4A7C15ULL;
  return out;
}

std::uint64_t derive_cell_seed(std::uint64_t base_seed, std::uint64_t round, std::uint64_t state,
                               StreamPurpose purpose) noexcept {
  std::uint64_t h = splitmix64(base_seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(purpose));
  h = splitmix64(h ^ round);
  return splitmix64(h ^ state);
}

std::uint64_t derive_trial_seed(std::uint64_t base_seed, std::uint64_t trial, std::uint64_t alpha_index,
                                std::uint64_t gamma_index) noexcept {
  const std::uint64_t cell = splitmix64((alpha_index << 32) ^ gamma_index);
  return splitmix64(base_seed ^ trial ^ cell);
}

namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

}  // namespace

Xoshiro256StarStar::Xoshiro256StarStar(std::uint64_t seed) noexcept {
  SplitMix64 sm(seed);
  for (auto& word : s_) word = sm.next();
}

std::uint64_t Xoshiro256StarStar::next() noexcept {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Xoshiro256StarStar::uniform() noexcept {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double standard_normal(Xoshiro256StarStar& rng) noexcept {
  for (;;) {
    const double u = 2.0 * rng.uniform() - 1.0;
    const double v = 2.0 * rng.uniform() - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

std::uint32_t categorical(std::span<const double> cumulative, double u) noexcept {
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  if (it != cumulative.end()) return static_cast<std::uint32_t>(it - cumulative.begin());
  // u landed past the rounded total; fall back to the last state with mass.
  std::size_t x = cumulative.size() - 1;
  while (x > 0 && cumulative[x] == cumulative[x - 1]) --x;
  if (x == 0 && cumulative[0] == 0.0) return static_cast<std::uint32_t>(cumulative.size() - 1);
  return static_cast<std::uint32_t>(x);
}

std::uint64_t binomial(Xoshiro256StarStar& rng, std::uint64_t n, double q) noexcept {
  if (q <= 0.0 || n == 0) return 0;
  if (q >= 1.0) return n;
  const double ratio = q / (1.0 - q);
  double pmf = std::pow(1.0 - q, static_cast<double>(n));
  if (pmf == 0.0) {
    // (1-q)^n underflowed; count Bernoulli trials instead.
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < n; ++i) hits += rng.uniform() < q ? 1 : 0;
    return hits;
  }
  double cdf = pmf;
  const double u = rng.uniform();
  std::uint64_t x = 0;
  while (u >= cdf && x < n) {
    pmf *= ratio * static_cast<double>(n - x) / static_cast<double>(x + 1);
    ++x;
    cdf += pmf;
  }
  return x;
}

}  // namespace mrpeval
