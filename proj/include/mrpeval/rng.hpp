#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace mrpeval {

/// One splitmix64 output for the given state: the state is advanced by the
/// golden-ratio increment and then run through the splitmix64 finalizer.
std::uint64_t splitmix64(std::uint64_t state) noexcept;

/// Sequential splitmix64 generator, used for seeding.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) noexcept : state_(state) {}
  std::uint64_t next() noexcept;

 private:
  std::uint64_t state_;
};

/// Purpose tags for per-cell streams in the sampling model.
enum class StreamPurpose : std::uint64_t { next_state = 1, reward = 2 };

/// Sub-seed for the (round, state, purpose) cell:
///   splitmix64(splitmix64(splitmix64(splitmix64(base) ^ purpose) ^ round) ^ state)
std::uint64_t derive_cell_seed(std::uint64_t base_seed, std::uint64_t round, std::uint64_t state,
                               StreamPurpose purpose) noexcept;

/// Seed for Monte Carlo trial `trial` of grid cell (alpha_index, gamma_index):
///   splitmix64(base ^ trial ^ splitmix64((alpha_index << 32) ^ gamma_index))
std::uint64_t derive_trial_seed(std::uint64_t base_seed, std::uint64_t trial, std::uint64_t alpha_index = 0,
                                std::uint64_t gamma_index = 0) noexcept;

/// xoshiro256** 1.0. State words are filled from a SplitMix64 seeded with the
/// given value.
class Xoshiro256StarStar {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256StarStar(std::uint64_t seed) noexcept;

  std::uint64_t next() noexcept;
  std::uint64_t operator()() noexcept { return next(); }
  static constexpr std::uint64_t min() noexcept { return 0; }
  static constexpr std::uint64_t max() noexcept { return ~std::uint64_t{0}; }

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform() noexcept;

 private:
  std::array<std::uint64_t, 4> s_;
};

/// Standard normal variate by the Marsaglia polar method; the second variate
/// of each accepted pair is discarded.
double standard_normal(Xoshiro256StarStar& rng) noexcept;

/// Inverse-CDF categorical draw: the first index x with u < cumulative[x].
/// If rounding leaves u >= cumulative.back(), the last index with positive
/// mass is returned.
std::uint32_t categorical(std::span<const double> cumulative, double u) noexcept;

/// Binomial(n, q) by sequential inversion of the CDF from 0 upward.
std::uint64_t binomial(Xoshiro256StarStar& rng, std::uint64_t n, double q) noexcept;

}  // namespace mrpeval
