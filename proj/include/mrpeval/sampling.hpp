#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "mrpeval/linalg.hpp"
#include "mrpeval/mrp.hpp"

namespace mrpeval {

/// Seed for the generative sampler. Every (round, state, purpose) cell draws
/// from its own xoshiro256** stream seeded by derive_cell_seed, so batches are
/// bit-identical for identical seeds regardless of evaluation order.
struct RngSpec {
  std::uint64_t base_seed = 0;
};

/// N synchronous rounds of generative samples: in round k every state j
/// yields one next state X(k,j) and one reward R(k,j).
class SampleBatch {
 public:
  SampleBatch(std::size_t dim, std::size_t n, double source_gamma, std::vector<std::uint32_t> next_states,
              std::vector<double> rewards, std::uint64_t base_seed = 0);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t n() const noexcept { return n_; }
  double source_gamma() const noexcept { return source_gamma_; }
  std::uint64_t base_seed() const noexcept { return base_seed_; }

  std::uint32_t next_state(std::size_t round, std::size_t state) const noexcept {
    return next_states_[round * dim_ + state];
  }
  double reward(std::size_t round, std::size_t state) const noexcept { return rewards_[round * dim_ + state]; }

  /// Round-major views: entry (k, j) lives at k * dim + j.
  std::span<const std::uint32_t> next_states() const noexcept { return next_states_; }
  std::span<const double> rewards() const noexcept { return rewards_; }

  /// The first m rounds as a batch of their own.
  SampleBatch prefix(std::size_t m) const;

 private:
  std::size_t dim_;
  std::size_t n_;
  double source_gamma_;
  std::vector<std::uint32_t> next_states_;
  std::vector<double> rewards_;
  std::uint64_t base_seed_;
};

/// Draws n rounds. Rewards are Normal(r_j, sigma_r_j^2); a state with zero
/// noise reports r_j exactly. Throws for n == 0.
SampleBatch sample_batch(const Mrp& mrp, std::size_t n, RngSpec rng);

/// Cumulative row sums of a transition matrix, the lookup table used for
/// inverse-CDF next-state draws.
Matrix cumulative_rows(const Matrix& p);

/// Plug-in model: p_hat(j, x) = #{k : X(k,j) = x} / N, r_hat(j) = mean_k R(k,j).
struct EmpiricalModel {
  Matrix p_hat;
  Vector r_hat;
};

EmpiricalModel empirical_model(const SampleBatch& batch);

/// r_hat alone, without building the D x D transition estimate.
Vector empirical_reward_mean(const SampleBatch& batch);

/// CSV with header round,state,next_state,reward plus a JSON sidecar at
/// `<csv path>.json` holding {n, dim, base_seed, gamma}.
void write_batch_csv(const std::filesystem::path& csv_path, const SampleBatch& batch);
SampleBatch read_batch_csv(const std::filesystem::path& csv_path);

}  // namespace mrpeval
