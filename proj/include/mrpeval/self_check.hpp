#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mrpeval/mrp.hpp"
#include "mrpeval/rng.hpp"

namespace mrpeval {

/// Uniform-random row-stochastic MRP: entries U[0,1) normalized per row,
/// rewards U[-1,1), constant reward noise.
Mrp random_mrp(Xoshiro256StarStar& rng, std::size_t dim, double gamma, double reward_noise = 0.0);

struct CheckResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t violations = 0;
  double worst = 0.0;  // largest observed excess over the allowed bound
  bool passed() const noexcept { return violations == 0; }
};

// Each check draws `cases` random instances from `seed`.
CheckResult check_solver_oracle(std::size_t cases, std::uint64_t seed);
CheckResult check_closed_forms(std::size_t cases, std::uint64_t seed);
CheckResult check_mom_lipschitz(std::size_t cases, std::uint64_t seed);
CheckResult check_mom_contraction(std::size_t cases, std::uint64_t seed);
CheckResult check_order_statistic(std::size_t cases, std::uint64_t seed);
CheckResult check_kl_inequality(std::size_t cases, std::uint64_t seed);
CheckResult check_kernel_equivalence(std::size_t cases, std::uint64_t seed);

/// All checks with case counts multiplied by `scale` (scale 1 runs in well
/// under a second).
std::vector<CheckResult> run_self_checks(std::size_t scale, std::uint64_t seed);

}  // namespace mrpeval
