#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "mrpeval/linalg.hpp"

namespace mrpeval {

/// Value function over the states of an MRP.
using ValueVector = Vector;

/// Tolerance on row sums of a transition matrix. Rows outside it are
/// rejected, never renormalized.
inline constexpr double kRowSumTolerance = 1e-9;

/// Finite-state Markov reward process. The constructor validates every
/// invariant and throws mrpeval::Error naming the one that failed.
class Mrp {
 public:
  Mrp(Matrix transition, Vector reward, Vector reward_noise, double gamma);

  std::size_t dim() const noexcept { return reward_.size(); }
  double gamma() const noexcept { return gamma_; }
  const Matrix& transition() const noexcept { return transition_; }
  const Vector& reward() const noexcept { return reward_; }
  const Vector& reward_noise() const noexcept { return reward_noise_; }

 private:
  Matrix transition_;
  Vector reward_;
  Vector reward_noise_;
  double gamma_;
};

/// Checks that `p` is square, entries lie in [0,1] and rows sum to 1 within
/// kRowSumTolerance.
void validate_row_stochastic(const Matrix& p);

enum class SolveMethod { direct, value_iteration };
std::string_view to_string(SolveMethod method) noexcept;

struct SolveDiagnostics {
  double residual_linf = 0.0;
  std::size_t iterations = 0;
  SolveMethod method = SolveMethod::direct;
};

struct Solution {
  ValueVector theta;
  SolveDiagnostics diagnostics;
};

/// Solves theta = r + gamma P theta by dense LU on (I - gamma P). The
/// reported residual is ||theta - r - gamma P theta||_inf.
Solution solve_direct(const Matrix& p, std::span<const double> r, double gamma);

ValueVector exact_value(const Mrp& mrp);
Solution exact_value_with_diagnostics(const Mrp& mrp);

/// Iterates the Bellman operator from `initial` until gamma * ||theta_{t+1} -
/// theta_t||_inf <= tol, which bounds the distance to the fixed point by
/// tol / (1 - gamma). The returned residual is ||B(theta) - theta||_inf of the
/// returned iterate.
Solution value_iteration(const Mrp& mrp, std::span<const double> initial, double tol,
                         std::size_t max_iterations = 10'000'000);

/// r + gamma P theta
ValueVector bellman_apply(const Mrp& mrp, std::span<const double> theta);

/// max(theta) - min(theta). Throws on an empty vector.
double span_seminorm(std::span<const double> theta);

/// Per-row standard deviation of theta at a next state drawn from row j of
/// `p`: sqrt(sum_x p(j,x) (theta_x - (p theta)_j)^2).
ValueVector transition_sigma(const Matrix& p, std::span<const double> theta);
ValueVector population_sigma(const Mrp& mrp, std::span<const double> theta);

/// (I - gamma P)^{-1} v
Vector resolvent_apply(const Matrix& p, double gamma, std::span<const double> v);
/// ||(I - gamma P)^{-1} v||_inf for entrywise nonnegative v.
double resolvent_weighted_norm(const Matrix& p, double gamma, std::span<const double> v);
double resolvent_weighted_norm(const Mrp& mrp, std::span<const double> v);

}  // namespace mrpeval
