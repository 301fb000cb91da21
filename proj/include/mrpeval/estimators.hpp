#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "mrpeval/error.hpp"
#include "mrpeval/mrp.hpp"
#include "mrpeval/sampling.hpp"

namespace mrpeval {

enum class EstimatorKind { plugin, mom };
std::string_view to_string(EstimatorKind kind) noexcept;
EstimatorKind estimator_from_string(std::string_view name);

struct ValueEstimate {
  ValueVector theta;
  EstimatorKind method = EstimatorKind::plugin;
  SolveDiagnostics diagnostics;
};

/// Value function of the empirical MRP (p_hat, r_hat), by direct solve.
ValueEstimate plugin_estimate(const SampleBatch& batch);

/// sqrt((1/N) sum_k (theta[X(k,j)] - (p_hat theta)_j)^2) for every state j.
ValueVector empirical_sigma(const SampleBatch& batch, std::span<const double> theta);
ValueVector empirical_sigma(const EmpiricalModel& model, std::span<const double> theta);

/// The i-th largest entry (1-based), so i = 1 is the maximum.
double order_statistic_largest(std::span<const double> values, std::size_t i);

/// The floor(K/2)-th largest entry for K >= 2 and the sole entry for K = 1.
double median_order_stat(std::span<const double> values);

struct MomConfig {
  std::size_t k_buckets = 1;
  double fp_tolerance = 1e-8;
  std::size_t max_iterations = 10'000;
};

/// Bucket count ceil(8 log(4 D / delta)) clamped to [1, n].
std::size_t mom_buckets_for_confidence(std::size_t dim, double delta, std::size_t n);

/// Median-of-means estimate of P theta. Bucket i holds rounds
/// [i m, (i + 1) m) with m = floor(N / K); the trailing N - K m rounds are
/// unused. Per (state, bucket) the sampled next states are stored as
/// (target, count) runs, so one application costs O(K * distinct targets).
class MomOperator {
 public:
  MomOperator(const SampleBatch& batch, std::size_t k_buckets);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t buckets() const noexcept { return buckets_; }
  std::size_t bucket_size() const noexcept { return bucket_size_; }

  /// Entry j: median over buckets i of (1/m) sum_{k in bucket i} theta[X(k,j)].
  ValueVector apply(std::span<const double> theta) const;
  void apply(std::span<const double> theta, std::span<double> out) const;

  /// Bucket mean vector mu_i(theta).
  ValueVector bucket_mean(std::size_t bucket, std::span<const double> theta) const;

 private:
  double run_mean(std::size_t state, std::size_t bucket, std::span<const double> theta) const;

  std::size_t dim_;
  std::size_t buckets_;
  std::size_t bucket_size_;
  std::vector<std::uint32_t> offsets_;  // (state * K + bucket) -> first run, size D*K + 1
  std::vector<std::uint32_t> targets_;
  std::vector<double> counts_;
};

ValueVector mom_operator(const SampleBatch& batch, const MomConfig& config, std::span<const double> theta);

/// Raised when the fixed-point loop exhausts max_iterations.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& message, SolveDiagnostics diagnostics)
      : Error("mom.no_convergence", message), diagnostics_(diagnostics) {}
  const SolveDiagnostics& diagnostics() const noexcept { return diagnostics_; }

 private:
  SolveDiagnostics diagnostics_;
};

/// Called after every iteration with (iteration, ||theta_{t+1} - theta_t||_inf).
using IterationObserver = std::function<void(std::size_t, double)>;

/// Fixed point of theta -> r_hat + gamma MoM(theta), iterated from zero until
/// successive iterates differ by at most fp_tolerance in the sup norm. r_hat
/// averages all N rounds.
ValueEstimate mom_value_estimate(const SampleBatch& batch, const MomConfig& config,
                                 const IterationObserver& observer = {});

/// Same, reusing a prebuilt operator.
ValueEstimate mom_value_estimate(const MomOperator& op, std::span<const double> r_hat, double gamma,
                                 const MomConfig& config, const IterationObserver& observer = {});

}  // namespace mrpeval
