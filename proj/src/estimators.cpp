#include "mrpeval/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "mrpeval/kernels.hpp"

namespace mrpeval {

std::string_view to_string(EstimatorKind kind) noexcept { return kind == EstimatorKind::plugin ? "plugin" : "mom"; }

EstimatorKind estimator_from_string(std::string_view name) {
  if (name == "plugin") return EstimatorKind::plugin;
  if (name == "mom") return EstimatorKind::mom;
  throw Error("estimator.unknown", "unknown estimator \"" + std::string(name) + "\" (expected plugin|mom)");
}

ValueEstimate plugin_estimate(const SampleBatch& batch) {
  const EmpiricalModel model = empirical_model(batch);
  Solution s = solve_direct(model.p_hat, model.r_hat, batch.source_gamma());
  return {std::move(s.theta), EstimatorKind::plugin, s.diagnostics};
}

ValueVector empirical_sigma(const EmpiricalModel& model, std::span<const double> theta) {
  return transition_sigma(model.p_hat, theta);
}

ValueVector empirical_sigma(const SampleBatch& batch, std::span<const double> theta) {
  require(theta.size() == batch.dim(), "estimator.dimension_mismatch", "value vector does not match batch dim");
  return empirical_sigma(empirical_model(batch), theta);
}

double order_statistic_largest(std::span<const double> values, std::size_t i) {
  require(!values.empty(), "median.empty", "order statistic of an empty vector");
  require(i >= 1 && i <= values.size(), "median.bad_rank",
          "rank " + std::to_string(i) + " outside [1, " + std::to_string(values.size()) + "]");
  std::vector<double> work(values.begin(), values.end());
  std::nth_element(work.begin(), work.begin() + static_cast<std::ptrdiff_t>(i - 1), work.end(), std::greater<>());
  return work[i - 1];
}

double median_order_stat(std::span<const double> values) {
  require(!values.empty(), "median.empty", "median of an empty vector");
  if (values.size() == 1) return values[0];
  return order_statistic_largest(values, values.size() / 2);
}

std::size_t mom_buckets_for_confidence(std::size_t dim, double delta, std::size_t n) {
  require(delta > 0.0 && delta < 1.0, "mom.bad_delta", "delta must lie in (0,1)");
  require(dim >= 1 && n >= 1, "mom.bad_size", "dim and n must be >= 1");
  const double k = std::ceil(8.0 * std::log(4.0 * static_cast<double>(dim) / delta));
  return std::clamp<std::size_t>(static_cast<std::size_t>(std::max(k, 1.0)), 1, n);
}

MomOperator::MomOperator(const SampleBatch& batch, std::size_t k_buckets)
    : dim_(batch.dim()), buckets_(k_buckets), bucket_size_(0) {
  require(k_buckets >= 1, "mom.zero_buckets", "number of buckets must be >= 1");
  require(k_buckets <= batch.n(), "mom.too_many_buckets",
          "K = " + std::to_string(k_buckets) + " exceeds N = " + std::to_string(batch.n()));
  bucket_size_ = batch.n() / k_buckets;

  std::vector<std::uint32_t> scratch(dim_, 0);
  std::vector<std::uint32_t> touched;
  offsets_.reserve(dim_ * buckets_ + 1);
  offsets_.push_back(0);
  for (std::size_t j = 0; j < dim_; ++j) {
    for (std::size_t i = 0; i < buckets_; ++i) {
      touched.clear();
      const std::size_t begin = i * bucket_size_;
      for (std::size_t k = begin; k < begin + bucket_size_; ++k) {
        const std::uint32_t x = batch.next_state(k, j);
        if (scratch[x]++ == 0) touched.push_back(x);
      }
      std::sort(touched.begin(), touched.end());
      for (std::uint32_t x : touched) {
        targets_.push_back(x);
        counts_.push_back(static_cast<double>(scratch[x]));
        scratch[x] = 0;
      }
      offsets_.push_back(static_cast<std::uint32_t>(targets_.size()));
    }
  }
}

double MomOperator::run_mean(std::size_t state, std::size_t bucket, std::span<const double> theta) const {
  const std::size_t slot = state * buckets_ + bucket;
  double sum = 0.0;
  for (std::uint32_t e = offsets_[slot]; e < offsets_[slot + 1]; ++e) sum += counts_[e] * theta[targets_[e]];
  return sum / static_cast<double>(bucket_size_);
}

void MomOperator::apply(std::span<const double> theta, std::span<double> out) const {
  require(theta.size() == dim_ && out.size() == dim_, "mom.dimension_mismatch", "value vector does not match dim");
  std::vector<double> means(buckets_);
  // floor(K/2)-th largest, i.e. ascending index K - floor(K/2); K = 1 uses its only bucket.
  const std::size_t pick = buckets_ == 1 ? 0 : buckets_ - buckets_ / 2;
  for (std::size_t j = 0; j < dim_; ++j) {
    for (std::size_t i = 0; i < buckets_; ++i) means[i] = run_mean(j, i, theta);
    std::nth_element(means.begin(), means.begin() + static_cast<std::ptrdiff_t>(pick), means.end());
    out[j] = means[pick];
  }
}

ValueVector MomOperator::apply(std::span<const double> theta) const {
  ValueVector out(dim_);
  apply(theta, out);
  return out;
}

ValueVector MomOperator::bucket_mean(std::size_t bucket, std::span<const double> theta) const {
  require(bucket < buckets_, "mom.bad_bucket", "bucket index out of range");
  require(theta.size() == dim_, "mom.dimension_mismatch", "value vector does not match dim");
  ValueVector mu(dim_);
  for (std::size_t j = 0; j < dim_; ++j) mu[j] = run_mean(j, bucket, theta);
  return mu;
}

ValueVector mom_operator(const SampleBatch& batch, const MomConfig& config, std::span<const double> theta) {
  return MomOperator(batch, config.k_buckets).apply(theta);
}

ValueEstimate mom_value_estimate(const MomOperator& op, std::span<const double> r_hat, double gamma,
                                 const MomConfig& config, const IterationObserver& observer) {
  require(config.fp_tolerance > 0.0, "mom.bad_tolerance", "fp_tolerance must be positive");
  require(config.max_iterations >= 1, "mom.bad_iterations", "max_iterations must be >= 1");
  require(r_hat.size() == op.dim(), "mom.dimension_mismatch", "reward vector does not match dim");
  const std::size_t dim = op.dim();
  const auto& k = kernels::active();

  ValueVector theta(dim, 0.0);
  ValueVector next(dim);
  SolveDiagnostics diag{0.0, 0, SolveMethod::value_iteration};
  bool converged = false;
  for (std::size_t it = 1; it <= config.max_iterations; ++it) {
    op.apply(theta, next);
    for (std::size_t j = 0; j < dim; ++j) next[j] = r_hat[j] + gamma * next[j];
    const double gap = k.max_abs_diff(next.data(), theta.data(), dim);
    theta.swap(next);
    diag.iterations = it;
    if (observer) observer(it, gap);
    if (gap <= config.fp_tolerance) {
      converged = true;
      break;
    }
  }
  op.apply(theta, next);
  for (std::size_t j = 0; j < dim; ++j) next[j] = r_hat[j] + gamma * next[j];
  diag.residual_linf = k.max_abs_diff(next.data(), theta.data(), dim);
  if (!converged) {
    throw ConvergenceError("median-of-means iteration did not converge in " + std::to_string(config.max_iterations) +
                               " iterations (residual " + std::to_string(diag.residual_linf) + ")",
                           diag);
  }
  return {std::move(theta), EstimatorKind::mom, diag};
}

ValueEstimate mom_value_estimate(const SampleBatch& batch, const MomConfig& config, const IterationObserver& observer) {
  const MomOperator op(batch, config.k_buckets);
  return mom_value_estimate(op, empirical_reward_mean(batch), batch.source_gamma(), config, observer);
}

}  // namespace mrpeval
