#include "mrpeval/mrp.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "mrpeval/error.hpp"
#include "mrpeval/kernels.hpp"

namespace mrpeval {

void validate_row_stochastic(const Matrix& p) {
  require(p.rows() == p.cols(), "mrp.transition_not_square",
          "transition matrix is " + std::to_string(p.rows()) + "x" + std::to_string(p.cols()));
  for (std::size_t i = 0; i < p.rows(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < p.cols(); ++j) {
      const double v = p(i, j);
      require(v >= 0.0 && v <= 1.0, "mrp.transition_entry_out_of_range",
              "transition entry (" + std::to_string(i) + "," + std::to_string(j) + ") = " + std::to_string(v) +
                  " is outside [0,1]");
      sum += v;
    }
    require(std::fabs(sum - 1.0) <= kRowSumTolerance, "mrp.row_not_stochastic",
            "transition row " + std::to_string(i) + " sums to " + std::to_string(sum));
  }
}

Mrp::Mrp(Matrix transition, Vector reward, Vector reward_noise, double gamma)
    : transition_(std::move(transition)),
      reward_(std::move(reward)),
      reward_noise_(std::move(reward_noise)),
      gamma_(gamma) {
  require(!reward_.empty(), "mrp.empty", "an MRP needs at least one state");
  require(gamma_ >= 0.0 && gamma_ < 1.0, "mrp.gamma_out_of_range",
          "discount " + std::to_string(gamma_) + " is outside [0,1)");
  require(transition_.rows() == reward_.size(), "mrp.dimension_mismatch",
          "transition has " + std::to_string(transition_.rows()) + " rows but reward has " +
              std::to_string(reward_.size()) + " entries");
  require(reward_noise_.size() == reward_.size(), "mrp.dimension_mismatch",
          "reward_noise has " + std::to_string(reward_noise_.size()) + " entries, expected " +
              std::to_string(reward_.size()));
  validate_row_stochastic(transition_);
  for (std::size_t j = 0; j < reward_.size(); ++j) {
    require(std::isfinite(reward_[j]), "mrp.reward_not_finite", "reward " + std::to_string(j) + " is not finite");
    require(reward_noise_[j] >= 0.0 && std::isfinite(reward_noise_[j]), "mrp.reward_noise_negative",
            "reward_noise " + std::to_string(j) + " must be finite and >= 0");
  }
}

std::string_view to_string(SolveMethod method) noexcept {
  return method == SolveMethod::direct ? "direct" : "value-iteration";
}

Solution solve_direct(const Matrix& p, std::span<const double> r, double gamma) {
  const LuFactorization lu(discounted_identity_minus(p, gamma));
  Solution out;
  out.theta = lu.solve(r);
  const Vector image = affine_multiply(p, out.theta, r, gamma);
  out.diagnostics = {linf_distance(out.theta, image), 0, SolveMethod::direct};
  return out;
}

Solution exact_value_with_diagnostics(const Mrp& mrp) {
  return solve_direct(mrp.transition(), mrp.reward(), mrp.gamma());
}

ValueVector exact_value(const Mrp& mrp) { return exact_value_with_diagnostics(mrp).theta; }

ValueVector bellman_apply(const Mrp& mrp, std::span<const double> theta) {
  require(theta.size() == mrp.dim(), "mrp.dimension_mismatch",
          "value vector has " + std::to_string(theta.size()) + " entries, MRP has " + std::to_string(mrp.dim()));
  return affine_multiply(mrp.transition(), theta, mrp.reward(), mrp.gamma());
}

Solution value_iteration(const Mrp& mrp, std::span<const double> initial, double tol, std::size_t max_iterations) {
  require(tol > 0.0, "value_iteration.bad_tolerance", "tolerance must be positive");
  Vector theta(initial.begin(), initial.end());
  Solution out;
  out.diagnostics.method = SolveMethod::value_iteration;
  for (std::size_t it = 1; it <= max_iterations; ++it) {
    Vector next = bellman_apply(mrp, theta);
    const double gap = linf_distance(next, theta);
    theta = std::move(next);
    out.diagnostics.iterations = it;
    if (mrp.gamma() * gap <= tol) break;
  }
  out.diagnostics.residual_linf = linf_distance(bellman_apply(mrp, theta), theta);
  out.theta = std::move(theta);
  return out;
}

double span_seminorm(std::span<const double> theta) {
  require(!theta.empty(), "span.empty", "span semi-norm of an empty vector");
  const auto [lo, hi] = std::minmax_element(theta.begin(), theta.end());
  return *hi - *lo;
}

ValueVector transition_sigma(const Matrix& p, std::span<const double> theta) {
  require(p.cols() == theta.size(), "mrp.dimension_mismatch", "value vector does not match transition matrix");
  const auto& k = kernels::active();
  ValueVector sigma(p.rows());
  for (std::size_t j = 0; j < p.rows(); ++j) {
    const double* w = p.row(j).data();
    const double mean = k.dot(w, theta.data(), theta.size());
    // Centered second moment; nonnegative term by term.
    const double variance = k.centered_square_dot(w, theta.data(), mean, theta.size());
    sigma[j] = std::sqrt(variance);
  }
  return sigma;
}

ValueVector population_sigma(const Mrp& mrp, std::span<const double> theta) {
  return transition_sigma(mrp.transition(), theta);
}

Vector resolvent_apply(const Matrix& p, double gamma, std::span<const double> v) {
  const LuFactorization lu(discounted_identity_minus(p, gamma));
  return lu.solve(v);
}

double resolvent_weighted_norm(const Matrix& p, double gamma, std::span<const double> v) {
  for (std::size_t j = 0; j < v.size(); ++j) {
    require(v[j] >= 0.0, "resolvent.negative_weight",
            "weight vector entry " + std::to_string(j) + " is negative");
  }
  return linf_norm(resolvent_apply(p, gamma, v));
}

double resolvent_weighted_norm(const Mrp& mrp, std::span<const double> v) {
  return resolvent_weighted_norm(mrp.transition(), mrp.gamma(), v);
}

}  // namespace mrpeval
