#pragma once

#include <cstddef>
#include <string_view>

#include <json.hpp>

#include "mrpeval/estimators.hpp"
#include "mrpeval/mrp.hpp"
#include "mrpeval/sampling.hpp"

namespace mrpeval {

/// Failure probability and the universal constants of the plug-in bounds.
/// The constants are not numerically known; they default to 1 and c2 can be
/// calibrated by Monte Carlo (see calibrate_certificate_constant).
struct CertificateConfig {
  double delta = 0.05;
  double c1 = 1.0;  // sample-size gate
  double c2 = 1.0;  // leading constant of the instance-dependent bounds
  double c4 = 1.0;  // leading constant of the class bounds
};

void validate(const CertificateConfig& config);

/// bound = c2 * (term_deviation + term_span), every term >= 0.
struct Certificate {
  double bound = 0.0;
  double term_deviation = 0.0;
  double term_span = 0.0;
  bool gate_passed = false;
};

/// {bound, term_deviation, term_span, gate_passed, delta, constants: {c1, c2}}
nlohmann::json certificate_to_json(const Certificate& cert, const CertificateConfig& config);

/// log(8 D / delta)
double confidence_log(std::size_t dim, double delta);

/// N >= c1 gamma^2 / (1 - gamma)^2 log(8 D / delta)
bool sample_size_gate(std::size_t n, double gamma, std::size_t dim, const CertificateConfig& config);

/// Data-dependent certificate for a plug-in estimate:
///   sqrt(L/N) (gamma ||(I - gamma P_hat)^{-1} sigma_hat(theta_hat)||_inf + rho / (1 - gamma))
///   + (L/N) gamma ||theta_hat||_span / (1 - gamma),      L = log(8 D / delta),
/// scaled by c2. A failed gate is recorded, never thrown.
Certificate empirical_certificate(const SampleBatch& batch, const ValueEstimate& estimate, double reward_noise_bound,
                                  const CertificateConfig& config);

/// Terms from precomputed plug-in quantities; `weighted_sigma` is
/// ||(I - gamma P_hat)^{-1} sigma_hat(theta_hat)||_inf and `span` is
/// ||theta_hat||_span.
Certificate certificate_from_terms(std::size_t n, std::size_t dim, double gamma, double weighted_sigma,
                                   double reward_noise_bound, double span, const CertificateConfig& config);

/// Population version with theta*, sigma(theta*) and ||sigma_r||_inf of the
/// true model at sample size n.
Certificate population_certificate(const Mrp& mrp, std::size_t n, const CertificateConfig& config);

/// Upper bounds on (theta_var, v_bar, r_max, rho) describing an MRP class.
struct MrpClassParams {
  double sigma_val_bound = 0.0;
  double span_bound = 0.0;
  double reward_bound = 0.0;
  double reward_noise_bound = 0.0;
};

enum class UpperBoundClass { var_and_span, bounded_reward };
enum class LowerBoundClass { var_class, reward_class };

UpperBoundClass upper_bound_class_from_string(std::string_view name);
LowerBoundClass lower_bound_class_from_string(std::string_view name);

/// Worst-case plug-in bound over a class, gamma in [1/2, 1):
///   var_and_span:   c4/(1-g) (sqrt(L/N)(theta_var + rho) + (L/N) v_bar)
///   bounded_reward: c4/(1-g) sqrt(L/N) (r_max / sqrt(1-g) + rho)
double corollary_class_bound(UpperBoundClass cls, const MrpClassParams& params, double gamma, std::size_t dim,
                             std::size_t n, const CertificateConfig& config);

/// Minimax lower-bound reference value, gamma in [1/2, 1), D >= 4:
///   var_class:    c/(1-g) sqrt(log(D/2)/N) (theta_var + rho),  needs theta_var <= v_bar sqrt(1-g)
///   reward_class: c/(1-g) sqrt(log(D/2)/N) (r_max/sqrt(1-g) + rho),  needs r_max >= rho sqrt(log D / N)
double minimax_lower_bound(LowerBoundClass cls, const MrpClassParams& params, double gamma, std::size_t dim,
                           std::size_t n, double constant = 1.0);

}  // namespace mrpeval
