#include "mrpeval/certificates.hpp"

#include <cmath>
#include <string>

#include "mrpeval/error.hpp"

namespace mrpeval {

void validate(const CertificateConfig& config) {
  require(config.delta > 0.0 && config.delta < 1.0, "certificate.bad_delta",
          "delta = " + std::to_string(config.delta) + " is outside (0,1)");
  require(config.c1 > 0.0 && config.c2 >= 0.0 && config.c4 > 0.0, "certificate.bad_constant",
          "constants must be positive");
}

nlohmann::json certificate_to_json(const Certificate& cert, const CertificateConfig& config) {
  return {{"bound", cert.bound},
          {"term_deviation", cert.term_deviation},
          {"term_span", cert.term_span},
          {"gate_passed", cert.gate_passed},
          {"delta", config.delta},
          {"constants", {{"c1", config.c1}, {"c2", config.c2}}}};
}

double confidence_log(std::size_t dim, double delta) { return std::log(8.0 * static_cast<double>(dim) / delta); }

bool sample_size_gate(std::size_t n, double gamma, std::size_t dim, const CertificateConfig& config) {
  validate(config);
  const double horizon = gamma / (1.0 - gamma);
  return static_cast<double>(n) >= config.c1 * horizon * horizon * confidence_log(dim, config.delta);
}

Certificate certificate_from_terms(std::size_t n, std::size_t dim, double gamma, double weighted_sigma,
                                   double reward_noise_bound, double span, const CertificateConfig& config) {
  validate(config);
  require(reward_noise_bound >= 0.0, "certificate.negative_noise_bound", "reward noise bound must be >= 0");
  require(n >= 1, "certificate.zero_samples", "sample size must be >= 1");
  const double ratio = confidence_log(dim, config.delta) / static_cast<double>(n);
  Certificate c;
  c.term_deviation = std::sqrt(ratio) * (gamma * weighted_sigma + reward_noise_bound / (1.0 - gamma));
  c.term_span = ratio * gamma * span / (1.0 - gamma);
  c.bound = config.c2 * (c.term_deviation + c.term_span);
  c.gate_passed = sample_size_gate(n, gamma, dim, config);
  return c;
}

Certificate empirical_certificate(const SampleBatch& batch, const ValueEstimate& estimate, double reward_noise_bound,
                                  const CertificateConfig& config) {
  require(estimate.method == EstimatorKind::plugin, "certificate.needs_plugin",
          "the data-dependent certificate applies to plug-in estimates");
  require(estimate.theta.size() == batch.dim(), "certificate.dimension_mismatch", "estimate does not match batch");
  const double gamma = batch.source_gamma();
  const EmpiricalModel model = empirical_model(batch);
  const ValueVector sigma_hat = empirical_sigma(model, estimate.theta);
  const double weighted = resolvent_weighted_norm(model.p_hat, gamma, sigma_hat);
  return certificate_from_terms(batch.n(), batch.dim(), gamma, weighted, reward_noise_bound,
                                span_seminorm(estimate.theta), config);
}

Certificate population_certificate(const Mrp& mrp, std::size_t n, const CertificateConfig& config) {
  const ValueVector theta = exact_value(mrp);
  const ValueVector sigma = population_sigma(mrp, theta);
  return certificate_from_terms(n, mrp.dim(), mrp.gamma(), resolvent_weighted_norm(mrp, sigma),
                                linf_norm(mrp.reward_noise()), span_seminorm(theta), config);
}

UpperBoundClass upper_bound_class_from_string(std::string_view name) {
  if (name == "var_and_span") return UpperBoundClass::var_and_span;
  if (name == "bounded_reward") return UpperBoundClass::bounded_reward;
  throw Error("certificate.unknown_class", "unknown class \"" + std::string(name) + "\"");
}

LowerBoundClass lower_bound_class_from_string(std::string_view name) {
  if (name == "var_class") return LowerBoundClass::var_class;
  if (name == "reward_class") return LowerBoundClass::reward_class;
  throw Error("certificate.unknown_class", "unknown class \"" + std::string(name) + "\"");
}

namespace {

void check_class_params(const MrpClassParams& p) {
  require(p.sigma_val_bound >= 0.0 && p.span_bound >= 0.0 && p.reward_bound >= 0.0 && p.reward_noise_bound >= 0.0,
          "class.negative_parameter", "class parameters must be >= 0");
}

void check_discount_range(double gamma) {
  require(gamma >= 0.5 && gamma < 1.0, "class.gamma_out_of_range",
          "gamma = " + std::to_string(gamma) + " is outside [1/2, 1)");
}

}  // namespace

double corollary_class_bound(UpperBoundClass cls, const MrpClassParams& params, double gamma, std::size_t dim,
                             std::size_t n, const CertificateConfig& config) {
  validate(config);
  check_class_params(params);
  check_discount_range(gamma);
  require(n >= 1 && dim >= 1, "class.bad_size", "n and dim must be >= 1");
  const double ratio = confidence_log(dim, config.delta) / static_cast<double>(n);
  const double lead = config.c4 / (1.0 - gamma);
  if (cls == UpperBoundClass::var_and_span) {
    require(params.sigma_val_bound <= params.span_bound, "class.sigma_exceeds_span",
            "var_and_span class needs sigma_val_bound <= span_bound");
    return lead * (std::sqrt(ratio) * (params.sigma_val_bound + params.reward_noise_bound) + ratio * params.span_bound);
  }
  return lead * std::sqrt(ratio) * (params.reward_bound / std::sqrt(1.0 - gamma) + params.reward_noise_bound);
}

double minimax_lower_bound(LowerBoundClass cls, const MrpClassParams& params, double gamma, std::size_t dim,
                           std::size_t n, double constant) {
  check_class_params(params);
  check_discount_range(gamma);
  require(dim >= 4, "lower_bound.dim_too_small", "lower bounds need D >= 4");
  require(n >= 1, "lower_bound.zero_samples", "sample size must be >= 1");
  require(constant > 0.0, "lower_bound.bad_constant", "constant must be positive");
  const double rate = std::sqrt(std::log(static_cast<double>(dim) / 2.0) / static_cast<double>(n));
  const double lead = constant / (1.0 - gamma);
  if (cls == LowerBoundClass::var_class) {
    require(params.sigma_val_bound <= params.span_bound * std::sqrt(1.0 - gamma), "lower_bound.sigma_exceeds_span",
            "var_class needs sigma_val_bound <= span_bound * sqrt(1 - gamma)");
    return lead * rate * (params.sigma_val_bound + params.reward_noise_bound);
  }
  require(params.reward_bound >=
              params.reward_noise_bound * std::sqrt(std::log(static_cast<double>(dim)) / static_cast<double>(n)),
          "lower_bound.reward_below_noise", "reward_class needs r_max >= rho * sqrt(log D / N)");
  return lead * rate * (params.reward_bound / std::sqrt(1.0 - gamma) + params.reward_noise_bound);
}

}  // namespace mrpeval
