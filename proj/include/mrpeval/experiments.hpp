#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mrpeval/certificates.hpp"
#include "mrpeval/estimators.hpp"
#include "mrpeval/mrp.hpp"
#include "mrpeval/sampling.hpp"

namespace mrpeval {

/// Runs body(i) for i in [0, count) on up to `threads` workers. Callers write
/// into per-index slots, so results never depend on scheduling.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body);

struct ErrorStats {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t trials = 0;
};

ErrorStats summarize(std::span<const double> values);

/// Where a Monte Carlo trial sits: trial t of grid cell (alpha_index,
/// gamma_index) samples with derive_trial_seed(base_seed, t, alpha_index,
/// gamma_index).
struct TrialPlan {
  std::size_t n = 10'000;
  std::size_t trials = 200;
  MomConfig mom{20};
  std::uint64_t base_seed = 0;
  std::size_t alpha_index = 0;
  std::size_t gamma_index = 0;
  std::size_t threads = 1;
};

/// Per-trial sup-norm errors of both estimators on shared batches.
struct TrialErrors {
  std::vector<double> plugin;
  std::vector<double> mom;
};

/// Errors ||theta_hat - theta*||_inf of one trial, for each requested estimator.
std::pair<double, double> trial_errors(const Mrp& mrp, std::span<const double> theta_star, std::size_t n,
                                       const MomConfig& mom, std::uint64_t seed, bool want_plugin, bool want_mom);

TrialErrors monte_carlo_trial_errors(const Mrp& mrp, const TrialPlan& plan, bool want_plugin = true,
                                     bool want_mom = true);

/// Mean and standard error of the sup-norm error over `trials` seeded trials.
ErrorStats monte_carlo_error(const Mrp& mrp, EstimatorKind estimator, std::size_t n, std::size_t trials,
                             const MomConfig& mom_config, RngSpec rng, std::size_t threads = 1);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Least squares of ln y on ln x. Needs >= 2 points with positive
/// coordinates and at least two distinct x.
SlopeFit loglog_slope(std::span<const std::pair<double, double>> points);

struct ExperimentConfig {
  std::vector<double> alphas;
  std::vector<double> gammas;
  std::size_t n_samples = 10'000;
  std::size_t trials = 200;
  std::size_t mom_buckets = 20;
  std::uint64_t base_seed = 0;
  std::string output_path;  // prefix for <prefix>_errors.csv etc.; empty writes nothing
  std::size_t threads = 1;
};

void validate(const ExperimentConfig& config);

ExperimentConfig default_fig1_config();
ExperimentConfig default_fig2_config();

/// Key-value text: one `key = value` per line, `#` comments, lists
/// comma-separated. Keys mirror ExperimentConfig fields. Values override
/// those already in `base`.
ExperimentConfig parse_experiment_config(const std::string& text, ExperimentConfig base);
ExperimentConfig load_experiment_config(const std::filesystem::path& path, ExperimentConfig base);

/// Certificate constants in the same format; keys delta, c1, c2, c4.
CertificateConfig parse_certificate_config(const std::string& text, CertificateConfig base);
CertificateConfig load_certificate_config(const std::filesystem::path& path, CertificateConfig base);
std::string certificate_config_text(const CertificateConfig& config);

struct ExperimentRow {
  double alpha = 0.0;
  double gamma = 0.0;
  EstimatorKind estimator = EstimatorKind::plugin;
  double mean_linf_error = 0.0;
  double standard_error = 0.0;
  std::size_t trials = 0;
  std::size_t n_samples = 0;
  std::size_t dim = 0;
};

struct SlopeRow {
  double alpha = 0.0;
  EstimatorKind estimator = EstimatorKind::plugin;
  SlopeFit fit;
};

struct ExperimentResult {
  std::string name;
  std::vector<ExperimentRow> rows;
  std::vector<SlopeRow> slopes;

  const SlopeRow& slope(double alpha, EstimatorKind estimator) const;
  const ExperimentRow& row(double alpha, double gamma, EstimatorKind estimator) const;
};

/// Two-state scaling study: basic_mrp(fig1_params(alpha, gamma)) for every
/// grid cell, both estimators, slopes of mean error against 1/(1 - gamma).
ExperimentResult run_fig1(const ExperimentConfig& config);

/// Span-dominated study on second_mrp(fig2_params(alpha, gamma, N)).
ExperimentResult run_fig2(const ExperimentConfig& config);

/// Predicted slope 1.5 - alpha of the two-state study.
inline double fig1_predicted_slope(double alpha) { return 1.5 - alpha; }

std::string errors_csv(const ExperimentResult& result);
std::string slopes_csv(const ExperimentResult& result);
nlohmann::json summary_json(const ExperimentResult& result);

/// Writes <prefix>_errors.csv, <prefix>_slopes.csv and <prefix>_summary.json.
void write_experiment_outputs(const ExperimentResult& result, const std::string& prefix);

/// Monte Carlo of E[max_j |Bin(n, q) - n q|] over k independent binomials with
/// q = 1 / (3 k n), against the 4/9 lower bound and, when log(1 + k) >= 5, the
/// Bennett-type upper bound sqrt(12) log(1 + k) / log log(1 + k).
struct BinomialDeviationResult {
  std::size_t k = 0;
  std::size_t n = 0;
  double q = 0.0;
  double mc_mean_max_dev = 0.0;
  double mc_standard_error = 0.0;
  double lower_bound = 4.0 / 9.0;
  bool lower_ok = false;
  bool bennett_applicable = false;
  double bennett_bound = 0.0;
  bool bennett_ok = true;
};

double bennett_max_deviation_bound(std::size_t k);

BinomialDeviationResult binomial_deviation_check(std::size_t k, std::size_t n, std::size_t trials, RngSpec rng);

/// Standardized plug-in hub errors N (1 - gamma) / (gamma mu) (theta_hat(hub) -
/// theta*(hub)) on second_mrp, one per trial and block.
struct HubErrorStudy {
  double mean = 0.0;
  double standard_error = 0.0;
  double variance = 0.0;
  double expected_variance = 0.0;  // N q (1 - q)
  std::size_t samples = 0;
};

HubErrorStudy hub_error_study(double q, double mu, double gamma, std::size_t copies, std::size_t n,
                              std::size_t trials, RngSpec rng, std::size_t threads = 1);

/// Slope of mean plug-in error against N on a log-log scale.
SlopeFit sample_size_sweep(const Mrp& mrp, std::span<const std::size_t> sample_sizes, std::size_t trials,
                           RngSpec rng, std::size_t threads = 1);

/// Certificate coverage: fraction of trials with ||theta_hat - theta*||_inf
/// <= empirical_certificate bound. `ratios` holds error / (bound at c2 = 1)
/// per trial (0 when both vanish).
struct CoverageResult {
  double coverage = 0.0;
  std::vector<double> ratios;
};

CoverageResult certificate_coverage_study(const Mrp& mrp, std::size_t n, const CertificateConfig& config,
                                          double reward_noise_bound, std::size_t trials, RngSpec rng,
                                          std::size_t instance_index = 0, std::size_t threads = 1);

struct BenchmarkInstance {
  std::string name;
  Mrp mrp;
};

/// Fixed calibration suite: two-state hard instances, a span-dominated
/// instance, a reward-noise-only instance and a dense random instance.
std::vector<BenchmarkInstance> certificate_benchmark_suite();

struct CalibrationResult {
  double c2 = 0.0;
  std::vector<std::pair<std::string, double>> per_instance;
};

/// Smallest c2 with empirical coverage >= 1 - delta on every suite member.
/// Per instance the ceil((T + 1)(1 - delta))-th smallest ratio is used; the
/// suite value is the maximum, since the constant is uniform over instances.
CalibrationResult calibrate_certificate_constant(const std::vector<BenchmarkInstance>& suite, std::size_t n,
                                                 double delta, std::size_t trials_per_instance, RngSpec rng,
                                                 std::size_t threads = 1);

/// Pooled held-out coverage over the suite with `trials_per_instance` trials each.
double suite_coverage(const std::vector<BenchmarkInstance>& suite, std::size_t n, const CertificateConfig& config,
                      std::size_t trials_per_instance, RngSpec rng, std::size_t threads = 1);

}  // namespace mrpeval
