#include "mrpeval/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "mrpeval/error.hpp"
#include "mrpeval/instances.hpp"
#include "mrpeval/io.hpp"
#include "mrpeval/rng.hpp"

namespace mrpeval {

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min(std::max<std::size_t>(threads, 1), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = count;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

ErrorStats summarize(std::span<const double> values) {
  ErrorStats s;
  s.trials = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() >= 2) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    const double var = ss / static_cast<double>(values.size() - 1);
    s.standard_error = std::sqrt(var / static_cast<double>(values.size()));
  }
  return s;
}

std::pair<double, double> trial_errors(const Mrp& mrp, std::span<const double> theta_star, std::size_t n,
                                       const MomConfig& mom, std::uint64_t seed, bool want_plugin, bool want_mom) {
  const SampleBatch batch = sample_batch(mrp, n, RngSpec{seed});
  double plugin_error = 0.0;
  double mom_error = 0.0;
  if (want_plugin) plugin_error = linf_distance(plugin_estimate(batch).theta, theta_star);
  if (want_mom) mom_error = linf_distance(mom_value_estimate(batch, mom).theta, theta_star);
  return {plugin_error, mom_error};
}

TrialErrors monte_carlo_trial_errors(const Mrp& mrp, const TrialPlan& plan, bool want_plugin, bool want_mom) {
  require(plan.trials >= 1 && plan.n >= 1, "experiment.bad_plan", "trials and n must be >= 1");
  const ValueVector theta_star = exact_value(mrp);
  TrialErrors out;
  out.plugin.assign(want_plugin ? plan.trials : 0, 0.0);
  out.mom.assign(want_mom ? plan.trials : 0, 0.0);
  parallel_for(plan.trials, plan.threads, [&](std::size_t t) {
    const std::uint64_t seed = derive_trial_seed(plan.base_seed, t, plan.alpha_index, plan.gamma_index);
    const auto [p, m] = trial_errors(mrp, theta_star, plan.n, plan.mom, seed, want_plugin, want_mom);
    if (want_plugin) out.plugin[t] = p;
    if (want_mom) out.mom[t] = m;
  });
  return out;
}

ErrorStats monte_carlo_error(const Mrp& mrp, EstimatorKind estimator, std::size_t n, std::size_t trials,
                             const MomConfig& mom_config, RngSpec rng, std::size_t threads) {
  TrialPlan plan;
  plan.n = n;
  plan.trials = trials;
  plan.mom = mom_config;
  plan.base_seed = rng.base_seed;
  plan.threads = threads;
  const bool plugin = estimator == EstimatorKind::plugin;
  const TrialErrors e = monte_carlo_trial_errors(mrp, plan, plugin, !plugin);
  return summarize(plugin ? e.plugin : e.mom);
}

SlopeFit loglog_slope(std::span<const std::pair<double, double>> points) {
  require(points.size() >= 2, "slope.too_few_points", "a slope fit needs at least two points");
  std::vector<double> lx, ly;
  for (const auto& [x, y] : points) {
    require(x > 0.0 && y > 0.0, "slope.nonpositive", "log-log fit needs positive coordinates");
    lx.push_back(std::log(x));
    ly.push_back(std::log(y));
  }
  const double count = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= count;
  my /= count;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  require(sxx > 0.0, "slope.degenerate_x", "log-log fit needs at least two distinct x values");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    sse += r * r;
  }
  // A constant response is fitted exactly by the zero slope.
  fit.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  return fit;
}

const SlopeRow& ExperimentResult::slope(double alpha, EstimatorKind estimator) const {
  for (const auto& s : slopes) {
    if (s.alpha == alpha && s.estimator == estimator) return s;
  }
  throw Error("experiment.missing_slope", "no slope for alpha = " + std::to_string(alpha));
}

const ExperimentRow& ExperimentResult::row(double alpha, double gamma, EstimatorKind estimator) const {
  for (const auto& r : rows) {
    if (r.alpha == alpha && r.gamma == gamma && r.estimator == estimator) return r;
  }
  throw Error("experiment.missing_row", "no row for alpha = " + std::to_string(alpha));
}

namespace {

using InstanceFactory = std::function<Mrp(double alpha, double gamma)>;

ExperimentResult run_grid(const std::string& name, const ExperimentConfig& config, const InstanceFactory& make) {
  validate(config);
  ExperimentResult result;
  result.name = name;
  for (std::size_t ai = 0; ai < config.alphas.size(); ++ai) {
    const double alpha = config.alphas[ai];
    std::vector<std::pair<double, double>> plugin_points, mom_points;
    for (std::size_t gi = 0; gi < config.gammas.size(); ++gi) {
      const double gamma = config.gammas[gi];
      const Mrp mrp = make(alpha, gamma);
      TrialPlan plan;
      plan.n = config.n_samples;
      plan.trials = config.trials;
      plan.mom = MomConfig{config.mom_buckets};
      plan.base_seed = config.base_seed;
      plan.alpha_index = ai;
      plan.gamma_index = gi;
      plan.threads = config.threads;
      const TrialErrors errors = monte_carlo_trial_errors(mrp, plan);
      const ErrorStats ps = summarize(errors.plugin);
      const ErrorStats ms = summarize(errors.mom);
      result.rows.push_back(
          {alpha, gamma, EstimatorKind::plugin, ps.mean, ps.standard_error, ps.trials, config.n_samples, mrp.dim()});
      result.rows.push_back(
          {alpha, gamma, EstimatorKind::mom, ms.mean, ms.standard_error, ms.trials, config.n_samples, mrp.dim()});
      const double horizon = 1.0 / (1.0 - gamma);
      plugin_points.emplace_back(horizon, ps.mean);
      mom_points.emplace_back(horizon, ms.mean);
    }
    if (config.gammas.size() >= 2) {
      result.slopes.push_back({alpha, EstimatorKind::plugin, loglog_slope(plugin_points)});
      result.slopes.push_back({alpha, EstimatorKind::mom, loglog_slope(mom_points)});
    }
  }
  return result;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ExperimentResult run_fig1(const ExperimentConfig& config) {
  for (double g : config.gammas) {
    require(g >= 0.5 && g < 1.0, "fig1.gamma_out_of_range", "gamma values must lie in [1/2, 1)");
  }
  return run_grid("fig1", config, [](double alpha, double gamma) {
    return basic_mrp(fig1_params(HardFamilyParams{alpha, gamma}));
  });
}

ExperimentResult run_fig2(const ExperimentConfig& config) {
  for (double g : config.gammas) {
    require(g >= 0.5 && g < 1.0, "fig2.gamma_out_of_range", "gamma values must lie in [1/2, 1)");
  }
  const std::size_t n = config.n_samples;
  return run_grid("fig2", config, [n](double alpha, double gamma) { return second_mrp(fig2_params(alpha, gamma, n)); });
}

std::string errors_csv(const ExperimentResult& result) {
  std::string out = "alpha,gamma,estimator,mean_linf_error,stderr,trials,n_samples\n";
  for (const auto& r : result.rows) {
    out += format_double(r.alpha) + "," + format_double(r.gamma) + "," + std::string(to_string(r.estimator)) + "," +
           format_double(r.mean_linf_error) + "," + format_double(r.standard_error) + "," + std::to_string(r.trials) +
           "," + std::to_string(r.n_samples) + "\n";
  }
  return out;
}

std::string slopes_csv(const ExperimentResult& result) {
  std::string out = "alpha,estimator,slope,intercept,r_squared\n";
  for (const auto& s : result.slopes) {
    out += format_double(s.alpha) + "," + std::string(to_string(s.estimator)) + "," + format_double(s.fit.slope) +
           "," + format_double(s.fit.intercept) + "," + format_double(s.fit.r_squared) + "\n";
  }
  return out;
}

nlohmann::json summary_json(const ExperimentResult& result) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : result.rows) {
    rows.push_back({{"alpha", r.alpha},
                    {"gamma", r.gamma},
                    {"estimator", to_string(r.estimator)},
                    {"mean_linf_error", r.mean_linf_error},
                    {"stderr", r.standard_error},
                    {"trials", r.trials},
                    {"n_samples", r.n_samples},
                    {"dim", r.dim}});
  }
  nlohmann::json slopes = nlohmann::json::array();
  for (const auto& s : result.slopes) {
    nlohmann::json entry = {{"alpha", s.alpha},
                            {"estimator", to_string(s.estimator)},
                            {"slope", s.fit.slope},
                            {"intercept", s.fit.intercept},
                            {"r_squared", s.fit.r_squared}};
    if (result.name == "fig1") entry["predicted_slope"] = fig1_predicted_slope(s.alpha);
    slopes.push_back(entry);
  }
  return {{"experiment", result.name}, {"errors", rows}, {"slopes", slopes}};
}

void write_experiment_outputs(const ExperimentResult& result, const std::string& prefix) {
  if (prefix.empty()) return;
  const std::filesystem::path base(prefix);
  if (base.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(base.parent_path(), ec);
    if (ec) throw Error("io.mkdir_failed", "cannot create " + base.parent_path().string(), ErrorKind::io);
  }
  write_text_file(prefix + "_errors.csv", errors_csv(result));
  write_text_file(prefix + "_slopes.csv", slopes_csv(result));
  write_text_file(prefix + "_summary.json", summary_json(result).dump(2) + "\n");
}

double bennett_max_deviation_bound(std::size_t k) {
  const double l = std::log(1.0 + static_cast<double>(k));
  return std::sqrt(12.0) * l / std::log(l);
}

BinomialDeviationResult binomial_deviation_check(std::size_t k, std::size_t n, std::size_t trials, RngSpec rng) {
  require(k >= 1 && n >= 1 && trials >= 2, "binprob.bad_size", "need k, n >= 1 and trials >= 2");
  BinomialDeviationResult r;
  r.k = k;
  r.n = n;
  r.q = 1.0 / (3.0 * static_cast<double>(k) * static_cast<double>(n));
  const double mean = static_cast<double>(n) * r.q;
  std::vector<double> maxima(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    Xoshiro256StarStar gen(derive_trial_seed(rng.base_seed, t));
    double m = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      m = std::max(m, std::fabs(static_cast<double>(binomial(gen, n, r.q)) - mean));
    }
    maxima[t] = m;
  }
  const ErrorStats s = summarize(maxima);
  r.mc_mean_max_dev = s.mean;
  r.mc_standard_error = s.standard_error;
  r.lower_ok = s.mean >= r.lower_bound - 3.0 * s.standard_error;
  r.bennett_applicable = std::log(1.0 + static_cast<double>(k)) >= 5.0;
  if (r.bennett_applicable) {
    r.bennett_bound = bennett_max_deviation_bound(k);
    r.bennett_ok = s.mean <= r.bennett_bound;
  }
  return r;
}

HubErrorStudy hub_error_study(double q, double mu, double gamma, std::size_t copies, std::size_t n,
                              std::size_t trials, RngSpec rng, std::size_t threads) {
  const Mrp mrp = second_mrp(SecondMrpParams{q, mu, gamma, copies});
  const ValueVector theta_star = exact_value(mrp);
  const double scale = static_cast<double>(n) * (1.0 - gamma) / (gamma * mu);
  std::vector<double> z(trials * copies);
  parallel_for(trials, threads, [&](std::size_t t) {
    const SampleBatch batch = sample_batch(mrp, n, RngSpec{derive_trial_seed(rng.base_seed, t)});
    const ValueVector theta_hat = plugin_estimate(batch).theta;
    for (std::size_t b = 0; b < copies; ++b) {
      const std::size_t hub = hub_state(b);
      z[t * copies + b] = scale * (theta_hat[hub] - theta_star[hub]);
    }
  });
  const ErrorStats s = summarize(z);
  HubErrorStudy out;
  out.mean = s.mean;
  out.standard_error = s.standard_error;
  out.samples = z.size();
  double ss = 0.0;
  for (double v : z) ss += (v - s.mean) * (v - s.mean);
  out.variance = z.size() >= 2 ? ss / static_cast<double>(z.size() - 1) : 0.0;
  out.expected_variance = static_cast<double>(n) * q * (1.0 - q);
  return out;
}

SlopeFit sample_size_sweep(const Mrp& mrp, std::span<const std::size_t> sample_sizes, std::size_t trials,
                           RngSpec rng, std::size_t threads) {
  std::vector<std::pair<double, double>> points;
  for (std::size_t i = 0; i < sample_sizes.size(); ++i) {
    TrialPlan plan;
    plan.n = sample_sizes[i];
    plan.trials = trials;
    plan.base_seed = rng.base_seed;
    plan.gamma_index = i;
    plan.threads = threads;
    const TrialErrors e = monte_carlo_trial_errors(mrp, plan, true, false);
    points.emplace_back(static_cast<double>(sample_sizes[i]), summarize(e.plugin).mean);
  }
  return loglog_slope(points);
}

CoverageResult certificate_coverage_study(const Mrp& mrp, std::size_t n, const CertificateConfig& config,
                                          double reward_noise_bound, std::size_t trials, RngSpec rng,
                                          std::size_t instance_index, std::size_t threads) {
  validate(config);
  require(trials >= 1, "coverage.no_trials", "need at least one trial");
  const ValueVector theta_star = exact_value(mrp);
  CoverageResult out;
  out.ratios.assign(trials, 0.0);
  std::vector<char> covered(trials, 0);
  parallel_for(trials, threads, [&](std::size_t t) {
    const SampleBatch batch = sample_batch(mrp, n, RngSpec{derive_trial_seed(rng.base_seed, t, instance_index)});
    const ValueEstimate est = plugin_estimate(batch);
    const double error = linf_distance(est.theta, theta_star);
    const Certificate cert = empirical_certificate(batch, est, reward_noise_bound, config);
    const double unscaled = cert.term_deviation + cert.term_span;
    covered[t] = error <= cert.bound ? 1 : 0;
    if (error == 0.0) {
      out.ratios[t] = 0.0;
    } else {
      out.ratios[t] = unscaled > 0.0 ? error / unscaled : std::numeric_limits<double>::infinity();
    }
  });
  std::size_t hits = 0;
  for (char c : covered) hits += static_cast<std::size_t>(c);
  out.coverage = static_cast<double>(hits) / static_cast<double>(trials);
  return out;
}

std::vector<BenchmarkInstance> certificate_benchmark_suite() {
  std::vector<BenchmarkInstance> suite;
  suite.push_back({"basic_alpha0_gamma0.9", basic_mrp(fig1_params(HardFamilyParams{0.0, 0.9}))});
  suite.push_back({"basic_alpha0.5_gamma0.95", basic_mrp(fig1_params(HardFamilyParams{0.5, 0.95}))});
  suite.push_back({"second_q0.01_x3", second_mrp(SecondMrpParams{0.01, 1.0, 0.9, 3})});
  suite.push_back({"identity_reward_noise",
                   Mrp(Matrix::identity(4), {1.0, 0.5, -0.5, 0.0}, {1.0, 1.0, 1.0, 1.0}, 0.9)});

  // Dense random rows from a fixed stream.
  constexpr std::size_t dim = 6;
  Xoshiro256StarStar gen(0x5EEDBE4C11A2ULL);
  Matrix p(dim, dim);
  Vector r(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      p(i, j) = gen.uniform() + 0.05;
      sum += p(i, j);
    }
    for (std::size_t j = 0; j < dim; ++j) p(i, j) /= sum;
    r[i] = 2.0 * gen.uniform() - 1.0;
  }
  suite.push_back({"dense_random_d6", Mrp(std::move(p), std::move(r), Vector(dim, 0.5), 0.8)});
  return suite;
}

CalibrationResult calibrate_certificate_constant(const std::vector<BenchmarkInstance>& suite, std::size_t n,
                                                 double delta, std::size_t trials_per_instance, RngSpec rng,
                                                 std::size_t threads) {
  require(delta > 0.0 && delta < 1.0, "calibration.bad_delta", "delta must lie in (0,1)");
  require(trials_per_instance >= 1, "calibration.no_trials", "need at least one trial per instance");
  CertificateConfig config;
  config.delta = delta;
  config.c2 = 1.0;
  CalibrationResult out;
  const auto t = static_cast<double>(trials_per_instance);
  const auto rank = std::min(trials_per_instance, static_cast<std::size_t>(std::ceil((t + 1.0) * (1.0 - delta))));
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const auto& inst = suite[i];
    CoverageResult cov = certificate_coverage_study(inst.mrp, n, config, linf_norm(inst.mrp.reward_noise()),
                                                    trials_per_instance, rng, i, threads);
    std::sort(cov.ratios.begin(), cov.ratios.end());
    const double q = cov.ratios[rank - 1];
    out.per_instance.emplace_back(inst.name, q);
    out.c2 = std::max(out.c2, q);
  }
  return out;
}

double suite_coverage(const std::vector<BenchmarkInstance>& suite, std::size_t n, const CertificateConfig& config,
                      std::size_t trials_per_instance, RngSpec rng, std::size_t threads) {
  double covered = 0.0;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const auto& inst = suite[i];
    const CoverageResult cov = certificate_coverage_study(inst.mrp, n, config, linf_norm(inst.mrp.reward_noise()),
                                                          trials_per_instance, rng, i, threads);
    covered += cov.coverage * static_cast<double>(trials_per_instance);
  }
  return covered / static_cast<double>(trials_per_instance * suite.size());
}

}  // namespace mrpeval
