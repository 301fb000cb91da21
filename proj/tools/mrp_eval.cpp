// mrp-eval: command-line front end for the mrpeval library.
//
// Exit codes: 0 success, 1 validation error (bad flags, bad input values,
// failed check), 2 I/O error. Errors are reported on stderr as
// "error: <id>: <message>".

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mrpeval/certificates.hpp"
#include "mrpeval/error.hpp"
#include "mrpeval/estimators.hpp"
#include "mrpeval/experiments.hpp"
#include "mrpeval/instances.hpp"
#include "mrpeval/io.hpp"
#include "mrpeval/kernels.hpp"
#include "mrpeval/mrp.hpp"
#include "mrpeval/sampling.hpp"
#include "mrpeval/self_check.hpp"

using namespace mrpeval;
using nlohmann::json;

namespace {

std::uint64_t env_seed() {
  const char* text = std::getenv("MRP_EVAL_SEED");
  if (text == nullptr || *text == '\0') return 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(text, &end, 10);
  if (*end != '\0') throw Error("cli.bad_env_seed", "MRP_EVAL_SEED is not an unsigned integer");
  return v;
}

void emit(const json& j, const std::string& out) {
  const std::string text = j.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    write_text_file(out, text);
  }
}

json vector_json(std::span<const double> v) { return json(std::vector<double>(v.begin(), v.end())); }

json diagnostics_json(const SolveDiagnostics& d) {
  return {{"residual_linf", d.residual_linf}, {"iterations", d.iterations}, {"method", to_string(d.method)}};
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      require(used == item.size(), "cli.bad_list", "not a number: '" + item + "'");
    } catch (const std::logic_error&) {
      throw Error("cli.bad_list", "not a number: '" + item + "'");
    }
  }
  return out;
}

// Batch input: either an existing CSV or an MRP sampled on the spot.
struct BatchSource {
  std::string batch_path;
  std::string mrp_path;
  std::size_t n = 0;
  std::uint64_t seed = 0;

  void add_options(CLI::App* cmd) {
    cmd->add_option("--batch", batch_path, "sample batch CSV written by `sample`");
    cmd->add_option("--mrp", mrp_path, "MRP JSON to sample from");
    cmd->add_option("--n", n, "rounds to sample with --mrp");
    cmd->add_option("--seed", seed, "base seed (default $MRP_EVAL_SEED or 0)");
  }

  SampleBatch load() const {
    if (!batch_path.empty()) return read_batch_csv(batch_path);
    require(!mrp_path.empty(), "cli.missing_input", "give --batch or --mrp with --n");
    require(n >= 1, "cli.missing_n", "--n must be >= 1 when sampling from --mrp");
    return sample_batch(load_mrp(mrp_path), n, RngSpec{seed});
  }
};

int run(int argc, char** argv) {
  CLI::App app{"Value-function estimation for tabular Markov reward processes"};
  app.require_subcommand(1, 1);
  const std::uint64_t default_seed = env_seed();

  // solve
  std::string solve_mrp, solve_method = "direct", solve_out;
  double solve_tol = 1e-12;
  auto* solve = app.add_subcommand("solve", "exact value function of an MRP");
  solve->add_option("--mrp", solve_mrp, "MRP JSON")->required();
  solve->add_option("--method", solve_method, "direct | value-iteration");
  solve->add_option("--tol", solve_tol, "value-iteration tolerance");
  solve->add_option("--out", solve_out, "output JSON (default stdout)");

  // sample
  std::string sample_mrp, sample_out;
  std::size_t sample_n = 0;
  std::uint64_t sample_seed = default_seed;
  auto* sample = app.add_subcommand("sample", "draw a generative sample batch");
  sample->add_option("--mrp", sample_mrp, "MRP JSON")->required();
  sample->add_option("--n", sample_n, "number of rounds")->required();
  sample->add_option("--seed", sample_seed, "base seed (default $MRP_EVAL_SEED or 0)");
  sample->add_option("--out", sample_out, "batch CSV; a .json sidecar is written next to it")->required();

  // estimate
  BatchSource est_src;
  est_src.seed = default_seed;
  std::string est_method = "plugin", est_out;
  MomConfig est_mom;
  auto* estimate = app.add_subcommand("estimate", "plug-in or median-of-means value estimate");
  est_src.add_options(estimate);
  estimate->add_option("--method", est_method, "plugin | mom");
  estimate->add_option("--k-buckets", est_mom.k_buckets, "median-of-means bucket count");
  estimate->add_option("--fp-tol", est_mom.fp_tolerance, "fixed-point tolerance");
  estimate->add_option("--max-iterations", est_mom.max_iterations, "fixed-point iteration cap");
  estimate->add_option("--out", est_out, "output JSON (default stdout)");

  // certify
  BatchSource cert_src;
  cert_src.seed = default_seed;
  std::string cert_config_path, cert_out;
  std::optional<double> cert_delta, cert_c1, cert_c2, cert_rho;
  bool cert_population = false;
  auto* certify = app.add_subcommand("certify", "error certificate of the plug-in estimate");
  cert_src.add_options(certify);
  certify->add_option("--config", cert_config_path, "certificate constants file (delta, c1, c2, c4)");
  certify->add_option("--delta", cert_delta, "failure probability");
  certify->add_option("--c1", cert_c1, "sample-size gate constant");
  certify->add_option("--c2", cert_c2, "certificate constant");
  certify->add_option("--reward-noise-bound", cert_rho, "reward noise bound (default from --mrp)");
  certify->add_flag("--population", cert_population, "use the true model of --mrp at sample size --n");
  certify->add_option("--out", cert_out, "output JSON (default stdout)");

  // instance
  std::string inst_family, inst_out;
  BasicMrpParams basic;
  HardFamilyParams hard;
  MasterFamilyParams master;
  SecondMrpParams second;
  std::optional<double> inst_gamma, inst_nu, inst_tau, inst_p2;
  std::size_t inst_n = 10'000;
  auto* instance = app.add_subcommand("instance", "generate a named MRP instance");
  instance->add_option("--family", inst_family, "basic | fig1 | master | second | fig2")->required();
  instance->add_option("--gamma", inst_gamma, "discount factor");
  instance->add_option("--p", basic.p, "basic: self-loop probability");
  instance->add_option("--nu", inst_nu, "basic, master: reward scale");
  instance->add_option("--tau", inst_tau, "basic, master: absorbing reward ratio");
  instance->add_option("--alpha", hard.alpha, "fig1, fig2: exponent");
  instance->add_option("--dim", master.dim, "master: even dimension");
  instance->add_option("--p1", master.p1, "master: common self-loop probability");
  instance->add_option("--p2", inst_p2, "master: perturbed self-loop probability (default from --n)");
  instance->add_option("--index", master.index, "master: perturbed block, 1-based");
  instance->add_option("--q", second.q, "second: escape probability");
  instance->add_option("--mu", second.mu, "second: reward scale");
  instance->add_option("--copies", second.copies, "second: number of blocks");
  instance->add_option("--n", inst_n, "master, fig2: sample size the instance is tuned for");
  instance->add_option("--out", inst_out, "output JSON (default stdout)");

  // experiment
  std::string exp_which, exp_config, exp_output, exp_alphas, exp_gammas;
  std::optional<std::size_t> exp_n, exp_trials, exp_buckets, exp_threads;
  std::optional<std::uint64_t> exp_seed;
  std::size_t bin_k = 10, bin_n = 100;
  double cal_delta = 0.05;
  auto* experiment = app.add_subcommand("experiment", "Monte Carlo studies");
  experiment->add_option("--which", exp_which, "fig1 | fig2 | binprob | calibrate")->required();
  experiment->add_option("--config", exp_config, "key = value config file");
  experiment->add_option("--alphas", exp_alphas, "comma-separated alpha grid");
  experiment->add_option("--gammas", exp_gammas, "comma-separated gamma grid");
  experiment->add_option("--n-samples", exp_n, "samples per trial");
  experiment->add_option("--trials", exp_trials, "trials per cell");
  experiment->add_option("--mom-buckets", exp_buckets, "median-of-means buckets");
  experiment->add_option("--seed", exp_seed, "base seed");
  experiment->add_option("--threads", exp_threads, "worker threads");
  experiment->add_option("--output", exp_output, "output prefix (fig1, fig2) or constants file (calibrate)");
  experiment->add_option("--k", bin_k, "binprob: number of binomials");
  experiment->add_option("--n", bin_n, "binprob: binomial size");
  experiment->add_option("--delta", cal_delta, "calibrate: target miscoverage");

  // check
  std::size_t check_scale = 1;
  std::uint64_t check_seed = default_seed;
  auto* check = app.add_subcommand("check", "run the built-in property and oracle checks");
  check->add_option("--scale", check_scale, "case-count multiplier");
  check->add_option("--seed", check_seed, "seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: cli." << e.get_name() << ": " << e.what() << "\n";
    return 1;
  }

  if (*solve) {
    const Mrp mrp = load_mrp(solve_mrp);
    Solution s;
    if (solve_method == "direct") {
      s = exact_value_with_diagnostics(mrp);
    } else if (solve_method == "value-iteration") {
      s = value_iteration(mrp, Vector(mrp.dim(), 0.0), solve_tol);
    } else {
      throw Error("cli.bad_method", "unknown solve method '" + solve_method + "'");
    }
    emit({{"theta", vector_json(s.theta)}, {"diagnostics", diagnostics_json(s.diagnostics)}}, solve_out);
  } else if (*sample) {
    const SampleBatch batch = sample_batch(load_mrp(sample_mrp), sample_n, RngSpec{sample_seed});
    write_batch_csv(sample_out, batch);
  } else if (*estimate) {
    const SampleBatch batch = est_src.load();
    const EstimatorKind kind = estimator_from_string(est_method);
    const ValueEstimate e = kind == EstimatorKind::plugin ? plugin_estimate(batch) : mom_value_estimate(batch, est_mom);
    json j = {{"method", to_string(e.method)},
              {"theta", vector_json(e.theta)},
              {"diagnostics", diagnostics_json(e.diagnostics)},
              {"dim", batch.dim()},
              {"n", batch.n()}};
    if (kind == EstimatorKind::mom) j["k_buckets"] = est_mom.k_buckets;
    emit(j, est_out);
  } else if (*certify) {
    CertificateConfig cfg;
    if (!cert_config_path.empty()) cfg = load_certificate_config(cert_config_path, cfg);
    if (cert_delta) cfg.delta = *cert_delta;
    if (cert_c1) cfg.c1 = *cert_c1;
    if (cert_c2) cfg.c2 = *cert_c2;
    validate(cfg);
    Certificate cert;
    if (cert_population) {
      require(!cert_src.mrp_path.empty() && cert_src.n >= 1, "cli.missing_input", "--population needs --mrp and --n");
      cert = population_certificate(load_mrp(cert_src.mrp_path), cert_src.n, cfg);
    } else {
      double rho = 0.0;
      if (cert_rho) {
        rho = *cert_rho;
      } else {
        require(!cert_src.mrp_path.empty(), "cli.missing_reward_noise_bound",
                "--reward-noise-bound is required unless --mrp is given");
        rho = linf_norm(load_mrp(cert_src.mrp_path).reward_noise());
      }
      const SampleBatch batch = cert_src.load();
      cert = empirical_certificate(batch, plugin_estimate(batch), rho, cfg);
    }
    emit(certificate_to_json(cert, cfg), cert_out);
  } else if (*instance) {
    Mrp mrp = [&] {
      if (inst_family == "basic") {
        if (inst_gamma) basic.gamma = *inst_gamma;
        if (inst_nu) basic.nu = *inst_nu;
        if (inst_tau) basic.tau = *inst_tau;
        return basic_mrp(basic);
      }
      if (inst_family == "fig1") {
        if (inst_gamma) hard.gamma = *inst_gamma;
        return basic_mrp(fig1_params(hard));
      }
      if (inst_family == "master") {
        if (inst_gamma) master.gamma = *inst_gamma;
        if (inst_nu) master.nu = *inst_nu;
        if (inst_tau) master.tau = *inst_tau;
        master.p2 = inst_p2 ? *inst_p2 : default_p2(master.p1, master.dim, inst_n);
        return master_mrp(master);
      }
      if (inst_family == "second") {
        if (inst_gamma) second.gamma = *inst_gamma;
        return second_mrp(second);
      }
      if (inst_family == "fig2") {
        return second_mrp(fig2_params(hard.alpha, inst_gamma.value_or(0.9), inst_n));
      }
      throw Error("cli.bad_family", "unknown family '" + inst_family + "'");
    }();
    emit(mrp_to_json(mrp), inst_out);
  } else if (*experiment) {
    if (exp_which == "fig1" || exp_which == "fig2") {
      ExperimentConfig cfg = exp_which == "fig1" ? default_fig1_config() : default_fig2_config();
      cfg.base_seed = default_seed;
      if (!exp_config.empty()) cfg = load_experiment_config(exp_config, cfg);
      if (!exp_alphas.empty()) cfg.alphas = parse_doubles(exp_alphas);
      if (!exp_gammas.empty()) cfg.gammas = parse_doubles(exp_gammas);
      if (exp_n) cfg.n_samples = *exp_n;
      if (exp_trials) cfg.trials = *exp_trials;
      if (exp_buckets) cfg.mom_buckets = *exp_buckets;
      if (exp_seed) cfg.base_seed = *exp_seed;
      if (exp_threads) cfg.threads = *exp_threads;
      if (!exp_output.empty()) cfg.output_path = exp_output;
      const ExperimentResult result = exp_which == "fig1" ? run_fig1(cfg) : run_fig2(cfg);
      write_experiment_outputs(result, cfg.output_path);
      emit(summary_json(result), "");
    } else if (exp_which == "binprob") {
      const BinomialDeviationResult r =
          binomial_deviation_check(bin_k, bin_n, exp_trials.value_or(100'000), RngSpec{exp_seed.value_or(default_seed)});
      json j = {{"k", r.k},
                {"n", r.n},
                {"q", r.q},
                {"mc_mean_max_dev", r.mc_mean_max_dev},
                {"mc_stderr", r.mc_standard_error},
                {"lower_bound", r.lower_bound},
                {"lower_ok", r.lower_ok},
                {"bennett_applicable", r.bennett_applicable}};
      if (r.bennett_applicable) {
        j["bennett_bound"] = r.bennett_bound;
        j["bennett_ok"] = r.bennett_ok;
      }
      emit(j, "");
    } else if (exp_which == "calibrate") {
      const auto suite = certificate_benchmark_suite();
      const std::size_t n = exp_n.value_or(1000);
      const std::size_t trials = exp_trials.value_or(400);
      const CalibrationResult cal = calibrate_certificate_constant(
          suite, n, cal_delta, trials, RngSpec{exp_seed.value_or(default_seed)}, exp_threads.value_or(1));
      json per = json::object();
      for (const auto& [name, q] : cal.per_instance) per[name] = q;
      emit({{"c2", cal.c2}, {"delta", cal_delta}, {"n", n}, {"trials_per_instance", trials}, {"per_instance", per}},
           "");
      if (!exp_output.empty()) {
        CertificateConfig cfg;
        cfg.delta = cal_delta;
        cfg.c2 = cal.c2;
        write_text_file(exp_output, certificate_config_text(cfg));
      }
    } else {
      throw Error("cli.bad_experiment", "unknown experiment '" + exp_which + "'");
    }
  } else if (*check) {
    bool ok = true;
    std::cout << "isa " << kernels::isa_name(kernels::active_isa()) << "\n";
    for (const CheckResult& r : run_self_checks(check_scale, check_seed)) {
      std::cout << (r.passed() ? "PASS " : "FAIL ") << r.name << " cases=" << r.cases
                << " violations=" << r.violations << "\n";
      ok = ok && r.passed();
    }
    if (!ok) throw Error("check.failed", "one or more checks failed");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    std::cerr << "error: " << e.id() << ": " << e.what() << "\n";
    return e.kind() == ErrorKind::io ? 2 : 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: json.invalid: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 1;
  }
}
