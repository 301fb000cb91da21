#include "mrpeval/instances.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mrpeval/error.hpp"

namespace mrpeval {

void validate(const BasicMrpParams& params) {
  require(params.p >= 0.0 && params.p <= 1.0, "basic.bad_p", "p must lie in [0,1]");
  require(params.nu > 0.0, "basic.bad_nu", "nu must be positive");
  require(params.tau >= 0.0 && params.tau <= 1.0, "basic.bad_tau", "tau must lie in [0,1]");
  require(params.gamma >= 0.0 && params.gamma < 1.0, "basic.bad_gamma", "gamma must lie in [0,1)");
}

Mrp basic_mrp(const BasicMrpParams& params) {
  validate(params);
  Matrix p(2, 2);
  p(0, 0) = params.p;
  p(0, 1) = 1.0 - params.p;
  p(1, 1) = 1.0;
  return Mrp(std::move(p), {params.nu, params.nu * params.tau}, {0.0, 0.0}, params.gamma);
}

BasicClosedForms basic_closed_forms(const BasicMrpParams& params) {
  validate(params);
  const double g = params.gamma, p = params.p, nu = params.nu, tau = params.tau;
  const double stay = 1.0 - g * p;
  const double spread = std::sqrt(p * (1.0 - p));
  BasicClosedForms out;
  out.theta_star = {nu * (1.0 - g + g * tau * (1.0 - p)) / (stay * (1.0 - g)), nu * tau / (1.0 - g)};
  out.sigma_star = {nu * (1.0 - tau) * spread / stay, 0.0};
  out.span = nu * (1.0 - tau) / stay;
  out.weighted_sigma = nu * (1.0 - tau) * spread / (stay * stay);
  return out;
}

BasicMrpParams fig1_params(const HardFamilyParams& hard) {
  require(hard.gamma >= 0.5 && hard.gamma < 1.0, "fig1.gamma_out_of_range", "gamma must lie in [1/2, 1)");
  require(hard.alpha >= 0.0 && hard.alpha <= 1.0, "fig1.alpha_out_of_range", "alpha must lie in [0,1]");
  const double g = hard.gamma;
  return {(4.0 * g - 1.0) / (3.0 * g), 1.0, 1.0 - std::pow(1.0 - g, hard.alpha), g};
}

Mrp master_mrp(const MasterFamilyParams& params) {
  require(params.dim >= 2 && params.dim % 2 == 0, "master.odd_dim", "master MRPs need an even dimension");
  require(params.p2 >= 0.5 && params.p2 <= params.p1 && params.p1 < 1.0, "master.bad_probabilities",
          "need 1/2 <= p2 <= p1 < 1");
  require(params.index >= 1 && params.index <= params.dim / 2, "master.bad_index", "index must lie in [1, D/2]");
  const std::size_t blocks = params.dim / 2;
  Matrix p(params.dim, params.dim);
  Vector r(params.dim);
  for (std::size_t b = 0; b < blocks; ++b) {
    const BasicMrpParams block{b + 1 == params.index ? params.p2 : params.p1, params.nu, params.tau, params.gamma};
    validate(block);
    const std::size_t s = 2 * b;
    p(s, s) = block.p;
    p(s, s + 1) = 1.0 - block.p;
    p(s + 1, s + 1) = 1.0;
    r[s] = block.nu;
    r[s + 1] = block.nu * block.tau;
  }
  return Mrp(std::move(p), std::move(r), Vector(params.dim, 0.0), params.gamma);
}

double default_p2(double p1, std::size_t dim, std::size_t n) {
  require(n >= 1 && dim >= 2, "master.bad_size", "need n >= 1 and dim >= 2");
  const double step = 0.125 * std::sqrt(p1 * (1.0 - p1) * std::log(static_cast<double>(dim) / 2.0) /
                                        static_cast<double>(n));
  return std::clamp(p1 - step, std::min(0.5, p1), p1);
}

double lower_bound_gap(double p1, double p2, double nu, double tau, double gamma) {
  require(0.0 <= p2 && p2 <= p1 && p1 <= 1.0, "gap.bad_order", "need 0 <= p2 <= p1 <= 1");
  return nu * gamma * (p1 - p2) * (1.0 - tau) / ((1.0 - gamma * p1) * (1.0 - gamma * p2));
}

KlBound kl_bernoulli_bound_pair(double p, double q) {
  require(p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0, "kl.endpoint", "p and q must lie in (0,1)");
  const double m = std::max(p, q);
  return {p * std::log(p / q) + (1.0 - p) * std::log((1.0 - p) / (1.0 - q)), (p - q) * (p - q) / (m * (1.0 - m))};
}

Mrp second_mrp(const SecondMrpParams& params) {
  require(params.q > 0.0 && params.q < 1.0, "second.bad_q", "q must lie in (0,1)");
  require(params.mu > 0.0, "second.bad_mu", "mu must be positive");
  require(params.copies >= 1, "second.no_copies", "need at least one block");
  const std::size_t dim = 3 * params.copies;
  Matrix p(dim, dim);
  Vector r(dim);
  for (std::size_t b = 0; b < params.copies; ++b) {
    const std::size_t hub = 3 * b, up = hub + 1, down = hub + 2;
    p(hub, up) = params.q;
    p(hub, down) = 1.0 - params.q;
    p(up, up) = 1.0;
    p(down, down) = 1.0;
    r[hub] = params.mu / 2.0;
    r[up] = params.mu / 2.0;
    r[down] = -params.mu / 2.0;
  }
  return Mrp(std::move(p), std::move(r), Vector(dim, 0.0), params.gamma);
}

SecondMrpParams fig2_params(double alpha, double gamma, std::size_t n) {
  require(gamma >= 0.5 && gamma < 1.0, "fig2.gamma_out_of_range", "gamma must lie in [1/2, 1)");
  require(alpha > 0.0 && alpha <= 1.0, "fig2.alpha_out_of_range", "alpha must lie in (0,1]");
  require(n >= 1, "fig2.zero_samples", "n must be >= 1");
  // 1/(1-gamma) is inexact in binary (1/(1-0.99) = 99.999...), so absorb
  // rounding before the floor.
  const double horizon = std::pow(1.0 / (1.0 - gamma), alpha);
  const auto copies = static_cast<std::size_t>(std::floor(horizon * (1.0 + 1e-12)));
  SecondMrpParams out;
  out.copies = std::max<std::size_t>(copies, 1);
  out.q = 10.0 / (static_cast<double>(n) * static_cast<double>(3 * out.copies));
  out.mu = 1.0;
  out.gamma = gamma;
  return out;
}

}  // namespace mrpeval
