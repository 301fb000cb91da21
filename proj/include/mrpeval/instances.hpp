#pragma once

#include <cstddef>

#include "mrpeval/mrp.hpp"

namespace mrpeval {

/// Two-state chain: state 0 stays with probability p and otherwise moves to
/// the absorbing state 1; rewards are (nu, nu * tau).
struct BasicMrpParams {
  double p = 0.5;
  double nu = 1.0;
  double tau = 0.0;
  double gamma = 0.5;
};

void validate(const BasicMrpParams& params);
Mrp basic_mrp(const BasicMrpParams& params);

struct BasicClosedForms {
  ValueVector theta_star;
  ValueVector sigma_star;
  double span = 0.0;
  double weighted_sigma = 0.0;  // ||(I - gamma P)^{-1} sigma(theta*)||_inf
};

BasicClosedForms basic_closed_forms(const BasicMrpParams& params);

/// Scaling family: p = (4 gamma - 1) / (3 gamma), nu = 1, tau = 1 - (1 - gamma)^alpha.
struct HardFamilyParams {
  double alpha = 0.0;
  double gamma = 0.9;
};

BasicMrpParams fig1_params(const HardFamilyParams& hard);

/// D/2 two-state blocks; block `index` (1-based) uses p2, every other block p1.
struct MasterFamilyParams {
  std::size_t dim = 4;
  double p1 = 0.75;
  double p2 = 0.75;
  double nu = 1.0;
  double tau = 0.0;
  double gamma = 0.5;
  std::size_t index = 1;
};

Mrp master_mrp(const MasterFamilyParams& params);

/// p1 - (1/8) sqrt(p1 (1 - p1) log(D/2) / N), clamped into [1/2, p1].
double default_p2(double p1, std::size_t dim, std::size_t n);

/// ||theta*(p1) - theta*(p2)||_inf = nu gamma (p1 - p2)(1 - tau) / ((1 - gamma p1)(1 - gamma p2)).
double lower_bound_gap(double p1, double p2, double nu, double tau, double gamma);

struct KlBound {
  double kl = 0.0;
  double bound = 0.0;
};

/// KL(Ber(p) || Ber(q)) and (p - q)^2 / (m (1 - m)) with m = max(p, q).
KlBound kl_bernoulli_bound_pair(double p, double q);

/// `copies` three-state blocks. Block b has a hub 3b (reward mu/2) moving to
/// 3b+1 with probability q and to 3b+2 otherwise; 3b+1 is absorbing with
/// reward mu/2 and 3b+2 is absorbing with reward -mu/2.
struct SecondMrpParams {
  double q = 0.5;
  double mu = 1.0;
  double gamma = 0.9;
  std::size_t copies = 1;
};

Mrp second_mrp(const SecondMrpParams& params);

inline constexpr std::size_t hub_state(std::size_t block) noexcept { return 3 * block; }

/// D = 3 floor((1/(1-gamma))^alpha), q = 10 / (N D), mu = 1.
SecondMrpParams fig2_params(double alpha, double gamma, std::size_t n);

}  // namespace mrpeval
