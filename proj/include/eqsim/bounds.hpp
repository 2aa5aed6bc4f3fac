#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "eqsim/linalg.hpp"

namespace eqsim {

/// Outcome of checking one rigorous bound against a measured quantity.
struct BoundReport {
  std::string bound_name;
  double lhs_measured = 0.0;
  double rhs_bound = 0.0;
  std::map<std::string, double> inputs;
  bool satisfied = false;
  double slack = 0.0;  // rhs - lhs
};

/// satisfied <=> lhs <= rhs * (1 + 1e-9). Throws on NaN anywhere.
BoundReport compare_bound(std::string name, double lhs, double rhs,
                          std::map<std::string, double> inputs);

// ---- infinite-time averages ----------------------------------------------

struct InfiniteFluctuationBound {
  double via_sum_v_sq = 0.0;  // g * sum |v|^2
  double via_d_eff = 0.0;     // g * |A|^2 / d_eff
};

InfiniteFluctuationBound bound_infinite_fluctuation(double g, double sum_v_sq, double norm_a,
                                                    double d_eff);

/// 1/2 sqrt(g (n_outcomes - 1) / d_eff).
double bound_infinite_distinguishability(double g, double n_outcomes, double d_eff);

// ---- finite-time averages --------------------------------------------------

/// (g |A|^2 / d_eff) (1 + 8 log2(d_E) / (eps_min T)).
double bound_finite_time_log(double g, double norm_a, double d_eff, double levels, double eps_min,
                             double horizon);

/// (g |A|^2 / d_eff) (5 pi / 2) (3/2 + 1/(eps_min T)); horizon = infinity
/// gives the 15 pi / 4 limit.
double bound_finite_time_flat(double g, double norm_a, double d_eff, double eps_min,
                              double horizon);

/// 1/2 sqrt(g (n_outcomes - 1) / d_eff * (5 pi / 2)(3/2 + 1/(eps_min T))).
double bound_finite_distinguishability(double g, double n_outcomes, double d_eff, double eps_min,
                                       double horizon);

/// c sqrt(K eta), K = rank of the measured projector, eta = energy-level
/// concentration at window width 1/T; c = 7.
double bound_small_rank(double rank, double eta, double c = 7.0);

/// Lower estimate sqrt(|tr([[rho, H], H] A)| / (Q |A|)) for the gap spread
/// sigma_G of the dephasing weights (double-commutator reading).
double sigma_g_commutator_estimate(const Matrix& rho, const Matrix& h, const Matrix& a,
                                   double q_total, double norm_a);

// ---- bath-averaged / typicality forms --------------------------------------

struct GoldsteinBound {
  double rhs = 0.0;    // 2 pi beta / horizon
  double t_max = 0.0;  // 2 pi beta min((d/d_neq)^(1/4), d^(1/6))
  bool within_validity = false;  // horizon <= t_max
};

GoldsteinBound bound_goldstein(double beta, double horizon, double dim, double dim_neq);

struct BrandaoQuantities {
  Complex chi;    // sum_k d_k e^{2 i E_k t}
  Complex zeta;   // sum_k d_k e^{i E_k t}
  double gamma = 0.0;  // sum_k d_k^2
  double dim = 0.0;    // sum_k d_k
};

BrandaoQuantities brandao_quantities(std::span<const double> energies,
                                     std::span<const std::int64_t> multiplicities, double t);

struct BrandaoBound {
  double core = 0.0;       // |chi|^2/(d_S d^2) + (|zeta|^2/d^2 - gamma/d^2)^2
  double remainder = 0.0;  // 1/d_B (unit-constant reading of O(1/d_B))
  double total() const { return core + remainder; }
};

BrandaoBound bound_brandao(const BrandaoQuantities& q, double dim_system, double dim_bath);

/// F(t) = d/(d-1) ( |sum_j e^{i E_j t} / d|^2 - 1/d ); energies listed per
/// state (multiplicity expanded). F(0) = 1.
double reimann_f(std::span<const double> energies, double t);

/// tr(rho_av A) + F(t) (tr(rho(0) A) - tr(rho_av A)).
double reimann_prediction(double f, double equilibrium_value, double initial_value);

/// 1 / (1 + (t/beta)^2): F(t) for an exponential density of states e^{beta E}.
double reimann_lorentzian(double beta, double t);

/// 1/2 sqrt(n_outcomes / (d + 1)).
double bound_random_observable(double n_outcomes, double dim);

/// 1/2 sqrt(n_outcomes / (d - 1)); add the measured survival distinguishability
/// of the guaranteed eigenvector outcome separately.
double bound_eigen_observable(double n_outcomes, double dim);

/// c sqrt(a/(sigma_E T) + delta) + 1/2 sqrt(n_outcomes / (d - 1)).
double bound_eigen_observable_combined(double c, double a, double delta, double sigma_e,
                                       double horizon, double n_outcomes, double dim);

/// 4 pi |A|^2 d purity(rho) xi, xi = pair-gap concentration at width 1/T.
double bound_random_state(double norm_a, double dim, double purity, double xi);

/// 4 pi |A|^2 d_S (a/(sigma_G T) + delta) for rho_S (x) 1/d_B baths.
double bound_mixed_bath(double norm_a, double dim_system, double a, double delta, double sigma_g,
                        double horizon);

/// 4 |A|^2 ( pi d_S e^{beta |H_S| + (1 + sqrt(d_S)) K beta |H_I|}
///           (a/(sigma_G T) + delta) + 18/K^2 ) for microcanonical baths.
double bound_microcanonical_bath(double norm_a, double dim_system, double beta, double norm_hs,
                                 double norm_hi, double k, double a, double delta, double sigma_g,
                                 double horizon);

struct MicrocanonicalOptimum {
  double k = 0.0;     // infinity when |H_I| = 0
  double rhs = 0.0;
};

/// Golden-section minimum of bound_microcanonical_bath over K > 0.
MicrocanonicalOptimum optimize_microcanonical_k(double norm_a, double dim_system, double beta,
                                                double norm_hs, double norm_hi, double a,
                                                double delta, double sigma_g, double horizon);

}  // namespace eqsim
