#include "eqsim/bounds.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace eqsim {

namespace {

void check_finite(const char* name, double x) {
  if (std::isnan(x)) {
    throw std::invalid_argument(std::string("bound input '") + name + "' is NaN");
  }
}

void check_positive(const char* name, double x) {
  check_finite(name, x);
  if (x <= 0.0) {
    throw std::invalid_argument(std::string("bound input '") + name + "' must be positive");
  }
}

constexpr double pi = std::numbers::pi;

}  // namespace

BoundReport compare_bound(std::string name, double lhs, double rhs,
                          std::map<std::string, double> inputs) {
  if (std::isnan(lhs) || std::isnan(rhs)) {
    throw std::invalid_argument("bound comparison '" + name + "' received NaN");
  }
  for (const auto& [key, value] : inputs) {
    if (std::isnan(value)) {
      throw std::invalid_argument("bound comparison '" + name + "' has NaN input '" + key + "'");
    }
  }
  BoundReport report;
  report.bound_name = std::move(name);
  report.lhs_measured = lhs;
  report.rhs_bound = rhs;
  report.inputs = std::move(inputs);
  report.satisfied = lhs <= rhs * (1.0 + 1e-9);
  report.slack = rhs - lhs;
  return report;
}

InfiniteFluctuationBound bound_infinite_fluctuation(double g, double sum_v_sq, double norm_a,
                                                    double d_eff) {
  check_positive("g", g);
  check_finite("sum_v_sq", sum_v_sq);
  check_finite("norm_a", norm_a);
  check_positive("d_eff", d_eff);
  InfiniteFluctuationBound out;
  out.via_sum_v_sq = g * sum_v_sq;
  out.via_d_eff = g * norm_a * norm_a / d_eff;
  return out;
}

double bound_infinite_distinguishability(double g, double n_outcomes, double d_eff) {
  check_positive("g", g);
  check_positive("n_outcomes", n_outcomes);
  check_positive("d_eff", d_eff);
  return 0.5 * std::sqrt(g * (n_outcomes - 1.0) / d_eff);
}

double bound_finite_time_log(double g, double norm_a, double d_eff, double levels, double eps_min,
                             double horizon) {
  check_positive("g", g);
  check_finite("norm_a", norm_a);
  check_positive("d_eff", d_eff);
  check_positive("levels", levels);
  check_positive("eps_min", eps_min);
  check_positive("horizon", horizon);
  double base = g * norm_a * norm_a / d_eff;
  return base * (1.0 + 8.0 * std::log2(levels) / (eps_min * horizon));
}

double bound_finite_time_flat(double g, double norm_a, double d_eff, double eps_min,
                              double horizon) {
  check_positive("g", g);
  check_finite("norm_a", norm_a);
  check_positive("d_eff", d_eff);
  check_positive("eps_min", eps_min);
  check_positive("horizon", horizon);
  double base = g * norm_a * norm_a / d_eff;
  double correction = std::isinf(horizon) ? 0.0 : 1.0 / (eps_min * horizon);
  return base * (5.0 * pi / 2.0) * (1.5 + correction);
}

double bound_finite_distinguishability(double g, double n_outcomes, double d_eff, double eps_min,
                                       double horizon) {
  check_positive("g", g);
  check_positive("n_outcomes", n_outcomes);
  check_positive("d_eff", d_eff);
  check_positive("eps_min", eps_min);
  check_positive("horizon", horizon);
  double correction = std::isinf(horizon) ? 0.0 : 1.0 / (eps_min * horizon);
  double inner = g * (n_outcomes - 1.0) / d_eff * (5.0 * pi / 2.0) * (1.5 + correction);
  return 0.5 * std::sqrt(inner);
}

double bound_small_rank(double rank, double eta, double c) {
  check_positive("rank", rank);
  check_finite("eta", eta);
  check_positive("c", c);
  if (eta < 0.0) throw std::invalid_argument("bound input 'eta' must be nonnegative");
  return c * std::sqrt(rank * eta);
}

double sigma_g_commutator_estimate(const Matrix& rho, const Matrix& h, const Matrix& a,
                                   double q_total, double norm_a) {
  check_positive("q_total", q_total);
  check_positive("norm_a", norm_a);
  Matrix inner = rho * h - h * rho;
  Matrix outer = inner * h - h * inner;
  Complex trace = (outer.cwiseProduct(a.transpose())).sum();
  return std::sqrt(std::abs(trace) / (q_total * norm_a));
}

GoldsteinBound bound_goldstein(double beta, double horizon, double dim, double dim_neq) {
  check_positive("beta", beta);
  check_positive("horizon", horizon);
  check_positive("dim", dim);
  check_positive("dim_neq", dim_neq);
  GoldsteinBound out;
  out.rhs = 2.0 * pi * beta / horizon;
  out.t_max = 2.0 * pi * beta *
              std::min(std::pow(dim / dim_neq, 0.25), std::pow(dim, 1.0 / 6.0));
  out.within_validity = horizon <= out.t_max;
  return out;
}

BrandaoQuantities brandao_quantities(std::span<const double> energies,
                                     std::span<const std::int64_t> multiplicities, double t) {
  if (energies.size() != multiplicities.size() || energies.empty()) {
    throw std::invalid_argument("energies and multiplicities must align and be nonempty");
  }
  BrandaoQuantities q;
  for (std::size_t k = 0; k < energies.size(); ++k) {
    double dk = static_cast<double>(multiplicities[k]);
    q.chi += dk * std::polar(1.0, 2.0 * energies[k] * t);
    q.zeta += dk * std::polar(1.0, energies[k] * t);
    q.gamma += dk * dk;
    q.dim += dk;
  }
  return q;
}

BrandaoBound bound_brandao(const BrandaoQuantities& q, double dim_system, double dim_bath) {
  check_positive("dim_system", dim_system);
  check_positive("dim_bath", dim_bath);
  check_positive("dim", q.dim);
  double d2 = q.dim * q.dim;
  double term1 = std::norm(q.chi) / (dim_system * d2);
  double inner = std::norm(q.zeta) / d2 - q.gamma / d2;
  BrandaoBound out;
  out.core = term1 + inner * inner;
  out.remainder = 1.0 / dim_bath;
  return out;
}

double reimann_f(std::span<const double> energies, double t) {
  if (energies.size() < 2) throw std::invalid_argument("F(t) needs at least two energies");
  double d = static_cast<double>(energies.size());
  Complex sum = 0.0;
  for (double e : energies) sum += std::polar(1.0, e * t);
  return d / (d - 1.0) * (std::norm(sum / d) - 1.0 / d);
}

double reimann_prediction(double f, double equilibrium_value, double initial_value) {
  check_finite("f", f);
  check_finite("equilibrium_value", equilibrium_value);
  check_finite("initial_value", initial_value);
  return equilibrium_value + f * (initial_value - equilibrium_value);
}

double reimann_lorentzian(double beta, double t) {
  check_positive("beta", beta);
  double x = t / beta;
  return 1.0 / (1.0 + x * x);
}

double bound_random_observable(double n_outcomes, double dim) {
  check_positive("n_outcomes", n_outcomes);
  check_positive("dim", dim);
  return 0.5 * std::sqrt(n_outcomes / (dim + 1.0));
}

double bound_eigen_observable(double n_outcomes, double dim) {
  check_positive("n_outcomes", n_outcomes);
  if (dim <= 1.0) throw std::invalid_argument("bound input 'dim' must exceed 1");
  return 0.5 * std::sqrt(n_outcomes / (dim - 1.0));
}

double bound_eigen_observable_combined(double c, double a, double delta, double sigma_e,
                                       double horizon, double n_outcomes, double dim) {
  check_positive("c", c);
  check_finite("a", a);
  check_finite("delta", delta);
  check_positive("sigma_e", sigma_e);
  check_positive("horizon", horizon);
  double eta = a / (sigma_e * horizon) + delta;
  return c * std::sqrt(std::max(0.0, eta)) + bound_eigen_observable(n_outcomes, dim);
}

double bound_random_state(double norm_a, double dim, double purity, double xi) {
  check_finite("norm_a", norm_a);
  check_positive("dim", dim);
  check_positive("purity", purity);
  check_finite("xi", xi);
  if (xi < 0.0) throw std::invalid_argument("bound input 'xi' must be nonnegative");
  return 4.0 * pi * norm_a * norm_a * dim * purity * xi;
}

double bound_mixed_bath(double norm_a, double dim_system, double a, double delta, double sigma_g,
                        double horizon) {
  check_finite("norm_a", norm_a);
  check_positive("dim_system", dim_system);
  check_finite("a", a);
  check_finite("delta", delta);
  check_positive("sigma_g", sigma_g);
  check_positive("horizon", horizon);
  double xi = a / (sigma_g * horizon) + delta;
  return 4.0 * pi * norm_a * norm_a * dim_system * std::max(0.0, xi);
}

double bound_microcanonical_bath(double norm_a, double dim_system, double beta, double norm_hs,
                                 double norm_hi, double k, double a, double delta, double sigma_g,
                                 double horizon) {
  check_finite("norm_a", norm_a);
  check_positive("dim_system", dim_system);
  check_positive("beta", beta);
  check_finite("norm_hs", norm_hs);
  check_finite("norm_hi", norm_hi);
  check_positive("k", k);
  check_finite("a", a);
  check_finite("delta", delta);
  check_positive("sigma_g", sigma_g);
  check_positive("horizon", horizon);
  double xi = std::max(0.0, a / (sigma_g * horizon) + delta);
  // norm_hi = 0 with k = inf would produce inf * 0
  double interaction = norm_hi == 0.0 ? 0.0 : (1.0 + std::sqrt(dim_system)) * k * beta * norm_hi;
  double exponent = beta * norm_hs + interaction;
  double smooth = pi * dim_system * std::exp(exponent) * xi;
  double tail = std::isinf(k) ? 0.0 : 18.0 / (k * k);
  return 4.0 * norm_a * norm_a * (smooth + tail);
}

MicrocanonicalOptimum optimize_microcanonical_k(double norm_a, double dim_system, double beta,
                                                double norm_hs, double norm_hi, double a,
                                                double delta, double sigma_g, double horizon) {
  MicrocanonicalOptimum out;
  if (norm_hi == 0.0) {
    // The smooth term no longer depends on K; send the 18/K^2 tail to zero.
    out.k = std::numeric_limits<double>::infinity();
    out.rhs = bound_microcanonical_bath(norm_a, dim_system, beta, norm_hs, norm_hi,
                                        out.k, a, delta, sigma_g, horizon);
    return out;
  }
  auto value = [&](double k) {
    return bound_microcanonical_bath(norm_a, dim_system, beta, norm_hs, norm_hi, k, a, delta,
                                     sigma_g, horizon);
  };
  // Bracket the minimum of the convex objective, then golden-section.
  double lo = 1e-6;
  double hi = 1.0;
  while (value(hi * 2.0) < value(hi) && hi < 1e12) hi *= 2.0;
  hi *= 2.0;
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double f1 = value(x1);
  double f2 = value(x2);
  for (int it = 0; it < 200 && (hi - lo) > 1e-10 * std::max(1.0, hi); ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = value(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = value(x2);
    }
  }
  out.k = 0.5 * (lo + hi);
  out.rhs = value(out.k);
  return out;
}

}  // namespace eqsim
