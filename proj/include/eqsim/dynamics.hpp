#pragma once

#include <span>
#include <vector>

#include "eqsim/linalg.hpp"
#include "eqsim/model.hpp"
#include "eqsim/spectral.hpp"

namespace eqsim {

/// Time-average kernel phi(x) = (e^{-ix} - 1)/(-ix), phi(0) = 1; the uniform
/// average of e^{-ixs} over s in [0,1].
Complex time_average_kernel(double x);

/// Unitary evolution in the eigenbasis of a fixed Hamiltonian.
class Propagator {
 public:
  Propagator(const SpectralDecomposition& dec, const QuantumState& state);

  /// Rotates an observable into the eigenbasis once; reuse across times.
  Matrix observable_in_eigenbasis(const Matrix& a) const;

  /// <A>(t) with a_eig = observable_in_eigenbasis(A).
  double expectation(const Matrix& a_eig, double t) const;

  /// |<psi(0)|psi(t)>|^2 (pure states only).
  double survival_probability(double t) const;

  /// Amplitudes/density in the eigenbasis at t = 0.
  const Vector& amplitudes() const { return amplitudes_; }
  const Matrix& density() const { return density_; }
  bool pure() const { return pure_; }
  const RealVector& energies() const { return energies_; }  // per column

 private:
  const SpectralDecomposition* dec_;  // not owned; must outlive the propagator
  bool pure_ = true;
  Vector amplitudes_;  // V^dag psi
  Matrix density_;     // V^dag rho V (mixed only)
  RealVector energies_;
};

/// <A>(t) over a time grid.
std::vector<double> evolve_expectation(const SpectralDecomposition& dec, const QuantumState& state,
                                       const Matrix& a, std::span<const double> times,
                                       int threads = 1);

/// Time-averaged (dephased) state omega = sum_k P_k rho P_k, computational basis.
Matrix dephase(const SpectralDecomposition& dec, const QuantumState& state);

/// Level populations tr(P_k rho).
RealVector level_populations(const SpectralDecomposition& dec, const QuantumState& state);

struct EffectiveDimension {
  double d_eff = 1.0;  // 1 / sum_k tr(P_k rho)^2
  double ipr = 1.0;    // sum_k tr(P_k rho)^2; equals sum_k |c_k|^4 for pure states
};

EffectiveDimension effective_dimension(const SpectralDecomposition& dec, const QuantumState& state);

/// Dephasing decomposition of Delta A(t) = tr(rho(t) A) - tr(omega A)
///   = sum over ordered level pairs (k,l) of v_{kl} e^{-i (E_k - E_l) t},
/// with v_{kl} = tr(P_k rho P_l A), regrouped per distinct gap: z_G = sum of
/// v over pairs whose gap merged into G.
struct FluctuationData {
  std::vector<double> gap_values;   // distinct gaps (catalog order)
  std::vector<Complex> z;           // z_G, aligned with gap_values
  double equilibrium_value = 0.0;   // tr(omega A)
  double initial_deviation = 0.0;   // Delta A(0) = sum_G z_G
  double q_total = 0.0;             // Q = sum |v_{kl}|
  double sum_v_sq = 0.0;            // sum |v_{kl}|^2
  double sigma_g = 0.0;             // std of gaps under weights |v|/Q
  // Ordered-pair gap distribution (exact, unmerged), sorted by gap, with
  // weights |v|/Q; source for pair-gap concentration xi.
  std::vector<double> pair_gaps;
  std::vector<double> pair_weights;
};

FluctuationData fluctuation_data(const SpectralDecomposition& dec, const GapCatalog& catalog,
                                 const QuantumState& state, const Matrix& a);

/// Largest |v|/Q mass in a sliding gap window of the given width (xi).
double pair_gap_concentration(const FluctuationData& fd, double width);

/// sum_G |z_G|^2 = infinite-time average of Delta A(t)^2.
double time_average_infinite(const FluctuationData& fd);

struct FiniteAverageOptions {
  std::int64_t pair_budget = 20'000'000;  // closed form when distinct^2 fits
  int samples = 4096;                     // fallback: stratified midpoint sampling
  int threads = 1;
};

struct FiniteAverageResult {
  double value = 0.0;
  bool sampled = false;
  int samples = 0;
  double error_estimate = 0.0;  // sampling only
};

/// <Delta A(t)^2> averaged over t in [0, T].
FiniteAverageResult time_average_finite(const FluctuationData& fd, double horizon,
                                        const FiniteAverageOptions& opts = {});

/// Delta A at explicit times from the regrouped decomposition.
std::vector<double> fluctuation_trajectory(const FluctuationData& fd,
                                           std::span<const double> times, int threads = 1);

/// Spectral measurement of an observable: distinct eigenvalues and projectors.
struct Measurement {
  std::vector<double> outcomes;    // ascending
  std::vector<Matrix> projectors;  // same basis as the observable
  std::vector<Index> ranks;
  int n_outcomes() const { return static_cast<int>(outcomes.size()); }
};

Measurement measure_observable(const Matrix& a, double tolerance = 1e-9);

/// Distinguishability D_A(rho, sigma) = 1/2 sum_i |tr(Pi_i (rho - sigma))|.
double distinguishability(const Matrix& rho, const Matrix& sigma, const Measurement& meas);

struct SampledAverageOptions {
  int samples = 2048;
  int threads = 1;
};

/// <D_A(rho(t), omega)>_T by stratified midpoint sampling of [0, T].
double sampled_distinguishability_average(const SpectralDecomposition& dec,
                                          const QuantumState& state, const Measurement& meas,
                                          double horizon, const SampledAverageOptions& opts = {});

/// Same average for the survival measurement {|psi_0><psi_0|, complement}.
double sampled_survival_distinguishability_average(const SpectralDecomposition& dec,
                                                   const QuantumState& state, double horizon,
                                                   const SampledAverageOptions& opts = {});

/// Trace out all sites except keep_sites (ascending site indices).
Matrix partial_trace(const Matrix& rho, std::span<const int> keep_sites, int sites);

/// Keep the leading tensor factor of dimension dim_first.
Matrix partial_trace_first(const Matrix& rho, Index dim_first, Index dim_rest);

double trace_distance(const Matrix& a, const Matrix& b);

/// Rotating-frame snapshot of the dephasing cloud: point (G, z_G e^{-iGt}),
/// optionally smoothed to a grid by a Gaussian kernel of width 1/horizon.
/// Kernel weights are normalized per source point, so the total amplitude is
/// preserved exactly: sum of amplitudes == Delta A(t).
struct CloudSnapshot {
  double time = 0.0;
  double horizon = 0.0;  // infinity => raw points, no smoothing
  std::vector<double> grid;     // gap axis
  std::vector<Complex> amplitudes;
  Complex total;                // sum of amplitudes
};

CloudSnapshot cloud_snapshot(const FluctuationData& fd, double horizon, double time);

/// 1 - |sum a_i| / sum |a_i|; 0 when all phases align (or no weight).
double circular_variance(const CloudSnapshot& snapshot);

/// |Delta A(0)| exp(-t^2 / tau^2) on a time grid.
std::vector<double> gaussian_envelope(double initial_deviation, double tau,
                                      std::span<const double> times);

/// Least-squares tau over the initial decay of |Delta A(t)| (up to the first
/// local minimum). Returns 0 when there is no usable decay.
double fit_gaussian_tau(std::span<const double> times, std::span<const double> abs_deviation);

}  // namespace eqsim
