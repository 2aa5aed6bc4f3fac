#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "eqsim/linalg.hpp"
#include "eqsim/model.hpp"

namespace eqsim {

/// Exact eigendecomposition with degenerate eigenvalues merged into levels.
struct SpectralDecomposition {
  RealVector distinct_energies;      // strictly increasing, one per level
  std::vector<Index> multiplicities; // per level
  std::vector<Index> offsets;        // level k owns eigenbasis columns [offsets[k], offsets[k+1])
  Matrix eigenbasis;                 // unitary, columns ordered by energy
  double degeneracy_tolerance = 0.0; // relative tolerance used for merging
  double norm = 0.0;                 // spectral norm of H

  Index dimension() const { return eigenbasis.rows(); }
  Index levels() const { return distinct_energies.size(); }
  /// Level energy repeated per eigenbasis column.
  RealVector column_energies() const;
  /// sum_k E_k P_k, for consistency checks.
  Matrix reconstruct() const;
};

SpectralDecomposition diagonalize(const Matrix& hamiltonian, double degeneracy_tolerance = 1e-9);

/// Energy-gap statistics over ordered level pairs (k, l), k != l, with
/// gap(k,l) = E_k - E_l. Gaps equal within the tolerance are merged; the
/// catalog is symmetric under negation.
struct GapCatalog {
  std::vector<double> distinct_gaps;        // ascending; empty when levels() < 2
  std::vector<std::int64_t> multiplicities; // ordered pairs per distinct gap
  Eigen::MatrixXi pair_group;               // (levels x levels) -> distinct gap index; diagonal -1
  std::int64_t gap_count = 0;               // levels*(levels-1)
  std::int64_t degeneracy = 1;              // g: largest gap multiplicity
  double eps_min = 0.0;                     // smallest separation between distinct gaps
  double gap_tolerance = 0.0;
  bool trivial = false;                     // single level: no gaps

  std::int64_t distinct_count() const { return static_cast<std::int64_t>(distinct_gaps.size()); }
};

GapCatalog gap_catalog(const SpectralDecomposition& dec, double gap_tolerance = 1e-9);

/// Number of (gap, multiplicity)-weighted distinct gaps inside the worst
/// half-open window [x, x + width); N(epsilon) of the gap distribution.
std::int64_t gap_window_count(const GapCatalog& catalog, double width);

/// Largest probability mass captured by a sliding half-open window
/// [x, x + width). values/weights need not be sorted; weights must be
/// nonnegative and sum to 1 within 1e-12.
double window_concentration(std::span<const double> values, std::span<const double> weights,
                            double width);

/// Envelope eta(1/T) <= a/(sigma*T) + delta fitted over measured samples.
struct ConcentrationSample {
  double horizon = 0.0;   // T
  double value = 0.0;     // measured concentration at window width 1/T
};

struct EnvelopeFit {
  double a = 0.0;
  double delta = 0.0;  // T -> infinity floor (largest point mass)
};

/// delta is supplied by the caller (the exact largest point mass of the
/// distribution); a is the smallest coefficient making the envelope dominate
/// every sample. Requires at least two samples and sigma > 0.
EnvelopeFit fit_envelope(std::span<const ConcentrationSample> samples, double sigma,
                         double max_point_mass);

struct DosDiagnostics {
  double mean = 0.0;        // sum_k p_k E_k
  double std_dev = 0.0;     // sigma_E of the level-population distribution
  double ks_distance = 1.0; // sup-distance to a matched Gaussian CDF
  bool degenerate = false;  // all population on one energy
};

DosDiagnostics dos_diagnostics(const SpectralDecomposition& dec, const QuantumState& state);

/// Exponential-decay envelope |A_ij| <~ |A| exp(-alpha (|E_i - E_j| - 2 R))
/// fitted to off-diagonal matrix elements in the energy eigenbasis.
struct MatrixElementDecay {
  double alpha = 0.0;        // decay rate; 0 flags no measurable decay
  double range = 0.0;        // R
  double intercept = 0.0;    // log-envelope at zero gap
  double violation_fraction = 0.0;  // points above the envelope (0 by construction)
  int bins = 0;
  std::vector<double> bin_centers;
  std::vector<double> bin_max;  // largest |A_ij| per bin, for inspection
};

/// a_eig: observable already rotated into the eigenbasis (V^dag A V).
MatrixElementDecay matrix_element_decay(const Matrix& a_eig, const SpectralDecomposition& dec,
                                        int bins = 32);

}  // namespace eqsim
