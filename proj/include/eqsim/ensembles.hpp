#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "eqsim/bounds.hpp"
#include "eqsim/linalg.hpp"
#include "eqsim/model.hpp"
#include "eqsim/rng.hpp"

namespace eqsim {

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases of
/// diag(R) folded back into Q.
Matrix haar_unitary(Index dim, Rng& rng);
Matrix haar_unitary(Index dim, std::uint64_t seed);

/// U diag(spectrum) U^dag with Haar U; spectrum listed with multiplicity.
Matrix random_observable(std::span<const double> spectrum, Rng& rng);

/// Same, but the first eigenvector is pinned to psi (the rest Haar in its
/// orthogonal complement), so psi is an eigenvector with eigenvalue
/// spectrum[0].
Matrix random_eigen_observable(const Vector& psi, std::span<const double> spectrum, Rng& rng);

/// Hamiltonian with a fixed spectrum and Haar-random eigenbasis.
Matrix random_hamiltonian_fixed_spectrum(std::span<const double> energies, Rng& rng);

/// Energies drawn from a density of states proportional to e^{beta E} on
/// [0, width], sorted ascending.
RealVector exponential_dos_spectrum(double beta, double width, Index dim, Rng& rng);
RealVector exponential_dos_spectrum(double beta, double width, Index dim, std::uint64_t seed);

enum class ExperimentKind {
  random_observable_avg,  // Haar observables, fixed state/Hamiltonian
  eigen_observable_avg,   // observables with the initial state as eigenvector
  goldstein,              // nonequilibrium-subspace escape under Haar H eigenbases
  brandao,                // system-bath equilibration under Haar eigenbases
  reimann_f,              // trajectory vs F(t) interpolation under Haar H eigenbases
  permutation_f,          // eigenstate permutations: equilibrates, no thermalization
  random_bath,            // maximally mixed bath on a spin chain (deterministic)
};

ExperimentKind experiment_kind_from_string(const std::string& name);
std::string to_string(ExperimentKind kind);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::random_observable_avg;
  int trials = 100;
  std::uint64_t seed = 1;
  int threads = 1;
  Index dim = 64;            // Hilbert-space dimension of the ensemble
  int n_outcomes = 2;        // measurement outcomes for observable ensembles
  double beta = 1.0;         // inverse temperature (goldstein, exponential DOS)
  double width = 10.0;       // spectral width for exponential DOS
  Index dim_neq = 8;         // goldstein: nonequilibrium subspace dimension
  Index dim_system = 2;      // brandao / random_bath
  Index dim_bath = 8;        // brandao / random_bath
  std::vector<double> grid;  // times or averaging horizons (kind-dependent)
  int time_samples = 64;     // samples per horizon for time averages
  // random_bath: chain parameters
  int sites = 6;
  double jxy = 1.0, jz = 1.0, j2 = 0.5;
};

/// Trial-averaged scalar series over config.grid, with standard errors.
struct EnsembleResult {
  std::string quantity;
  std::vector<double> grid;
  std::vector<double> mean;
  std::vector<double> std_error;
  int trials = 0;
  std::uint64_t seed = 0;
};

struct ExperimentOutput {
  EnsembleResult ensemble;
  std::vector<BoundReport> reports;
  // Named companion series on the same grid (predictions, bounds, ...).
  std::map<std::string, std::vector<double>> series;
};

ExperimentOutput run_experiment(const ExperimentConfig& config);

}  // namespace eqsim
