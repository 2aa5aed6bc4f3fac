#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eqsim/linalg.hpp"

namespace eqsim {

// Conventions used throughout:
//  - site 0 maps to the most significant bit of the computational basis index,
//    so |b_0 b_1 ... b_{N-1}> has index sum_i b_i 2^{N-1-i};
//  - bit value 0 is spin up: Z|0> = +|0>, Z|1> = -|1>;
//  - hbar = 1.

/// One term of a Pauli-string Hamiltonian: coefficient * P_0 P_1 ... P_{N-1},
/// pauli[i] in {'I','X','Y','Z'} acting on site i.
struct PauliTerm {
  Complex coefficient;
  std::string pauli;
};

enum class ModelKind { xxz_nnn, transverse_ising, custom };
enum class BoundaryKind { open, periodic };

struct DisorderSpec {
  double strength = 0.0;  // field h_i drawn uniformly from [-strength, strength]
  std::uint64_t seed = 0;
};

struct SpinChainSpec {
  int sites = 0;  // N >= 2
  ModelKind model = ModelKind::xxz_nnn;
  BoundaryKind boundary = BoundaryKind::open;
  // xxz_nnn: sum_i jxy/2 (X_i X_{i+1} + Y_i Y_{i+1}) + jz Z_i Z_{i+1}
  //        + j2 sum_i [ 1/2 (X_i X_{i+2} + Y_i Y_{i+2}) + Z_i Z_{i+2} ]
  double jxy = 1.0;
  double jz = 1.0;
  double j2 = 0.0;
  // transverse_ising: sum_i j Z_i Z_{i+1} + sum_i h X_i
  double j = 1.0;
  double h = 1.0;
  std::vector<PauliTerm> custom_terms;  // model == custom
  std::optional<DisorderSpec> disorder;  // adds sum_i h_i Z_i
  std::optional<int> sector_sz;  // restrict to total-Z eigenvalue sector

  Index full_dimension() const { return Index{1} << sites; }
};

/// Fixed-magnetization subspace: computational states with a given popcount,
/// listed in ascending integer order.
struct SectorBasis {
  int sites = 0;
  int sector_sz = 0;                    // total-Z eigenvalue, = sites - 2*popcount
  std::vector<std::uint64_t> states;    // ascending
  Index dimension() const { return static_cast<Index>(states.size()); }
};

SectorBasis sector_basis(int sites, int sector_sz);

/// Dense Hamiltonian in the computational basis (or the sector basis when
/// spec.sector_sz is set). Throws if a custom/observable term leaks out of the
/// requested sector.
Matrix build_hamiltonian(const SpinChainSpec& spec);

/// Pauli terms of the model (disorder fields included), for inspection/tests.
std::vector<PauliTerm> hamiltonian_terms(const SpinChainSpec& spec);

/// Dense matrix of a sum of Pauli strings on n qubits.
Matrix pauli_string_matrix(const std::vector<PauliTerm>& terms, int sites);

/// Same, restricted to a sector basis. max_leak (if non-null) receives the
/// largest Frobenius norm of the operator's coupling out of the sector; the
/// builders reject operators that do not preserve the sector.
Matrix pauli_string_matrix_sector(const std::vector<PauliTerm>& terms, const SectorBasis& basis,
                                  double* max_leak = nullptr);

enum class ObservableKind { site_pauli, magnetization, imbalance, projector, custom };

struct ObservableSpec {
  ObservableKind kind = ObservableKind::site_pauli;
  int site = 0;       // site_pauli
  char axis = 'z';    // site_pauli: 'x','y','z'
  std::vector<std::uint64_t> projector_states;  // projector: computational indices
  std::vector<PauliTerm> custom_terms;
};

/// Observable in the basis implied by the chain spec (full or sector).
Matrix build_observable(const ObservableSpec& spec, const SpinChainSpec& chain);

/// Observable on an unconstrained n-qubit register.
Matrix build_observable(const ObservableSpec& spec, int sites);

enum class StateKind { product, cdw, amplitude_vector, mixed_system_bath };

struct StateSpec {
  StateKind kind = StateKind::cdw;
  std::string product_bits;  // product: e.g. "0110", site 0 first
  Vector amplitudes;         // amplitude_vector (normalized on build)
  // mixed_system_bath: |system_bits><system_bits| (x) 1/bath_dim on the
  // trailing tensor factor; requires bath_dim a power of two.
  std::string system_bits;
  Index bath_dim = 0;
};

/// Initial state: a normalized ket, or a density matrix for mixed states.
struct QuantumState {
  bool pure = true;
  Vector ket;   // pure
  Matrix rho;   // mixed
  Index dimension() const { return pure ? ket.size() : rho.rows(); }
  Matrix density() const;  // |ket><ket| or rho
};

QuantumState build_state(const StateSpec& spec, const SpinChainSpec& chain);

/// Weight of the state inside each total-Z sector, indexed by popcount.
std::vector<double> sector_weights(const QuantumState& state, int sites);

}  // namespace eqsim
