"""Exact-diagonalization equilibration toolkit.

Thin Python layer over the C++ core: build spin-chain Hamiltonians,
diagonalize them, decompose observable fluctuations over energy gaps, and
evaluate the rigorous equilibration bounds against measured dynamics.
"""

from ._core import (
    DephasingDecomposition,
    QuantumState,
    SpectralDecomposition,
    SpinChainSpec,
    __version__,
    bound_brandao,
    bound_eigen_observable,
    bound_finite_distinguishability,
    bound_finite_time_flat,
    bound_finite_time_log,
    bound_goldstein,
    bound_infinite_distinguishability,
    bound_infinite_fluctuation,
    bound_microcanonical_bath,
    bound_mixed_bath,
    bound_random_observable,
    bound_random_state,
    bound_small_rank,
    build_hamiltonian,
    cdw_state,
    cloud_snapshot,
    custom_chain,
    dephase,
    dephasing_decomposition,
    diagonalize,
    effective_dimension,
    evolve_expectation,
    exponential_dos_spectrum,
    fluctuation_trajectory,
    gap_statistics,
    haar_unitary,
    imbalance,
    ising_chain,
    magnetization,
    measurement_distinguishability,
    mixed_system_bath_state,
    operator_norm,
    optimize_microcanonical_k,
    pair_gap_concentration,
    partial_trace_first,
    pauli_string,
    product_state,
    random_observable,
    reimann_f,
    reimann_lorentzian,
    reimann_prediction,
    run_config_file,
    run_config_json,
    run_experiment,
    site_pauli,
    state_from_density,
    state_from_ket,
    time_average_finite,
    time_average_infinite,
    trace_distance,
    xxz_chain,
)

__all__ = [
    "DephasingDecomposition",
    "QuantumState",
    "SpectralDecomposition",
    "SpinChainSpec",
    "__version__",
    "bound_brandao",
    "bound_eigen_observable",
    "bound_finite_distinguishability",
    "bound_finite_time_flat",
    "bound_finite_time_log",
    "bound_goldstein",
    "bound_infinite_distinguishability",
    "bound_infinite_fluctuation",
    "bound_microcanonical_bath",
    "bound_mixed_bath",
    "bound_random_observable",
    "bound_random_state",
    "bound_small_rank",
    "build_hamiltonian",
    "cdw_state",
    "cloud_snapshot",
    "custom_chain",
    "dephase",
    "dephasing_decomposition",
    "diagonalize",
    "effective_dimension",
    "evolve_expectation",
    "exponential_dos_spectrum",
    "fluctuation_trajectory",
    "gap_statistics",
    "haar_unitary",
    "imbalance",
    "ising_chain",
    "magnetization",
    "measurement_distinguishability",
    "mixed_system_bath_state",
    "operator_norm",
    "optimize_microcanonical_k",
    "pair_gap_concentration",
    "partial_trace_first",
    "pauli_string",
    "product_state",
    "random_observable",
    "reimann_f",
    "reimann_lorentzian",
    "reimann_prediction",
    "run_config_file",
    "run_config_json",
    "run_experiment",
    "site_pauli",
    "state_from_density",
    "state_from_ket",
    "time_average_finite",
    "time_average_infinite",
    "trace_distance",
    "xxz_chain",
]
