#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "eqsim/bounds.hpp"
#include "eqsim/config.hpp"
#include "eqsim/dynamics.hpp"
#include "eqsim/ensembles.hpp"
#include "eqsim/model.hpp"
#include "eqsim/rng.hpp"
#include "eqsim/runner.hpp"
#include "eqsim/spectral.hpp"
#include "eqsim/version.hpp"
#include "json.hpp"

namespace py = pybind11;
using namespace eqsim;

namespace {

BoundaryKind boundary_from(const std::string& s) {
  if (s == "open") return BoundaryKind::open;
  if (s == "periodic") return BoundaryKind::periodic;
  throw std::invalid_argument("boundary must be 'open' or 'periodic'");
}

py::dict report_to_dict(const BoundReport& r) {
  py::dict d;
  d["bound_name"] = r.bound_name;
  d["lhs_measured"] = r.lhs_measured;
  d["rhs_bound"] = r.rhs_bound;
  d["satisfied"] = r.satisfied;
  d["slack"] = r.slack;
  py::dict inputs;
  for (const auto& [k, v] : r.inputs) inputs[py::str(k)] = v;
  d["inputs"] = inputs;
  return d;
}

py::list reports_to_list(const std::vector<BoundReport>& reports) {
  py::list out;
  for (const auto& r : reports) out.append(report_to_dict(r));
  return out;
}

py::dict finite_average_to_dict(const FiniteAverageResult& r) {
  py::dict d;
  d["value"] = r.value;
  d["sampled"] = r.sampled;
  d["samples"] = r.samples;
  d["error_estimate"] = r.error_estimate;
  return d;
}

char axis_from(const std::string& axis) {
  if (axis.size() != 1 || (axis != "x" && axis != "y" && axis != "z")) {
    throw std::invalid_argument("axis must be one of 'x', 'y', 'z'");
  }
  return axis[0];
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Exact-diagonalization toolkit for equilibration of closed quantum systems: "
      "dephasing decompositions, effective dimensions, rigorous fluctuation and "
      "distinguishability bounds, and the matching random-ensemble experiments.";
  m.attr("__version__") = version_string;

  // ---- system specification -------------------------------------------------
  py::class_<SpinChainSpec>(m, "SpinChainSpec")
      .def_readonly("sites", &SpinChainSpec::sites)
      .def("__repr__", [](const SpinChainSpec& s) {
        std::ostringstream ss;
        ss << "SpinChainSpec(sites=" << s.sites << ")";
        return ss.str();
      });

  m.def(
      "xxz_chain",
      [](int sites, double jxy, double jz, double j2, const std::string& boundary,
         std::optional<int> sector_sz, std::optional<std::pair<double, std::uint64_t>> disorder) {
        SpinChainSpec spec;
        spec.sites = sites;
        spec.model = ModelKind::xxz_nnn;
        spec.jxy = jxy;
        spec.jz = jz;
        spec.j2 = j2;
        spec.boundary = boundary_from(boundary);
        spec.sector_sz = sector_sz;
        if (disorder) spec.disorder = DisorderSpec{disorder->first, disorder->second};
        return spec;
      },
      py::arg("sites"), py::arg("jxy") = 1.0, py::arg("jz") = 1.0, py::arg("j2") = 0.0,
      py::arg("boundary") = "open", py::arg("sector_sz") = std::nullopt,
      py::arg("disorder") = std::nullopt,
      "Nearest- plus next-nearest-neighbour XXZ chain, optionally restricted to a total-Sz "
      "sector or dressed with deterministic on-site disorder (strength, seed).");

  m.def(
      "ising_chain",
      [](int sites, double j, double h, const std::string& boundary) {
        SpinChainSpec spec;
        spec.sites = sites;
        spec.model = ModelKind::transverse_ising;
        spec.j = j;
        spec.h = h;
        spec.boundary = boundary_from(boundary);
        return spec;
      },
      py::arg("sites"), py::arg("j") = 1.0, py::arg("h") = 1.0, py::arg("boundary") = "open",
      "Transverse-field Ising chain.");

  m.def(
      "custom_chain",
      [](int sites, const std::vector<std::pair<Complex, std::string>>& terms,
         const std::string& boundary, std::optional<int> sector_sz) {
        SpinChainSpec spec;
        spec.sites = sites;
        spec.model = ModelKind::custom;
        spec.boundary = boundary_from(boundary);
        spec.sector_sz = sector_sz;
        for (const auto& [coefficient, pauli] : terms) {
          spec.custom_terms.push_back(PauliTerm{coefficient, pauli});
        }
        return spec;
      },
      py::arg("sites"), py::arg("terms"), py::arg("boundary") = "open",
      py::arg("sector_sz") = std::nullopt,
      "Chain built from explicit weighted Pauli strings, e.g. [(0.5, 'xx1'), (1.0, 'z11')].");

  m.def("build_hamiltonian", &build_hamiltonian, py::arg("spec"),
        "Dense Hamiltonian of the chain (sector-restricted when `spec` carries a sector).");
  m.def(
      "pauli_string",
      [](const std::string& pauli, int sites) {
        return pauli_string_matrix({PauliTerm{Complex{1.0, 0.0}, pauli}}, sites);
      },
      py::arg("pauli"), py::arg("sites"),
      "Dense matrix of a Pauli string; site 0 is the leftmost (most significant) factor.");

  // ---- spectral decomposition ------------------------------------------------
  py::class_<SpectralDecomposition>(m, "SpectralDecomposition")
      .def_readonly("distinct_energies", &SpectralDecomposition::distinct_energies)
      .def_readonly("multiplicities", &SpectralDecomposition::multiplicities)
      .def_readonly("eigenbasis", &SpectralDecomposition::eigenbasis)
      .def_readonly("degeneracy_tolerance", &SpectralDecomposition::degeneracy_tolerance)
      .def_readonly("norm", &SpectralDecomposition::norm)
      .def("levels", &SpectralDecomposition::levels)
      .def("column_energies", &SpectralDecomposition::column_energies)
      .def("__repr__", [](const SpectralDecomposition& d) {
        std::ostringstream ss;
        ss << "SpectralDecomposition(dimension=" << d.dimension() << ", levels=" << d.levels()
           << ")";
        return ss.str();
      });

  m.def("diagonalize", &diagonalize, py::arg("hamiltonian"),
        py::arg("degeneracy_tolerance") = 1e-9,
        "Exact dense diagonalization with degenerate levels clustered at the tolerance.");

  m.def(
      "gap_statistics",
      [](const SpectralDecomposition& dec, double gap_tolerance) {
        GapCatalog catalog = gap_catalog(dec, gap_tolerance);
        py::dict d;
        d["distinct_count"] = catalog.distinct_count();
        d["gap_count"] = catalog.gap_count;
        d["degeneracy"] = catalog.degeneracy;
        d["eps_min"] = catalog.eps_min;
        d["trivial"] = catalog.trivial;
        return d;
      },
      py::arg("decomposition"), py::arg("gap_tolerance") = 1e-9,
      "Distinct-gap catalog summary: counts, maximal gap degeneracy g, smallest nonzero gap.");

  // ---- states and observables --------------------------------------------------
  py::class_<QuantumState>(m, "QuantumState")
      .def_readonly("pure", &QuantumState::pure)
      .def_readonly("ket", &QuantumState::ket)
      .def("density", &QuantumState::density)
      .def("dimension", &QuantumState::dimension)
      .def("__repr__", [](const QuantumState& s) {
        std::ostringstream ss;
        ss << "QuantumState(dimension=" << s.dimension() << ", pure=" << (s.pure ? "True" : "False")
           << ")";
        return ss.str();
      });

  m.def(
      "state_from_ket",
      [](const Vector& ket) {
        if (ket.size() < 1) throw std::invalid_argument("ket must be nonempty");
        double n = ket.norm();
        if (n == 0.0) throw std::invalid_argument("ket must be nonzero");
        QuantumState state;
        state.pure = true;
        state.ket = ket / n;
        return state;
      },
      py::arg("ket"), "Pure state from an amplitude vector (normalized internally).");

  m.def(
      "state_from_density",
      [](const Matrix& rho) {
        if (rho.rows() != rho.cols() || rho.rows() < 1) {
          throw std::invalid_argument("density matrix must be square");
        }
        if (hermiticity_error(rho) > 1e-9) {
          throw std::invalid_argument("density matrix must be hermitian");
        }
        double tr = rho.trace().real();
        if (!(tr > 0.0)) throw std::invalid_argument("density matrix must have positive trace");
        QuantumState state;
        state.pure = false;
        state.rho = rho / tr;
        return state;
      },
      py::arg("rho"), "Mixed state from a hermitian density matrix (trace-normalized).");

  m.def(
      "cdw_state",
      [](const SpinChainSpec& spec) {
        StateSpec state_spec;
        state_spec.kind = StateKind::cdw;
        return build_state(state_spec, spec);
      },
      py::arg("spec"), "Charge-density-wave product state |0101...> of the chain.");

  m.def(
      "product_state",
      [](const SpinChainSpec& spec, const std::string& bits) {
        StateSpec state_spec;
        state_spec.kind = StateKind::product;
        state_spec.product_bits = bits;
        return build_state(state_spec, spec);
      },
      py::arg("spec"), py::arg("bits"), "Computational product state from a bit string.");

  m.def(
      "mixed_system_bath_state",
      [](const SpinChainSpec& spec, const std::string& system_bits, Index bath_dim) {
        StateSpec state_spec;
        state_spec.kind = StateKind::mixed_system_bath;
        state_spec.system_bits = system_bits;
        state_spec.bath_dim = bath_dim;
        return build_state(state_spec, spec);
      },
      py::arg("spec"), py::arg("system_bits"), py::arg("bath_dim"),
      "Pure system factor tensored with a maximally mixed bath.");

  m.def(
      "site_pauli",
      [](const SpinChainSpec& spec, int site, const std::string& axis) {
        ObservableSpec obs;
        obs.kind = ObservableKind::site_pauli;
        obs.site = site;
        obs.axis = axis_from(axis);
        return build_observable(obs, spec);
      },
      py::arg("spec"), py::arg("site"), py::arg("axis") = "z",
      "Single-site Pauli observable on the chain (sector-restricted like the Hamiltonian).");

  m.def(
      "magnetization",
      [](const SpinChainSpec& spec) {
        ObservableSpec obs;
        obs.kind = ObservableKind::magnetization;
        return build_observable(obs, spec);
      },
      py::arg("spec"), "Mean on-site Z magnetization.");

  m.def(
      "imbalance",
      [](const SpinChainSpec& spec) {
        ObservableSpec obs;
        obs.kind = ObservableKind::imbalance;
        return build_observable(obs, spec);
      },
      py::arg("spec"), "Even/odd sublattice population imbalance.");

  m.def("operator_norm", &hermitian_operator_norm, py::arg("a"),
        "Spectral norm of a hermitian operator.");
  m.def("trace_distance", &trace_distance, py::arg("a"), py::arg("b"));
  m.def("partial_trace_first", &partial_trace_first, py::arg("rho"), py::arg("dim_first"),
        py::arg("dim_rest"), "Reduce to the leading tensor factor.");
  m.def(
      "measurement_distinguishability",
      [](const Matrix& a, const Matrix& rho, const Matrix& sigma, double tolerance) {
        return distinguishability(rho, sigma, measure_observable(a, tolerance));
      },
      py::arg("observable"), py::arg("rho"), py::arg("sigma"), py::arg("tolerance") = 1e-9,
      "D_A(rho, sigma): half the summed outcome-probability differences of the observable's "
      "spectral measurement.");

  // ---- dynamics ---------------------------------------------------------------
  m.def(
      "evolve_expectation",
      [](const SpectralDecomposition& dec, const QuantumState& state, const Matrix& a,
         const std::vector<double>& times, int threads) {
        return evolve_expectation(dec, state, a, times, threads);
      },
      py::arg("decomposition"), py::arg("state"), py::arg("observable"), py::arg("times"),
      py::arg("threads") = 1, "<A>(t) over a time grid via eigenbasis propagation.");

  m.def("dephase", &dephase, py::arg("decomposition"), py::arg("state"),
        "Infinite-time averaged (dephased) state omega as a dense density matrix.");

  m.def(
      "effective_dimension",
      [](const SpectralDecomposition& dec, const QuantumState& state) {
        EffectiveDimension ed = effective_dimension(dec, state);
        return py::make_tuple(ed.d_eff, ed.ipr);
      },
      py::arg("decomposition"), py::arg("state"),
      "(d_eff, participation ratio) of the state over the energy levels.");

  py::class_<FluctuationData>(m, "DephasingDecomposition")
      .def_property_readonly("gaps",
                             [](const FluctuationData& fd) {
                               return py::array_t<double>(
                                   static_cast<py::ssize_t>(fd.gap_values.size()),
                                   fd.gap_values.data());
                             })
      .def_property_readonly("z",
                             [](const FluctuationData& fd) {
                               return py::array_t<Complex>(
                                   static_cast<py::ssize_t>(fd.z.size()), fd.z.data());
                             })
      .def_readonly("equilibrium_value", &FluctuationData::equilibrium_value)
      .def_readonly("initial_deviation", &FluctuationData::initial_deviation)
      .def_readonly("q_total", &FluctuationData::q_total)
      .def_readonly("sum_v_sq", &FluctuationData::sum_v_sq)
      .def_readonly("sigma_g", &FluctuationData::sigma_g)
      .def("__repr__", [](const FluctuationData& fd) {
        std::ostringstream ss;
        ss << "DephasingDecomposition(gaps=" << fd.gap_values.size() << ")";
        return ss.str();
      });

  m.def(
      "dephasing_decomposition",
      [](const SpectralDecomposition& dec, const QuantumState& state, const Matrix& a,
         double gap_tolerance) {
        GapCatalog catalog = gap_catalog(dec, gap_tolerance);
        return fluctuation_data(dec, catalog, state, a);
      },
      py::arg("decomposition"), py::arg("state"), py::arg("observable"),
      py::arg("gap_tolerance") = 1e-9,
      "Gap-resolved decomposition of Delta A(t) = sum_G z_G exp(-i G t).");

  m.def("time_average_infinite", &time_average_infinite, py::arg("decomposition"),
        "Infinite-horizon average of Delta A(t)^2 (= sum |z_G|^2).");

  m.def(
      "time_average_finite",
      [](const FluctuationData& fd, double horizon, std::int64_t pair_budget, int samples,
         int threads) {
        FiniteAverageOptions opts;
        opts.pair_budget = pair_budget;
        opts.samples = samples;
        opts.threads = threads;
        return finite_average_to_dict(time_average_finite(fd, horizon, opts));
      },
      py::arg("decomposition"), py::arg("horizon"), py::arg("pair_budget") = 20'000'000,
      py::arg("samples") = 4096, py::arg("threads") = 1,
      "Average of Delta A(t)^2 over [0, horizon]: closed kernel sum, or stratified time "
      "sampling past the pair budget.");

  m.def(
      "fluctuation_trajectory",
      [](const FluctuationData& fd, const std::vector<double>& times, int threads) {
        return fluctuation_trajectory(fd, times, threads);
      },
      py::arg("decomposition"), py::arg("times"), py::arg("threads") = 1,
      "Delta A(t) evaluated from the gap decomposition.");

  m.def("pair_gap_concentration", &pair_gap_concentration, py::arg("decomposition"),
        py::arg("width"),
        "Largest |v|-mass of ordered level pairs inside a sliding gap window.");

  m.def(
      "cloud_snapshot",
      [](const FluctuationData& fd, double horizon, double time) {
        CloudSnapshot snap = cloud_snapshot(fd, horizon, time);
        py::dict d;
        d["time"] = snap.time;
        d["grid"] = snap.grid;
        d["amplitudes"] = py::array_t<Complex>(static_cast<py::ssize_t>(snap.amplitudes.size()),
                                               snap.amplitudes.data());
        d["total"] = snap.total;
        d["circular_variance"] = circular_variance(snap);
        return d;
      },
      py::arg("decomposition"), py::arg("horizon"), py::arg("time"),
      "Rotating-frame cloud of (G, z_G e^{-iGt}) points, Gaussian-smoothed by 1/horizon; "
      "horizon <= 0 keeps the raw points.");

  // ---- bounds -------------------------------------------------------------------
  m.def(
      "bound_infinite_fluctuation",
      [](double g, double sum_v_sq, double norm_a, double d_eff) {
        InfiniteFluctuationBound b = bound_infinite_fluctuation(g, sum_v_sq, norm_a, d_eff);
        return py::make_tuple(b.via_sum_v_sq, b.via_d_eff);
      },
      py::arg("g"), py::arg("sum_v_sq"), py::arg("norm_a"), py::arg("d_eff"),
      "(g sum|v|^2, g |A|^2 / d_eff): the two infinite-horizon fluctuation bounds.");
  m.def("bound_infinite_distinguishability", &bound_infinite_distinguishability, py::arg("g"),
        py::arg("n_outcomes"), py::arg("d_eff"));
  m.def("bound_finite_time_log", &bound_finite_time_log, py::arg("g"), py::arg("norm_a"),
        py::arg("d_eff"), py::arg("levels"), py::arg("eps_min"), py::arg("horizon"));
  m.def("bound_finite_time_flat", &bound_finite_time_flat, py::arg("g"), py::arg("norm_a"),
        py::arg("d_eff"), py::arg("eps_min"), py::arg("horizon"));
  m.def("bound_finite_distinguishability", &bound_finite_distinguishability, py::arg("g"),
        py::arg("n_outcomes"), py::arg("d_eff"), py::arg("eps_min"), py::arg("horizon"));
  m.def("bound_small_rank", &bound_small_rank, py::arg("rank"), py::arg("eta"),
        py::arg("c") = 7.0);
  m.def(
      "bound_goldstein",
      [](double beta, double horizon, double dim, double dim_neq) {
        GoldsteinBound b = bound_goldstein(beta, horizon, dim, dim_neq);
        py::dict d;
        d["rhs"] = b.rhs;
        d["t_max"] = b.t_max;
        d["within_validity"] = b.within_validity;
        return d;
      },
      py::arg("beta"), py::arg("horizon"), py::arg("dim"), py::arg("dim_neq"));
  m.def(
      "bound_brandao",
      [](const std::vector<double>& energies, const std::vector<std::int64_t>& multiplicities,
         double t, double dim_system, double dim_bath) {
        BrandaoQuantities q = brandao_quantities(energies, multiplicities, t);
        BrandaoBound b = bound_brandao(q, dim_system, dim_bath);
        py::dict d;
        d["core"] = b.core;
        d["remainder"] = b.remainder;
        d["total"] = b.total();
        return d;
      },
      py::arg("energies"), py::arg("multiplicities"), py::arg("t"), py::arg("dim_system"),
      py::arg("dim_bath"),
      "Averaged squared Hilbert-Schmidt distance bound for a small system against a "
      "Haar-typical bath; remainder is the 1/dim_bath asymptotic tail.");
  m.def(
      "reimann_f",
      [](const std::vector<double>& energies, double t) { return reimann_f(energies, t); },
      py::arg("energies"), py::arg("t"),
      "Spectral interpolation factor F(t); F(0) = 1.");
  m.def("reimann_prediction", &reimann_prediction, py::arg("f"), py::arg("equilibrium_value"),
        py::arg("initial_value"));
  m.def("reimann_lorentzian", &reimann_lorentzian, py::arg("beta"), py::arg("t"));
  m.def("bound_random_observable", &bound_random_observable, py::arg("n_outcomes"),
        py::arg("dim"));
  m.def("bound_eigen_observable", &bound_eigen_observable, py::arg("n_outcomes"), py::arg("dim"));
  m.def("bound_random_state", &bound_random_state, py::arg("norm_a"), py::arg("dim"),
        py::arg("purity"), py::arg("xi"));
  m.def("bound_mixed_bath", &bound_mixed_bath, py::arg("norm_a"), py::arg("dim_system"),
        py::arg("a"), py::arg("delta"), py::arg("sigma_g"), py::arg("horizon"));
  m.def("bound_microcanonical_bath", &bound_microcanonical_bath, py::arg("norm_a"),
        py::arg("dim_system"), py::arg("beta"), py::arg("norm_hs"), py::arg("norm_hi"),
        py::arg("k"), py::arg("a"), py::arg("delta"), py::arg("sigma_g"), py::arg("horizon"));
  m.def(
      "optimize_microcanonical_k",
      [](double norm_a, double dim_system, double beta, double norm_hs, double norm_hi, double a,
         double delta, double sigma_g, double horizon) {
        MicrocanonicalOptimum opt = optimize_microcanonical_k(norm_a, dim_system, beta, norm_hs,
                                                              norm_hi, a, delta, sigma_g, horizon);
        return py::make_tuple(opt.k, opt.rhs);
      },
      py::arg("norm_a"), py::arg("dim_system"), py::arg("beta"), py::arg("norm_hs"),
      py::arg("norm_hi"), py::arg("a"), py::arg("delta"), py::arg("sigma_g"), py::arg("horizon"));

  // ---- ensembles ------------------------------------------------------------------
  m.def(
      "haar_unitary",
      [](Index dim, std::uint64_t seed) { return haar_unitary(dim, seed); },
      py::arg("dim"), py::arg("seed"));
  m.def(
      "random_observable",
      [](const std::vector<double>& spectrum, std::uint64_t seed) {
        Rng rng(seed);
        return random_observable(spectrum, rng);
      },
      py::arg("spectrum"), py::arg("seed"),
      "Haar-rotated observable with the given spectrum.");
  m.def(
      "exponential_dos_spectrum",
      [](double beta, double width, Index dim, std::uint64_t seed) {
        return exponential_dos_spectrum(beta, width, dim, seed);
      },
      py::arg("beta"), py::arg("width"), py::arg("dim"), py::arg("seed"),
      "Sorted energies sampled from a density of states proportional to exp(beta E) on "
      "[0, width].");

  m.def(
      "run_experiment",
      [](const std::string& kind, int trials, std::uint64_t seed, int threads, Index dim,
         int n_outcomes, double beta, double width, Index dim_neq, Index dim_system,
         Index dim_bath, const std::vector<double>& grid, int time_samples, int sites, double jxy,
         double jz, double j2) {
        ExperimentConfig config;
        config.kind = experiment_kind_from_string(kind);
        config.trials = trials;
        config.seed = seed;
        config.threads = threads;
        config.dim = dim;
        config.n_outcomes = n_outcomes;
        config.beta = beta;
        config.width = width;
        config.dim_neq = dim_neq;
        config.dim_system = dim_system;
        config.dim_bath = dim_bath;
        config.grid = grid;
        config.time_samples = time_samples;
        config.sites = sites;
        config.jxy = jxy;
        config.jz = jz;
        config.j2 = j2;
        ExperimentOutput out = run_experiment(config);
        py::dict d;
        d["quantity"] = out.ensemble.quantity;
        d["grid"] = out.ensemble.grid;
        d["mean"] = out.ensemble.mean;
        d["std_error"] = out.ensemble.std_error;
        d["trials"] = out.ensemble.trials;
        d["seed"] = out.ensemble.seed;
        d["reports"] = reports_to_list(out.reports);
        py::dict series;
        for (const auto& [name, values] : out.series) series[py::str(name)] = values;
        d["series"] = series;
        return d;
      },
      py::arg("kind"), py::arg("trials") = 100, py::arg("seed") = 1, py::arg("threads") = 1,
      py::arg("dim") = 64, py::arg("n_outcomes") = 2, py::arg("beta") = 1.0,
      py::arg("width") = 10.0, py::arg("dim_neq") = 8, py::arg("dim_system") = 2,
      py::arg("dim_bath") = 8, py::arg("grid") = std::vector<double>{},
      py::arg("time_samples") = 64, py::arg("sites") = 6, py::arg("jxy") = 1.0,
      py::arg("jz") = 1.0, py::arg("j2") = 0.5,
      "Random-ensemble experiment (random_observable_avg, eigen_observable_avg, goldstein, "
      "brandao, reimann_f, permutation_f, random_bath) with per-trial seeds derived from the "
      "master seed.");

  // ---- config-driven runner ----------------------------------------------------
  auto run_parsed = [](RunConfig config) {
    std::ostringstream log;
    RunOutcome outcome = run_config(config, log);
    py::dict d;
    d["violations"] = outcome.violations;
    d["cache_hit"] = outcome.cache_hit;
    d["artifacts"] = outcome.artifacts;
    d["reports"] = reports_to_list(outcome.reports);
    d["log"] = log.str();
    return d;
  };

  m.def(
      "run_config_file",
      [run_parsed](const std::string& path) { return run_parsed(parse_config_file(path)); },
      py::arg("path"),
      "Execute a JSON run configuration from disk; returns violations, reports, artifacts.");

  m.def(
      "run_config_json",
      [run_parsed](const std::string& text) {
        return run_parsed(parse_config(nlohmann::json::parse(text)));
      },
      py::arg("text"), "Execute a JSON run configuration given as a string.");
}
