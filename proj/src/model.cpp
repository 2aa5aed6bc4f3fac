#include "eqsim/model.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <unordered_map>

#include "eqsim/rng.hpp"

namespace eqsim {

namespace {

constexpr Index max_dense_dimension = 1 << 14;

void check_sites(int sites) {
  if (sites < 2 || sites > 24) {
    throw std::invalid_argument("chain size must be between 2 and 24 sites, got " +
                                std::to_string(sites));
  }
}

void check_pauli_string(const PauliTerm& term, int sites) {
  if (static_cast<int>(term.pauli.size()) != sites) {
    throw std::invalid_argument("pauli string '" + term.pauli + "' does not match " +
                                std::to_string(sites) + " sites");
  }
  for (char c : term.pauli) {
    if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
      throw std::invalid_argument(std::string("invalid pauli letter '") + c +
                                  "' (expected one of I, X, Y, Z)");
    }
  }
}

// P|col> = phase |row> for a single Pauli string; site 0 is the MSB.
void apply_pauli_string(const std::string& pauli, int sites, std::uint64_t col,
                        std::uint64_t& row, Complex& phase) {
  row = col;
  phase = Complex(1.0, 0.0);
  for (int site = 0; site < sites; ++site) {
    char p = pauli[static_cast<std::size_t>(site)];
    if (p == 'I') continue;
    int shift = sites - 1 - site;
    std::uint64_t bit = (col >> shift) & 1ULL;
    switch (p) {
      case 'X':
        row ^= (1ULL << shift);
        break;
      case 'Y':
        row ^= (1ULL << shift);
        phase *= bit == 0 ? Complex(0.0, 1.0) : Complex(0.0, -1.0);
        break;
      case 'Z':
        if (bit == 1) phase = -phase;
        break;
      default:
        break;
    }
  }
}

std::string identity_string(int sites) { return std::string(static_cast<std::size_t>(sites), 'I'); }

std::string two_site_string(int sites, int a, int b, char pa, char pb) {
  std::string s = identity_string(sites);
  s[static_cast<std::size_t>(a)] = pa;
  s[static_cast<std::size_t>(b)] = pb;
  return s;
}

std::string one_site_string(int sites, int a, char pa) {
  std::string s = identity_string(sites);
  s[static_cast<std::size_t>(a)] = pa;
  return s;
}

void append_coupling_terms(std::vector<PauliTerm>& terms, const SpinChainSpec& spec,
                           int distance, double hop, double ising) {
  int sites = spec.sites;
  int last = spec.boundary == BoundaryKind::periodic ? sites : sites - distance;
  for (int i = 0; i < last; ++i) {
    int j = (i + distance) % sites;
    if (hop != 0.0) {
      terms.push_back({Complex(hop / 2.0, 0.0), two_site_string(sites, i, j, 'X', 'X')});
      terms.push_back({Complex(hop / 2.0, 0.0), two_site_string(sites, i, j, 'Y', 'Y')});
    }
    if (ising != 0.0) {
      terms.push_back({Complex(ising, 0.0), two_site_string(sites, i, j, 'Z', 'Z')});
    }
  }
}

std::uint64_t bits_to_index(const std::string& bits, int sites, const char* what) {
  if (static_cast<int>(bits.size()) != sites) {
    throw std::invalid_argument(std::string(what) + " '" + bits + "' does not match " +
                                std::to_string(sites) + " sites");
  }
  std::uint64_t index = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument(std::string(what) + " '" + bits + "' must contain only 0/1");
    }
    index = (index << 1) | static_cast<std::uint64_t>(c - '0');
  }
  return index;
}

}  // namespace

SectorBasis sector_basis(int sites, int sector_sz) {
  check_sites(sites);
  if ((sites - sector_sz) % 2 != 0 || sector_sz < -sites || sector_sz > sites) {
    throw std::invalid_argument("total-Z sector " + std::to_string(sector_sz) +
                                " does not exist for " + std::to_string(sites) + " sites");
  }
  int popcount = (sites - sector_sz) / 2;
  SectorBasis basis;
  basis.sites = sites;
  basis.sector_sz = sector_sz;
  std::uint64_t dim = 1ULL << sites;
  for (std::uint64_t s = 0; s < dim; ++s) {
    if (std::popcount(s) == popcount) basis.states.push_back(s);
  }
  return basis;
}

std::vector<PauliTerm> hamiltonian_terms(const SpinChainSpec& spec) {
  check_sites(spec.sites);
  std::vector<PauliTerm> terms;
  switch (spec.model) {
    case ModelKind::xxz_nnn:
      append_coupling_terms(terms, spec, 1, spec.jxy, spec.jz);
      if (spec.j2 != 0.0) append_coupling_terms(terms, spec, 2, spec.j2, spec.j2);
      break;
    case ModelKind::transverse_ising: {
      append_coupling_terms(terms, spec, 1, 0.0, spec.j);
      for (int i = 0; i < spec.sites; ++i) {
        if (spec.h != 0.0) terms.push_back({Complex(spec.h, 0.0), one_site_string(spec.sites, i, 'X')});
      }
      break;
    }
    case ModelKind::custom:
      if (spec.custom_terms.empty()) {
        throw std::invalid_argument("custom model requires at least one pauli term");
      }
      terms = spec.custom_terms;
      break;
  }
  for (const auto& term : terms) check_pauli_string(term, spec.sites);
  if (spec.disorder && spec.disorder->strength > 0.0) {
    Rng rng(spec.disorder->seed);
    for (int i = 0; i < spec.sites; ++i) {
      double field = spec.disorder->strength * (2.0 * rng.uniform() - 1.0);
      terms.push_back({Complex(field, 0.0), one_site_string(spec.sites, i, 'Z')});
    }
  }
  return terms;
}

Matrix pauli_string_matrix(const std::vector<PauliTerm>& terms, int sites) {
  if (sites < 1 || sites > 24) {
    throw std::invalid_argument("pauli strings need 1..24 sites, got " + std::to_string(sites));
  }
  Index dim = Index{1} << sites;
  if (dim > max_dense_dimension) {
    throw std::invalid_argument("dense build of 2^" + std::to_string(sites) +
                                " states exceeds the supported size");
  }
  Matrix m = Matrix::Zero(dim, dim);
  for (const auto& term : terms) {
    check_pauli_string(term, sites);
    for (Index col = 0; col < dim; ++col) {
      std::uint64_t row = 0;
      Complex phase;
      apply_pauli_string(term.pauli, sites, static_cast<std::uint64_t>(col), row, phase);
      m(static_cast<Index>(row), col) += term.coefficient * phase;
    }
  }
  return m;
}

Matrix pauli_string_matrix_sector(const std::vector<PauliTerm>& terms, const SectorBasis& basis,
                                  double* max_leak) {
  Index dim = basis.dimension();
  Matrix m = Matrix::Zero(dim, dim);
  double leak_sq = 0.0;
  std::unordered_map<std::uint64_t, Complex> out_amp;
  for (Index col = 0; col < dim; ++col) {
    out_amp.clear();
    std::uint64_t col_state = basis.states[static_cast<std::size_t>(col)];
    for (const auto& term : terms) {
      check_pauli_string(term, basis.sites);
      std::uint64_t row_state = 0;
      Complex phase;
      apply_pauli_string(term.pauli, basis.sites, col_state, row_state, phase);
      auto it = std::lower_bound(basis.states.begin(), basis.states.end(), row_state);
      if (it != basis.states.end() && *it == row_state) {
        Index row = static_cast<Index>(it - basis.states.begin());
        m(row, col) += term.coefficient * phase;
      } else {
        out_amp[row_state] += term.coefficient * phase;
      }
    }
    for (const auto& [state, amp] : out_amp) leak_sq += std::norm(amp);
  }
  if (max_leak) *max_leak = std::sqrt(leak_sq);
  return m;
}

Matrix build_hamiltonian(const SpinChainSpec& spec) {
  auto terms = hamiltonian_terms(spec);
  if (!spec.sector_sz) return pauli_string_matrix(terms, spec.sites);
  SectorBasis basis = sector_basis(spec.sites, *spec.sector_sz);
  double leak = 0.0;
  Matrix h = pauli_string_matrix_sector(terms, basis, &leak);
  double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if (leak > 1e-10 * scale) {
    throw std::invalid_argument("hamiltonian does not preserve the total-Z sector (leak " +
                                std::to_string(leak) + ")");
  }
  return h;
}

Matrix build_observable(const ObservableSpec& spec, int sites) {
  SpinChainSpec chain;
  chain.sites = sites;
  return build_observable(spec, chain);
}

Matrix build_observable(const ObservableSpec& spec, const SpinChainSpec& chain) {
  check_sites(chain.sites);
  int sites = chain.sites;
  std::vector<PauliTerm> terms;
  switch (spec.kind) {
    case ObservableKind::site_pauli: {
      if (spec.site < 0 || spec.site >= sites) {
        throw std::invalid_argument("site " + std::to_string(spec.site) + " outside chain of " +
                                    std::to_string(sites) + " sites");
      }
      char axis = static_cast<char>(std::toupper(spec.axis));
      if (axis != 'X' && axis != 'Y' && axis != 'Z') {
        throw std::invalid_argument(std::string("invalid pauli axis '") + spec.axis + "'");
      }
      terms.push_back({Complex(1.0, 0.0), one_site_string(sites, spec.site, axis)});
      break;
    }
    case ObservableKind::magnetization:
      for (int i = 0; i < sites; ++i) {
        terms.push_back({Complex(1.0 / sites, 0.0), one_site_string(sites, i, 'Z')});
      }
      break;
    case ObservableKind::imbalance:
      // (sum over odd sites - sum over even sites) of Z, normalized; the
      // density-wave state |0101...> has imbalance -1.
      for (int i = 0; i < sites; ++i) {
        double sign = (i % 2 == 1) ? 1.0 : -1.0;
        terms.push_back({Complex(sign / sites, 0.0), one_site_string(sites, i, 'Z')});
      }
      break;
    case ObservableKind::projector: {
      if (spec.projector_states.empty()) {
        throw std::invalid_argument("projector observable requires at least one basis state");
      }
      Index dim = chain.sector_sz ? sector_basis(sites, *chain.sector_sz).dimension()
                                  : (Index{1} << sites);
      Matrix a = Matrix::Zero(dim, dim);
      if (chain.sector_sz) {
        SectorBasis basis = sector_basis(sites, *chain.sector_sz);
        for (std::uint64_t s : spec.projector_states) {
          auto it = std::lower_bound(basis.states.begin(), basis.states.end(), s);
          if (it == basis.states.end() || *it != s) {
            throw std::invalid_argument("projector state " + std::to_string(s) +
                                        " lies outside the requested sector");
          }
          Index pos = static_cast<Index>(it - basis.states.begin());
          a(pos, pos) = 1.0;
        }
      } else {
        for (std::uint64_t s : spec.projector_states) {
          if (s >= static_cast<std::uint64_t>(dim)) {
            throw std::invalid_argument("projector state " + std::to_string(s) +
                                        " outside dimension " + std::to_string(dim));
          }
          a(static_cast<Index>(s), static_cast<Index>(s)) = 1.0;
        }
      }
      return a;
    }
    case ObservableKind::custom:
      if (spec.custom_terms.empty()) {
        throw std::invalid_argument("custom observable requires at least one pauli term");
      }
      terms = spec.custom_terms;
      break;
  }
  Matrix a;
  if (chain.sector_sz) {
    SectorBasis basis = sector_basis(sites, *chain.sector_sz);
    double leak = 0.0;
    a = pauli_string_matrix_sector(terms, basis, &leak);
    double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if (leak > 1e-10 * scale) {
      throw std::invalid_argument("observable does not preserve the total-Z sector (leak " +
                                  std::to_string(leak) + ")");
    }
  } else {
    a = pauli_string_matrix(terms, sites);
  }
  if (hermiticity_error(a) > 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("observable is not hermitian; check custom coefficients");
  }
  return a;
}

Matrix QuantumState::density() const {
  if (!pure) return rho;
  return ket * ket.adjoint();
}

QuantumState build_state(const StateSpec& spec, const SpinChainSpec& chain) {
  check_sites(chain.sites);
  int sites = chain.sites;
  QuantumState state;
  std::optional<SectorBasis> basis;
  if (chain.sector_sz) basis = sector_basis(sites, *chain.sector_sz);
  Index dim = basis ? basis->dimension() : (Index{1} << sites);

  auto basis_ket = [&](std::uint64_t index) {
    Vector ket = Vector::Zero(dim);
    if (basis) {
      auto it = std::lower_bound(basis->states.begin(), basis->states.end(), index);
      if (it == basis->states.end() || *it != index) {
        throw std::invalid_argument("initial state lies outside the requested total-Z sector");
      }
      ket(static_cast<Index>(it - basis->states.begin())) = 1.0;
    } else {
      ket(static_cast<Index>(index)) = 1.0;
    }
    return ket;
  };

  switch (spec.kind) {
    case StateKind::product:
      state.ket = basis_ket(bits_to_index(spec.product_bits, sites, "product state"));
      break;
    case StateKind::cdw: {
      std::string bits;
      for (int i = 0; i < sites; ++i) bits.push_back(i % 2 == 0 ? '0' : '1');
      state.ket = basis_ket(bits_to_index(bits, sites, "density-wave state"));
      break;
    }
    case StateKind::amplitude_vector: {
      if (spec.amplitudes.size() != dim) {
        throw std::invalid_argument("amplitude vector has dimension " +
                                    std::to_string(spec.amplitudes.size()) + ", expected " +
                                    std::to_string(dim));
      }
      double norm = spec.amplitudes.norm();
      if (norm < 1e-14) throw std::invalid_argument("amplitude vector has zero norm");
      state.ket = spec.amplitudes / norm;
      break;
    }
    case StateKind::mixed_system_bath: {
      if (basis) {
        throw std::invalid_argument("mixed system-bath states are not supported in a sector");
      }
      if (spec.bath_dim < 1 || std::popcount(static_cast<std::uint64_t>(spec.bath_dim)) != 1) {
        throw std::invalid_argument("bath dimension must be a power of two");
      }
      int system_sites = static_cast<int>(spec.system_bits.size());
      Index expected = (Index{1} << system_sites) * spec.bath_dim;
      if (expected != dim) {
        throw std::invalid_argument("system bits + bath dimension give " +
                                    std::to_string(expected) + " states, expected " +
                                    std::to_string(dim));
      }
      std::uint64_t sys_index = bits_to_index(spec.system_bits, system_sites, "system state");
      state.pure = false;
      state.rho = Matrix::Zero(dim, dim);
      double w = 1.0 / static_cast<double>(spec.bath_dim);
      for (Index t = 0; t < spec.bath_dim; ++t) {
        Index idx = static_cast<Index>(sys_index) * spec.bath_dim + t;
        state.rho(idx, idx) = w;
      }
      break;
    }
  }
  return state;
}

std::vector<double> sector_weights(const QuantumState& state, int sites) {
  check_sites(sites);
  Index dim = Index{1} << sites;
  if (state.dimension() != dim) {
    throw std::invalid_argument("sector weights require a full-register state");
  }
  std::vector<double> weights(static_cast<std::size_t>(sites) + 1, 0.0);
  for (Index i = 0; i < dim; ++i) {
    double p = state.pure ? std::norm(state.ket(i)) : state.rho(i, i).real();
    weights[static_cast<std::size_t>(std::popcount(static_cast<std::uint64_t>(i)))] += p;
  }
  return weights;
}

}  // namespace eqsim
