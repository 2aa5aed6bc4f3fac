#include "doctest.h"

#include <unsupported/Eigen/KroneckerProduct>

#include "eqsim/model.hpp"

using namespace eqsim;

namespace {

Matrix pauli2(char p) {
  Matrix m(2, 2);
  switch (p) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
  }
  return m;
}

// Kronecker build with site 0 as the leftmost (most significant) factor.
Matrix kron_string(const std::string& s) {
  Matrix m = pauli2(s[0]);
  for (std::size_t i = 1; i < s.size(); ++i) {
    m = Eigen::kroneckerProduct(m, pauli2(s[i])).eval();
  }
  return m;
}

Matrix kron_terms(const std::vector<PauliTerm>& terms, int sites) {
  Index d = Index{1} << sites;
  Matrix m = Matrix::Zero(d, d);
  for (const auto& t : terms) m += t.coefficient * kron_string(t.pauli);
  return m;
}

}  // namespace

TEST_CASE("pauli strings match kronecker products") {
  for (const char* s : {"X", "Y", "Z", "XY", "ZI", "IZ", "XYZ", "YIX", "ZZI"}) {
    std::string str(s);
    Matrix got = pauli_string_matrix({{1.0, str}}, static_cast<int>(str.size()));
    Matrix want = kron_string(str);
    CHECK((got - want).norm() == doctest::Approx(0.0).epsilon(1e-14));
  }
  // complex coefficients and summation
  std::vector<PauliTerm> terms{{Complex(0.5, 0.25), "XY"}, {Complex(-1.0, 0.0), "ZZ"}};
  CHECK((pauli_string_matrix(terms, 2) - kron_terms(terms, 2)).norm() < 1e-14);
}

TEST_CASE("site 0 is the most significant bit") {
  // Z on site 0 of two sites: diag(+1,+1,-1,-1) over indices 00,01,10,11.
  Matrix z0 = pauli_string_matrix({{1.0, "ZI"}}, 2);
  CHECK(z0(0, 0).real() == doctest::Approx(1.0));
  CHECK(z0(1, 1).real() == doctest::Approx(1.0));
  CHECK(z0(2, 2).real() == doctest::Approx(-1.0));
  CHECK(z0(3, 3).real() == doctest::Approx(-1.0));
}

TEST_CASE("xxz hamiltonian small cases") {
  SpinChainSpec spec;
  spec.sites = 2;
  spec.jxy = 2.0;
  spec.jz = 0.7;
  Matrix want = kron_terms({{1.0, "XX"}, {1.0, "YY"}}, 2) * (spec.jxy / 2.0) +
                kron_terms({{1.0, "ZZ"}}, 2) * spec.jz;
  CHECK((build_hamiltonian(spec) - want).norm() < 1e-13);

  spec.sites = 4;
  spec.j2 = 0.5;
  Matrix h = build_hamiltonian(spec);
  Matrix expect = Matrix::Zero(16, 16);
  auto bond = [&](const char* op, int i, int j, double coeff) {
    std::string s(4, 'I');
    s[i] = op[0];
    s[j] = op[1];
    expect += coeff * kron_string(s);
  };
  for (int i = 0; i + 1 < 4; ++i) {
    bond("XX", i, i + 1, spec.jxy / 2);
    bond("YY", i, i + 1, spec.jxy / 2);
    bond("ZZ", i, i + 1, spec.jz);
  }
  for (int i = 0; i + 2 < 4; ++i) {
    bond("XX", i, i + 2, spec.j2 / 2);
    bond("YY", i, i + 2, spec.j2 / 2);
    bond("ZZ", i, i + 2, spec.j2);
  }
  CHECK((h - expect).norm() < 1e-13);
}

TEST_CASE("periodic boundary adds the wrap bonds once") {
  SpinChainSpec spec;
  spec.sites = 3;
  spec.jxy = 1.0;
  spec.jz = 1.0;
  spec.boundary = BoundaryKind::periodic;
  Matrix h = build_hamiltonian(spec);
  Matrix expect = Matrix::Zero(8, 8);
  auto bond = [&](int i, int j) {
    for (const char* op : {"XX", "YY", "ZZ"}) {
      std::string s(3, 'I');
      s[i] = op[0];
      s[j] = op[1];
      expect += (op[0] == 'Z' ? 1.0 : 0.5) * kron_string(s);
    }
  };
  bond(0, 1);
  bond(1, 2);
  bond(2, 0);
  CHECK((h - expect).norm() < 1e-13);
}

TEST_CASE("transverse ising") {
  SpinChainSpec spec;
  spec.sites = 2;
  spec.model = ModelKind::transverse_ising;
  spec.j = 1.3;
  spec.h = 0.4;
  Matrix want = 1.3 * kron_string("ZZ") + 0.4 * (kron_string("XI") + kron_string("IX"));
  CHECK((build_hamiltonian(spec) - want).norm() < 1e-13);
}

TEST_CASE("sector basis enumerates fixed-popcount states ascending") {
  SectorBasis b = sector_basis(4, 0);  // 2 up, 2 down
  std::vector<std::uint64_t> want{3, 5, 6, 9, 10, 12};
  CHECK(b.states == want);
  CHECK(b.dimension() == 6);
  CHECK(sector_basis(4, 4).states == std::vector<std::uint64_t>{0});
  CHECK(sector_basis(4, -4).states == std::vector<std::uint64_t>{15});
  CHECK_THROWS(sector_basis(4, 1));  // parity mismatch
}

TEST_CASE("sector hamiltonian equals restriction of the full one") {
  SpinChainSpec full;
  full.sites = 5;
  full.jxy = 1.0;
  full.jz = 0.8;
  full.j2 = 0.3;
  Matrix hf = build_hamiltonian(full);

  SpinChainSpec sec = full;
  sec.sector_sz = 1;  // popcount 2
  Matrix hs = build_hamiltonian(sec);
  SectorBasis basis = sector_basis(5, 1);
  REQUIRE(hs.rows() == basis.dimension());
  for (Index r = 0; r < basis.dimension(); ++r) {
    for (Index c = 0; c < basis.dimension(); ++c) {
      CHECK(std::abs(hs(r, c) - hf(static_cast<Index>(basis.states[static_cast<std::size_t>(r)]),
                                   static_cast<Index>(basis.states[static_cast<std::size_t>(c)]))) <
            1e-13);
    }
  }
}

TEST_CASE("sector-violating operators are rejected") {
  SpinChainSpec spec;
  spec.sites = 4;
  spec.sector_sz = 0;
  ObservableSpec obs;
  obs.kind = ObservableKind::site_pauli;
  obs.site = 1;
  obs.axis = 'x';  // X does not preserve total Z
  CHECK_THROWS(build_observable(obs, spec));
  obs.axis = 'z';
  CHECK_NOTHROW(build_observable(obs, spec));
}

TEST_CASE("disorder fields are deterministic in the seed") {
  SpinChainSpec spec;
  spec.sites = 4;
  spec.disorder = DisorderSpec{2.0, 42};
  Matrix h1 = build_hamiltonian(spec);
  Matrix h2 = build_hamiltonian(spec);
  CHECK((h1 - h2).norm() == 0.0);
  spec.disorder->seed = 43;
  Matrix h3 = build_hamiltonian(spec);
  CHECK((h1 - h3).norm() > 1e-8);

  // fields bounded by the strength: the diagonal shift relative to the clean
  // model is a sum of 4 fields, each in [-2,2]
  SpinChainSpec clean = spec;
  clean.disorder.reset();
  Matrix delta = h3 - build_hamiltonian(clean);
  CHECK(delta.cwiseAbs().maxCoeff() <= 8.0 + 1e-12);
  // off-diagonal untouched
  Matrix offdiag = delta;
  offdiag.diagonal().setZero();
  CHECK(offdiag.norm() == 0.0);
}

TEST_CASE("imbalance observable") {
  ObservableSpec obs;
  obs.kind = ObservableKind::imbalance;
  Matrix a = build_observable(obs, 4);
  // (sum over odd sites of Z - sum over even sites of Z)/N; on |0101> the
  // even sites hold 0 (Z=+1) and odd sites hold 1 (Z=-1): value -1.
  Index cdw_index = 0b0101;
  CHECK(a(cdw_index, cdw_index).real() == doctest::Approx(-1.0));
  Index anti = 0b1010;
  CHECK(a(anti, anti).real() == doctest::Approx(1.0));
  Matrix per_site = kron_string("ZIII") * (-0.25) + kron_string("IZII") * 0.25 -
                    0.25 * kron_string("IIZI") + 0.25 * kron_string("IIIZ");
  CHECK((a - per_site).norm() < 1e-13);
}

TEST_CASE("magnetization and projector observables") {
  ObservableSpec obs;
  obs.kind = ObservableKind::magnetization;
  Matrix m = build_observable(obs, 2);
  Matrix want = (kron_string("ZI") + kron_string("IZ")) / 2.0;
  CHECK((m - want).norm() < 1e-13);

  obs.kind = ObservableKind::projector;
  obs.projector_states = {0, 3};
  Matrix p = build_observable(obs, 2);
  CHECK(p(0, 0).real() == doctest::Approx(1.0));
  CHECK(p(3, 3).real() == doctest::Approx(1.0));
  CHECK(p.diagonal().sum().real() == doctest::Approx(2.0));
  CHECK((p * p - p).norm() < 1e-14);
}

TEST_CASE("product and cdw states") {
  SpinChainSpec spec;
  spec.sites = 3;
  StateSpec st;
  st.kind = StateKind::product;
  st.product_bits = "010";
  QuantumState q = build_state(st, spec);
  REQUIRE(q.pure);
  CHECK(std::abs(q.ket(0b010) - Complex(1.0)) < 1e-15);
  CHECK(q.ket.norm() == doctest::Approx(1.0));

  st.kind = StateKind::cdw;
  QuantumState c = build_state(st, spec);
  CHECK(std::abs(c.ket(0b010) - Complex(1.0)) < 1e-15);  // |010>

  SpinChainSpec sec = spec;
  sec.sites = 4;
  sec.sector_sz = 0;
  StateSpec cs;
  cs.kind = StateKind::cdw;
  QuantumState qs = build_state(cs, sec);
  // sector basis of N=4, sz=0 lists 0101=5 at position 1
  REQUIRE(qs.ket.size() == 6);
  CHECK(std::abs(qs.ket(1) - Complex(1.0)) < 1e-15);
}

TEST_CASE("amplitude vectors are normalized, zero vector rejected") {
  SpinChainSpec spec;
  spec.sites = 2;
  StateSpec st;
  st.kind = StateKind::amplitude_vector;
  st.amplitudes = Vector::Zero(4);
  CHECK_THROWS(build_state(st, spec));
  st.amplitudes(0) = 3.0;
  st.amplitudes(2) = Complex(0.0, 4.0);
  QuantumState q = build_state(st, spec);
  CHECK(q.ket.norm() == doctest::Approx(1.0));
  CHECK(std::abs(q.ket(0)) == doctest::Approx(0.6));
}

TEST_CASE("mixed system-bath state") {
  SpinChainSpec spec;
  spec.sites = 3;
  StateSpec st;
  st.kind = StateKind::mixed_system_bath;
  st.system_bits = "0";
  st.bath_dim = 4;
  QuantumState q = build_state(st, spec);
  REQUIRE(!q.pure);
  REQUIRE(q.rho.rows() == 8);
  for (Index i = 0; i < 8; ++i) {
    CHECK(q.rho(i, i).real() == doctest::Approx(i < 4 ? 0.25 : 0.0));
  }
  CHECK(q.rho.diagonal().sum().real() == doctest::Approx(1.0));
  Matrix offdiag = q.rho;
  offdiag.diagonal().setZero();
  CHECK(offdiag.norm() == 0.0);
}

TEST_CASE("sector weights") {
  SpinChainSpec spec;
  spec.sites = 4;
  StateSpec st;
  st.kind = StateKind::cdw;
  QuantumState q = build_state(st, spec);
  auto w = sector_weights(q, 4);
  REQUIRE(w.size() == 5);
  CHECK(w[2] == doctest::Approx(1.0));  // popcount(0101) = 2
  CHECK(w[0] == doctest::Approx(0.0));
}

TEST_CASE("custom terms round trip through the builders") {
  SpinChainSpec spec;
  spec.sites = 2;
  spec.model = ModelKind::custom;
  spec.custom_terms = {{0.5, "XZ"}, {Complex(0.0, 0.0), "II"}, {-0.25, "YY"}};
  Matrix h = build_hamiltonian(spec);
  CHECK((h - kron_terms(spec.custom_terms, 2)).norm() < 1e-14);
  CHECK(hermiticity_error(h) < 1e-14);
}
