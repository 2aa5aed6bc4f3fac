#include "doctest.h"

#include <cmath>
#include <numbers>

#include "eqsim/dynamics.hpp"
#include "eqsim/model.hpp"
#include "eqsim/rng.hpp"
#include "eqsim/spectral.hpp"
#include "oracles.hpp"

using namespace eqsim;

namespace {

struct Fixture {
  Matrix h;
  SpectralDecomposition dec;
  GapCatalog cat;
  QuantumState state;
  Matrix a;
  FluctuationData fd;
};

Fixture make_chain_fixture(int sites, bool sector, bool mixed = false) {
  SpinChainSpec spec;
  spec.sites = sites;
  spec.jxy = 1.0;
  spec.jz = 1.0;
  spec.j2 = 0.5;
  if (sector) spec.sector_sz = sites % 2;
  Fixture f;
  f.h = build_hamiltonian(spec);
  f.dec = diagonalize(f.h);
  f.cat = gap_catalog(f.dec);
  StateSpec ss;
  if (mixed) {
    ss.kind = StateKind::mixed_system_bath;
    ss.system_bits = "0";
    ss.bath_dim = Index{1} << (sites - 1);
  } else {
    ss.kind = StateKind::cdw;
  }
  f.state = build_state(ss, spec);
  ObservableSpec os;
  os.kind = ObservableKind::imbalance;
  f.a = build_observable(os, spec);
  f.fd = fluctuation_data(f.dec, f.cat, f.state, f.a);
  return f;
}

}  // namespace

TEST_CASE("time average kernel") {
  CHECK(time_average_kernel(0.0) == Complex(1.0, 0.0));
  for (double x : {1e-6, 1e-5, 9.9e-5, 1.001e-4, 1e-3, 0.5, 3.0, 100.0}) {
    // cancellation-free form of e^{-ix} - 1 = -2 sin^2(x/2) - i sin x
    Complex exact =
        Complex(-2.0 * std::sin(x / 2) * std::sin(x / 2), -std::sin(x)) / Complex(0.0, -x);
    Complex got = time_average_kernel(x);
    CHECK(std::abs(got - exact) < 1e-14);
    CHECK(std::abs(time_average_kernel(-x) - std::conj(got)) < 1e-16);
    CHECK(std::abs(got) <= 1.0 + 1e-12);
  }
}

TEST_CASE("eigenbasis propagation matches the pade exponential, pure state") {
  Fixture f = make_chain_fixture(4, false);
  Propagator prop(f.dec, f.state);
  Matrix a_eig = prop.observable_in_eigenbasis(f.a);
  Rng rng(5);
  for (int i = 0; i < 25; ++i) {
    double t = 8.0 * rng.uniform();
    Vector psi_t = oracle::evolve_ket(f.h, f.state.ket, t);
    double want = oracle::expectation(f.a, psi_t);
    CHECK(prop.expectation(a_eig, t) == doctest::Approx(want).epsilon(1e-10));
  }
}

TEST_CASE("eigenbasis propagation matches the pade exponential, mixed state") {
  Fixture f = make_chain_fixture(3, false, true);
  Propagator prop(f.dec, f.state);
  Matrix a_eig = prop.observable_in_eigenbasis(f.a);
  Rng rng(6);
  for (int i = 0; i < 15; ++i) {
    double t = 6.0 * rng.uniform();
    Matrix rho_t = oracle::evolve_rho(f.h, f.state.rho, t);
    double want = oracle::expectation(f.a, rho_t);
    CHECK(prop.expectation(a_eig, t) == doctest::Approx(want).epsilon(1e-10));
  }
}

TEST_CASE("evolve_expectation equals the propagator and is thread independent") {
  Fixture f = make_chain_fixture(4, true);
  std::vector<double> times;
  for (int i = 0; i < 37; ++i) times.push_back(0.21 * i);
  auto t1 = evolve_expectation(f.dec, f.state, f.a, times, 1);
  auto t4 = evolve_expectation(f.dec, f.state, f.a, times, 4);
  REQUIRE(t1.size() == times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    CHECK(t1[i] == t4[i]);  // bitwise: fixed chunk reduction
  }
  Propagator prop(f.dec, f.state);
  Matrix a_eig = prop.observable_in_eigenbasis(f.a);
  for (std::size_t i = 0; i < times.size(); i += 5) {
    CHECK(t1[i] == doctest::Approx(prop.expectation(a_eig, times[i])).epsilon(1e-12));
  }
}

TEST_CASE("survival probability against the exponential oracle") {
  Fixture f = make_chain_fixture(3, false);
  Propagator prop(f.dec, f.state);
  for (double t : {0.0, 0.4, 1.3, 2.9}) {
    Vector psi_t = oracle::evolve_ket(f.h, f.state.ket, t);
    double want = std::norm(psi_t.dot(f.state.ket));
    CHECK(prop.survival_probability(t) == doctest::Approx(want).epsilon(1e-10));
  }
}

TEST_CASE("dephasing map: idempotent, commutes with H, matches quadrature") {
  Fixture f = make_chain_fixture(3, false);
  Matrix omega = dephase(f.dec, f.state);
  CHECK(omega.diagonal().sum().real() == doctest::Approx(1.0));
  CHECK(hermiticity_error(omega) < 1e-12);
  CHECK((omega * f.h - f.h * omega).norm() < 1e-10);

  QuantumState omega_state;
  omega_state.pure = false;
  omega_state.rho = omega;
  CHECK((dephase(f.dec, omega_state) - omega).norm() < 1e-12);

  // long-horizon quadrature converges to the dephased state
  Matrix quad = oracle::dephase_quadrature(f.h, f.state.density(), 4e3, 2000);
  CHECK((quad - omega).norm() < 5e-3);

  // equilibrium expectation value agrees with the fluctuation bookkeeping
  CHECK((omega * f.a).trace().real() == doctest::Approx(f.fd.equilibrium_value).epsilon(1e-12));
}

TEST_CASE("effective dimension on crafted superpositions") {
  Matrix h = Matrix::Zero(6, 6);
  h.diagonal() << 0.0, 1.0, 2.0, 3.0, 4.0, 5.0;
  SpectralDecomposition dec = diagonalize(h);

  QuantumState eig;
  eig.pure = true;
  eig.ket = Vector::Zero(6);
  eig.ket(2) = 1.0;
  EffectiveDimension e1 = effective_dimension(dec, eig);
  CHECK(e1.d_eff == doctest::Approx(1.0));
  CHECK(e1.ipr == doctest::Approx(1.0));

  QuantumState sup;
  sup.pure = true;
  sup.ket = Vector::Zero(6);
  for (int k = 0; k < 3; ++k) sup.ket(k) = 1.0 / std::sqrt(3.0);
  EffectiveDimension e3 = effective_dimension(dec, sup);
  CHECK(e3.d_eff == doctest::Approx(3.0));
  CHECK(e3.ipr == doctest::Approx(1.0 / 3.0));

  RealVector pops = level_populations(dec, sup);
  CHECK(pops.sum() == doctest::Approx(1.0));
  CHECK(pops(0) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("fluctuation data identities") {
  Fixture f = make_chain_fixture(4, true);
  // delta A(0) equals the initial deviation, and the trajectory matches the
  // expectation value minus equilibrium everywhere
  Propagator prop(f.dec, f.state);
  Matrix a_eig = prop.observable_in_eigenbasis(f.a);
  std::vector<double> times{0.0, 0.17, 0.9, 2.2, 7.7};
  std::vector<double> traj = fluctuation_trajectory(f.fd, times, 1);
  CHECK(traj[0] == doctest::Approx(f.fd.initial_deviation).epsilon(1e-10));
  for (std::size_t i = 0; i < times.size(); ++i) {
    double want = prop.expectation(a_eig, times[i]) - f.fd.equilibrium_value;
    CHECK(traj[i] == doctest::Approx(want).epsilon(1e-9));
  }
  // z-weights regroup the pair weights exactly
  double sum_z = 0.0;
  for (const auto& z : f.fd.z) sum_z += std::abs(z);
  CHECK(f.fd.q_total == doctest::Approx(f.fd.pair_weights.empty()
                                            ? 0.0
                                            : [&] {
                                                double s = 0.0;
                                                for (double w : f.fd.pair_weights) s += w;
                                                return s;
                                              }()));
  CHECK(time_average_infinite(f.fd) == doctest::Approx([&] {
          double s = 0.0;
          for (const auto& z : f.fd.z) s += std::norm(z);
          return s;
        }()));
}

TEST_CASE("finite-horizon average: closed form vs quadrature vs sampling") {
  Fixture f = make_chain_fixture(4, true);
  for (double horizon : {3.0, 17.0}) {
    FiniteAverageOptions closed;
    closed.threads = 1;
    FiniteAverageResult exact = time_average_finite(f.fd, horizon, closed);
    REQUIRE(!exact.sampled);

    double quad = oracle::quadrature_average(
        [&](double t) {
          std::vector<double> one{t};
          double dev = fluctuation_trajectory(f.fd, one, 1)[0];
          return dev * dev;
        },
        horizon, 200000);
    CHECK(exact.value == doctest::Approx(quad).epsilon(1e-4));

    FiniteAverageOptions forced;
    forced.pair_budget = 1;  // force the stratified sampler
    forced.samples = 20000;
    FiniteAverageResult sampled = time_average_finite(f.fd, horizon, forced);
    REQUIRE(sampled.sampled);
    CHECK(sampled.value ==
          doctest::Approx(exact.value).epsilon(std::max(1e-3, 5 * sampled.error_estimate)));
  }
}

TEST_CASE("finite-horizon average approaches the infinite-time value") {
  Fixture f = make_chain_fixture(4, true);
  FiniteAverageOptions opts;
  FiniteAverageResult avg = time_average_finite(f.fd, 1e8, opts);
  CHECK(avg.value == doctest::Approx(time_average_infinite(f.fd)).epsilon(1e-5));
}

TEST_CASE("finite-horizon average is thread independent bitwise") {
  Fixture f = make_chain_fixture(5, true);
  FiniteAverageOptions o1, o4;
  o1.threads = 1;
  o4.threads = 4;
  CHECK(time_average_finite(f.fd, 12.5, o1).value == time_average_finite(f.fd, 12.5, o4).value);
}

TEST_CASE("measurement decomposition reproduces the observable") {
  Fixture f = make_chain_fixture(4, true);
  Measurement meas = measure_observable(f.a);
  Matrix rebuilt = Matrix::Zero(f.a.rows(), f.a.cols());
  Matrix complete = Matrix::Zero(f.a.rows(), f.a.cols());
  for (std::size_t k = 0; k < meas.outcomes.size(); ++k) {
    rebuilt += meas.outcomes[k] * meas.projectors[k];
    complete += meas.projectors[k];
    for (std::size_t l = 0; l < k; ++l) {
      CHECK((meas.projectors[k] * meas.projectors[l]).norm() < 1e-10);
    }
  }
  CHECK((rebuilt - f.a).norm() < 1e-9);
  CHECK((complete - Matrix::Identity(f.a.rows(), f.a.cols())).norm() < 1e-10);
  // imbalance on the sector has a handful of distinct outcomes, not d of them
  CHECK(meas.n_outcomes() >= 2);
  CHECK(meas.n_outcomes() <= 5);
}

TEST_CASE("distinguishability basics") {
  Matrix z(2, 2);
  z << 1, 0, 0, -1;
  Measurement meas = measure_observable(z);
  Matrix up = Matrix::Zero(2, 2), down = Matrix::Zero(2, 2);
  up(0, 0) = 1.0;
  down(1, 1) = 1.0;
  CHECK(distinguishability(up, up, meas) == doctest::Approx(0.0));
  CHECK(distinguishability(up, down, meas) == doctest::Approx(1.0));
  Matrix half = 0.5 * up + 0.5 * down;
  CHECK(distinguishability(up, half, meas) == doctest::Approx(0.5));
}

TEST_CASE("sampled averages are deterministic and bounded") {
  Fixture f = make_chain_fixture(4, true);
  Measurement meas = measure_observable(f.a);
  SampledAverageOptions o1, o4;
  o1.samples = 256;
  o4.samples = 256;
  o4.threads = 4;
  double d1 = sampled_distinguishability_average(f.dec, f.state, meas, 50.0, o1);
  double d4 = sampled_distinguishability_average(f.dec, f.state, meas, 50.0, o4);
  CHECK(d1 == d4);
  CHECK(d1 >= 0.0);
  CHECK(d1 <= 1.0);
  double s1 = sampled_survival_distinguishability_average(f.dec, f.state, 50.0, o1);
  CHECK(s1 >= 0.0);
  CHECK(s1 <= 1.0);
}

TEST_CASE("survival distinguishability vanishes for an eigenstate") {
  Matrix h = Matrix::Zero(4, 4);
  h.diagonal() << 0.0, 1.0, 2.5, 4.0;
  SpectralDecomposition dec = diagonalize(h);
  QuantumState eig;
  eig.pure = true;
  eig.ket = Vector::Zero(4);
  eig.ket(1) = 1.0;
  SampledAverageOptions opts;
  opts.samples = 64;
  CHECK(sampled_survival_distinguishability_average(dec, eig, 10.0, opts) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("partial trace oracles") {
  // Bell state: both marginals are maximally mixed
  Matrix bell = Matrix::Zero(4, 4);
  Vector b(4);
  b << 1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0);
  bell = b * b.adjoint();
  std::vector<int> site0{0}, site1{1};
  Matrix left = partial_trace(bell, site0, 2);
  Matrix right = partial_trace(bell, site1, 2);
  CHECK((left - Matrix::Identity(2, 2) / 2.0).norm() < 1e-14);
  CHECK((right - Matrix::Identity(2, 2) / 2.0).norm() < 1e-14);

  // product state factors exactly
  Vector u(2), v(2);
  u << 0.6, 0.8;
  v << Complex(0.0, 1.0) / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  Vector prod(4);
  prod << u(0) * v(0), u(0) * v(1), u(1) * v(0), u(1) * v(1);
  Matrix rho = prod * prod.adjoint();
  CHECK((partial_trace(rho, site0, 2) - u * u.adjoint()).norm() < 1e-14);
  CHECK((partial_trace(rho, site1, 2) - v * v.adjoint()).norm() < 1e-14);
  CHECK(partial_trace(rho, site0, 2).trace().real() == doctest::Approx(1.0));

  // partial_trace_first agrees with the site interface
  Matrix first = partial_trace_first(rho, 2, 2);
  CHECK((first - partial_trace(rho, site0, 2)).norm() < 1e-14);

  // three sites, keep a pair
  Fixture f = make_chain_fixture(3, false);
  Matrix full = f.state.density();
  std::vector<int> pair01{0, 1};
  Matrix keep01 = partial_trace(full, pair01, 3);
  CHECK(keep01.rows() == 4);
  CHECK(keep01.trace().real() == doctest::Approx(1.0));
}

TEST_CASE("trace distance") {
  Matrix a = Matrix::Zero(2, 2), b = Matrix::Zero(2, 2);
  a(0, 0) = 1.0;
  b(1, 1) = 1.0;
  CHECK(trace_distance(a, b) == doctest::Approx(1.0));
  CHECK(trace_distance(a, a) == doctest::Approx(0.0));
  Matrix c = Matrix::Zero(2, 2);
  c.diagonal() << 0.75, 0.25;
  CHECK(trace_distance(a, c) == doctest::Approx(0.25));  // classical TV distance
}

TEST_CASE("cloud snapshots: the points sum to the instantaneous deviation") {
  Fixture f = make_chain_fixture(4, true);
  for (double t : {0.0, 0.8, 3.0}) {
    CloudSnapshot raw = cloud_snapshot(f.fd, std::numeric_limits<double>::infinity(), t);
    Complex total = 0.0;
    for (const auto& z : raw.amplitudes) total += z;
    std::vector<double> one{t};
    double dev = fluctuation_trajectory(f.fd, one, 1)[0];
    CHECK(std::abs(total - raw.total) < 1e-15);
    CHECK(std::abs(total.real() - dev) < 1e-12);
    CHECK(std::abs(total.imag()) < 1e-12);  // deviation of a hermitian observable is real

    CloudSnapshot smooth = cloud_snapshot(f.fd, 33.0, t);
    Complex stotal = 0.0;
    for (const auto& z : smooth.amplitudes) stotal += z;
    CHECK(std::abs(stotal.real() - dev) < 1e-12);  // kernel normalization is exact
    CHECK(std::is_sorted(smooth.grid.begin(), smooth.grid.end()));
    CHECK(smooth.grid.size() >= raw.grid.size());
  }
}

TEST_CASE("circular variance of synthetic clouds") {
  CloudSnapshot one;
  one.grid = {1.0};
  one.amplitudes = {Complex(0.3, 0.0)};
  CHECK(circular_variance(one) == doctest::Approx(0.0));

  CloudSnapshot opposite;
  opposite.grid = {1.0, 2.0};
  opposite.amplitudes = {Complex(0.3, 0.0), Complex(-0.3, 0.0)};
  CHECK(circular_variance(opposite) == doctest::Approx(1.0));

  CloudSnapshot quarter;
  quarter.grid = {1.0, 2.0};
  quarter.amplitudes = {Complex(0.2, 0.0), Complex(0.0, 0.2)};
  // mean resultant length of phases {0, pi/2} = |(1+i)/2| = 1/sqrt(2)
  CHECK(circular_variance(quarter) == doctest::Approx(1.0 - 1.0 / std::sqrt(2.0)));
}

TEST_CASE("gaussian envelope fit recovers a synthetic decay time") {
  // dense gaps drawn from N(0, s^2) with equal weights: |delta A(t)| follows
  // v0 exp(-s^2 t^2 / 2), whose 1/e time is sqrt(2)/s
  double s = 1.3;
  Rng rng(17);
  FluctuationData fd;
  int m = 4000;
  fd.gap_values.resize(m);
  fd.z.resize(m);
  for (int i = 0; i < m; ++i) {
    fd.gap_values[i] = s * rng.gaussian();
    fd.z[i] = Complex(1.0 / m, 0.0);
  }
  fd.initial_deviation = 1.0;
  std::vector<double> times;
  for (int i = 0; i <= 300; ++i) times.push_back(4.0 * i / (300.0 * s));
  std::vector<double> traj = fluctuation_trajectory(fd, times, 1);
  std::vector<double> abs_traj(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) abs_traj[i] = std::abs(traj[i]);
  double tau = fit_gaussian_tau(times, abs_traj);
  CHECK(tau == doctest::Approx(std::numbers::sqrt2 / s).epsilon(0.15));

  std::vector<double> env = gaussian_envelope(1.0, tau, times);
  CHECK(env[0] == doctest::Approx(1.0));
  CHECK(env.back() < 0.01);

  // no decay: flat signal yields tau = 0
  std::vector<double> flat(times.size(), 0.7);
  CHECK(fit_gaussian_tau(times, flat) == 0.0);
}

TEST_CASE("pair gap concentration") {
  Fixture f = make_chain_fixture(4, true);
  double xi_small = pair_gap_concentration(f.fd, 1e-6);
  double xi_large = pair_gap_concentration(f.fd, 1e6);
  CHECK(xi_small <= xi_large + 1e-12);
  CHECK(xi_large == doctest::Approx(1.0));
  CHECK(xi_small > 0.0);

  FluctuationData empty;
  CHECK(pair_gap_concentration(empty, 1.0) == doctest::Approx(1.0));
}
