#include "eqsim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "eqsim/parallel.hpp"

namespace eqsim {

namespace {

Vector phase_vector(const RealVector& energies, double t) {
  Vector u(energies.size());
  for (Index i = 0; i < energies.size(); ++i) {
    u(i) = std::polar(1.0, -energies(i) * t);
  }
  return u;
}

// Fixed-size work chunks make parallel reductions independent of the thread
// count: slot i always holds the same partial sum, and slots are combined in
// index order.
constexpr std::int64_t reduction_chunk = 512;

}  // namespace

Complex time_average_kernel(double x) {
  if (std::abs(x) < 1e-4) {
    Complex ix(0.0, -x);
    return 1.0 + ix / 2.0 + ix * ix / 6.0 + ix * ix * ix / 24.0;
  }
  // e^{-ix} - 1 = -2 sin^2(x/2) - i sin x, free of cancellation near x ~ 0
  double s = std::sin(x / 2.0);
  return Complex(-2.0 * s * s, -std::sin(x)) / Complex(0.0, -x);
}

Propagator::Propagator(const SpectralDecomposition& dec, const QuantumState& state)
    : dec_(&dec) {
  if (state.dimension() != dec.dimension()) {
    throw std::invalid_argument("state dimension does not match the decomposition");
  }
  energies_ = dec.column_energies();
  pure_ = state.pure;
  if (pure_) {
    amplitudes_ = dec.eigenbasis.adjoint() * state.ket;
  } else {
    density_ = dec.eigenbasis.adjoint() * state.rho * dec.eigenbasis;
  }
}

Matrix Propagator::observable_in_eigenbasis(const Matrix& a) const {
  return dec_->eigenbasis.adjoint() * a * dec_->eigenbasis;
}

double Propagator::expectation(const Matrix& a_eig, double t) const {
  Vector u = phase_vector(energies_, t);
  if (pure_) {
    Vector w = amplitudes_.cwiseProduct(u);
    return w.dot(a_eig * w).real();
  }
  // tr(rho(t) A) = sum_ij u_i rho_ij conj(u_j) A_ji
  Matrix m = density_.cwiseProduct(a_eig.transpose());
  return (u.transpose() * (m * u.conjugate()))(0, 0).real();
}

double Propagator::survival_probability(double t) const {
  if (!pure_) throw std::invalid_argument("survival probability needs a pure state");
  Complex overlap = 0.0;
  for (Index i = 0; i < energies_.size(); ++i) {
    overlap += std::norm(amplitudes_(i)) * std::polar(1.0, -energies_(i) * t);
  }
  return std::norm(overlap);
}

std::vector<double> evolve_expectation(const SpectralDecomposition& dec, const QuantumState& state,
                                       const Matrix& a, std::span<const double> times,
                                       int threads) {
  Propagator prop(dec, state);
  Matrix a_eig = dec.eigenbasis.adjoint() * a * dec.eigenbasis;
  std::vector<double> out(times.size());
  parallel_for(static_cast<std::int64_t>(times.size()), threads,
               [&](std::int64_t begin, std::int64_t end) {
                 for (std::int64_t i = begin; i < end; ++i) {
                   out[static_cast<std::size_t>(i)] =
                       prop.expectation(a_eig, times[static_cast<std::size_t>(i)]);
                 }
               });
  return out;
}

RealVector level_populations(const SpectralDecomposition& dec, const QuantumState& state) {
  if (state.dimension() != dec.dimension()) {
    throw std::invalid_argument("state dimension does not match the decomposition");
  }
  RealVector p(dec.levels());
  for (Index k = 0; k < dec.levels(); ++k) {
    Index begin = dec.offsets[static_cast<std::size_t>(k)];
    Index len = dec.multiplicities[static_cast<std::size_t>(k)];
    if (state.pure) {
      p(k) = (dec.eigenbasis.middleCols(begin, len).adjoint() * state.ket).squaredNorm();
    } else {
      auto block = dec.eigenbasis.middleCols(begin, len);
      p(k) = (block.adjoint() * state.rho * block).real().trace();
    }
  }
  return p;
}

Matrix dephase(const SpectralDecomposition& dec, const QuantumState& state) {
  if (state.dimension() != dec.dimension()) {
    throw std::invalid_argument("state dimension does not match the decomposition");
  }
  Matrix rho_eig;
  if (state.pure) {
    Vector c = dec.eigenbasis.adjoint() * state.ket;
    rho_eig = c * c.adjoint();
  } else {
    rho_eig = dec.eigenbasis.adjoint() * state.rho * dec.eigenbasis;
  }
  Matrix blocked = Matrix::Zero(dec.dimension(), dec.dimension());
  for (Index k = 0; k < dec.levels(); ++k) {
    Index begin = dec.offsets[static_cast<std::size_t>(k)];
    Index len = dec.multiplicities[static_cast<std::size_t>(k)];
    blocked.block(begin, begin, len, len) = rho_eig.block(begin, begin, len, len);
  }
  return dec.eigenbasis * blocked * dec.eigenbasis.adjoint();
}

EffectiveDimension effective_dimension(const SpectralDecomposition& dec,
                                       const QuantumState& state) {
  RealVector p = level_populations(dec, state);
  EffectiveDimension out;
  out.ipr = p.squaredNorm();
  out.d_eff = out.ipr > 0.0 ? 1.0 / out.ipr : std::numeric_limits<double>::infinity();
  return out;
}

FluctuationData fluctuation_data(const SpectralDecomposition& dec, const GapCatalog& catalog,
                                 const QuantumState& state, const Matrix& a) {
  if (state.dimension() != dec.dimension() || a.rows() != dec.dimension()) {
    throw std::invalid_argument("fluctuation data: dimension mismatch");
  }
  Index dim = dec.dimension();
  Index levels = dec.levels();
  Matrix a_eig = dec.eigenbasis.adjoint() * a * dec.eigenbasis;

  // m_ij = rho_ij a_ji in the eigenbasis; v_{kl} = sum of m over the (k,l)
  // level block.
  Matrix m(dim, dim);
  if (state.pure) {
    Vector c = dec.eigenbasis.adjoint() * state.ket;
    m = a_eig.transpose();
    m = c.asDiagonal() * m;
    m = m * c.conjugate().asDiagonal();
  } else {
    Matrix rho_eig = dec.eigenbasis.adjoint() * state.rho * dec.eigenbasis;
    m = rho_eig.cwiseProduct(a_eig.transpose());
  }

  Matrix level_v = Matrix::Zero(levels, levels);
  for (Index k = 0; k < levels; ++k) {
    for (Index l = 0; l < levels; ++l) {
      level_v(k, l) = m.block(dec.offsets[static_cast<std::size_t>(k)],
                              dec.offsets[static_cast<std::size_t>(l)],
                              dec.multiplicities[static_cast<std::size_t>(k)],
                              dec.multiplicities[static_cast<std::size_t>(l)])
                          .sum();
  }
  }

  FluctuationData fd;
  fd.gap_values = catalog.distinct_gaps;
  fd.z.assign(catalog.distinct_gaps.size(), Complex(0.0, 0.0));
  Complex eq = 0.0;
  Complex initial = 0.0;
  CompensatedSum q_acc;
  CompensatedSum vsq_acc;
  struct PairEntry {
    double gap;
    double weight;  // |v|, normalized later
  };
  std::vector<PairEntry> entries;
  entries.reserve(static_cast<std::size_t>(levels) * (levels - 1));
  for (Index k = 0; k < levels; ++k) {
    for (Index l = 0; l < levels; ++l) {
      if (k == l) {
        eq += level_v(k, k);
        continue;
      }
      Complex v = level_v(k, l);
      int group = catalog.pair_group(k, l);
      fd.z[static_cast<std::size_t>(group)] += v;
      initial += v;
      double mag = std::abs(v);
      q_acc.add(mag);
      vsq_acc.add(mag * mag);
      entries.push_back({dec.distinct_energies(k) - dec.distinct_energies(l), mag});
    }
  }
  fd.equilibrium_value = eq.real();
  fd.initial_deviation = initial.real();
  fd.q_total = q_acc.value();
  fd.sum_v_sq = vsq_acc.value();

  std::sort(entries.begin(), entries.end(),
            [](const PairEntry& a_, const PairEntry& b_) { return a_.gap < b_.gap; });
  fd.pair_gaps.reserve(entries.size());
  fd.pair_weights.reserve(entries.size());
  CompensatedSum mean_acc;
  CompensatedSum second_acc;
  for (const auto& e : entries) {
    double w = fd.q_total > 0.0 ? e.weight / fd.q_total : 0.0;
    fd.pair_gaps.push_back(e.gap);
    fd.pair_weights.push_back(w);
    mean_acc.add(w * e.gap);
    second_acc.add(w * e.gap * e.gap);
  }
  if (fd.q_total > 0.0) {
    double mean = mean_acc.value();
    fd.sigma_g = std::sqrt(std::max(0.0, second_acc.value() - mean * mean));
  }
  return fd;
}

double pair_gap_concentration(const FluctuationData& fd, double width) {
  if (fd.q_total <= 0.0) return 1.0;  // no fluctuations: report full concentration
  return window_concentration(fd.pair_gaps, fd.pair_weights, width);
}

double time_average_infinite(const FluctuationData& fd) {
  CompensatedSum acc;
  for (const Complex& z : fd.z) acc.add(std::norm(z));
  return acc.value();
}

FiniteAverageResult time_average_finite(const FluctuationData& fd, double horizon,
                                        const FiniteAverageOptions& opts) {
  FiniteAverageResult out;
  std::size_t m = fd.z.size();
  if (m == 0) return out;
  if (!(horizon > 0.0)) throw std::invalid_argument("time average horizon must be positive");
  if (std::isinf(horizon)) {
    out.value = time_average_infinite(fd);
    return out;
  }
  std::int64_t pair_work = static_cast<std::int64_t>(m) * static_cast<std::int64_t>(m);
  if (pair_work <= opts.pair_budget) {
    // <Delta A^2>_T = sum_{G,G'} z_G conj(z_G') phi((G - G') T), split into the
    // diagonal plus twice the real part of the upper triangle.
    std::vector<Complex> u(m);
    for (std::size_t j = 0; j < m; ++j) u[j] = std::polar(1.0, -fd.gap_values[j] * horizon);
    std::int64_t chunks = (static_cast<std::int64_t>(m) + reduction_chunk - 1) / reduction_chunk;
    std::vector<double> slot(static_cast<std::size_t>(chunks), 0.0);
    parallel_for(chunks, opts.threads, [&](std::int64_t begin, std::int64_t end) {
      for (std::int64_t chunk = begin; chunk < end; ++chunk) {
        std::size_t jb = static_cast<std::size_t>(chunk * reduction_chunk);
        std::size_t je = std::min(m, jb + static_cast<std::size_t>(reduction_chunk));
        CompensatedSum acc;
        for (std::size_t j = jb; j < je; ++j) {
          acc.add(std::norm(fd.z[j]));
          for (std::size_t k = j + 1; k < m; ++k) {
            double x = (fd.gap_values[j] - fd.gap_values[k]) * horizon;
            Complex phi;
            if (std::abs(x) < 1e-4) {
              phi = time_average_kernel(x);
            } else {
              phi = (u[j] * std::conj(u[k]) - 1.0) / Complex(0.0, -x);
            }
            acc.add(2.0 * (fd.z[j] * std::conj(fd.z[k]) * phi).real());
          }
        }
        slot[static_cast<std::size_t>(chunk)] = acc.value();
      }
    });
    out.value = compensated_total(slot);
    return out;
  }

  // Stratified midpoint sampling of [0, horizon].
  int samples = std::max(2, opts.samples);
  out.sampled = true;
  out.samples = samples;
  double h = horizon / samples;
  std::int64_t chunks =
      (static_cast<std::int64_t>(m) + reduction_chunk - 1) / reduction_chunk;
  std::vector<std::vector<double>> slot(static_cast<std::size_t>(chunks));
  parallel_for(chunks, opts.threads, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t chunk = begin; chunk < end; ++chunk) {
      std::size_t jb = static_cast<std::size_t>(chunk * reduction_chunk);
      std::size_t je = std::min(m, jb + static_cast<std::size_t>(reduction_chunk));
      std::vector<double>& vals = slot[static_cast<std::size_t>(chunk)];
      vals.assign(static_cast<std::size_t>(samples), 0.0);
      std::vector<Complex> w(je - jb), f(je - jb);
      for (std::size_t j = jb; j < je; ++j) {
        w[j - jb] = fd.z[j] * std::polar(1.0, -fd.gap_values[j] * 0.5 * h);
        f[j - jb] = std::polar(1.0, -fd.gap_values[j] * h);
      }
      for (int n = 0; n < samples; ++n) {
        double real_sum = 0.0;
        for (std::size_t j = 0; j < w.size(); ++j) real_sum += w[j].real();
        vals[static_cast<std::size_t>(n)] = real_sum;
        for (std::size_t j = 0; j < w.size(); ++j) w[j] *= f[j];
      }
    }
  });
  CompensatedSum all;
  CompensatedSum odd;
  for (int n = 0; n < samples; ++n) {
    double v = 0.0;
    for (const auto& vals : slot) v += vals[static_cast<std::size_t>(n)];
    all.add(v * v);
    if (n % 2 == 1) odd.add(v * v);
  }
  out.value = all.value() / samples;
  double odd_mean = odd.value() / (samples / 2);
  out.error_estimate = std::abs(out.value - odd_mean);
  return out;
}

std::vector<double> fluctuation_trajectory(const FluctuationData& fd,
                                           std::span<const double> times, int threads) {
  std::vector<double> out(times.size(), 0.0);
  parallel_for(static_cast<std::int64_t>(times.size()), threads,
               [&](std::int64_t begin, std::int64_t end) {
                 for (std::int64_t i = begin; i < end; ++i) {
                   double t = times[static_cast<std::size_t>(i)];
                   Complex acc = 0.0;
                   for (std::size_t j = 0; j < fd.z.size(); ++j) {
                     acc += fd.z[j] * std::polar(1.0, -fd.gap_values[j] * t);
                   }
                   out[static_cast<std::size_t>(i)] = acc.real();
                 }
               });
  return out;
}

Measurement measure_observable(const Matrix& a, double tolerance) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw std::invalid_argument("measurement requires a nonempty square observable");
  }
  if (hermiticity_error(a) > 1e-10 * std::max(1.0, a.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("measurement requires a hermitian observable");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigensolver failed on the observable");
  }
  RealVector vals = solver.eigenvalues();
  double scale = std::max(1.0, vals.cwiseAbs().maxCoeff());
  double tol = tolerance * scale;
  Measurement meas;
  Index begin = 0;
  for (Index i = 1; i <= vals.size(); ++i) {
    if (i == vals.size() || vals(i) - vals(i - 1) > tol) {
      Index len = i - begin;
      auto block = solver.eigenvectors().middleCols(begin, len);
      meas.outcomes.push_back(vals.segment(begin, len).mean());
      meas.projectors.push_back(block * block.adjoint());
      meas.ranks.push_back(len);
      begin = i;
    }
  }
  return meas;
}

double distinguishability(const Matrix& rho, const Matrix& sigma, const Measurement& meas) {
  double acc = 0.0;
  for (const auto& proj : meas.projectors) {
    Complex d = (proj.cwiseProduct((rho - sigma).transpose())).sum();
    acc += std::abs(d.real());
  }
  return 0.5 * acc;
}

namespace {

// Shared core of the sampled time averages: callback gets the phase vector of
// each stratified midpoint sample and returns the instantaneous value.
double sampled_time_average(const RealVector& energies, double horizon, int samples, int threads,
                            const std::function<double(const Vector&)>& value_at) {
  if (!(horizon > 0.0)) throw std::invalid_argument("sampling horizon must be positive");
  samples = std::max(2, samples);
  double h = horizon / samples;
  std::vector<double> values(static_cast<std::size_t>(samples), 0.0);
  parallel_for(samples, threads, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t n = begin; n < end; ++n) {
      Vector u = phase_vector(energies, (static_cast<double>(n) + 0.5) * h);
      values[static_cast<std::size_t>(n)] = value_at(u);
    }
  });
  CompensatedSum acc;
  for (double v : values) acc.add(v);
  return acc.value() / samples;
}

}  // namespace

double sampled_distinguishability_average(const SpectralDecomposition& dec,
                                          const QuantumState& state, const Measurement& meas,
                                          double horizon, const SampledAverageOptions& opts) {
  Index dim = dec.dimension();
  if (state.dimension() != dim) {
    throw std::invalid_argument("state dimension does not match the decomposition");
  }
  std::size_t n_out = meas.projectors.size();
  if (n_out == 0) throw std::invalid_argument("measurement has no outcomes");
  // Rotate projectors once; the last outcome follows from completeness.
  std::vector<Matrix> proj_eig;
  proj_eig.reserve(n_out - 1);
  for (std::size_t i = 0; i + 1 < n_out; ++i) {
    proj_eig.push_back(dec.eigenbasis.adjoint() * meas.projectors[i] * dec.eigenbasis);
  }

  Vector c;
  std::vector<Matrix> mixed_m;  // rho_eig .* proj^T per outcome
  if (state.pure) {
    c = dec.eigenbasis.adjoint() * state.ket;
  } else {
    Matrix rho_eig = dec.eigenbasis.adjoint() * state.rho * dec.eigenbasis;
    mixed_m.reserve(proj_eig.size());
    for (const auto& p : proj_eig) mixed_m.push_back(rho_eig.cwiseProduct(p.transpose()));
  }

  // Equilibrium outcome weights q_i = tr(Pi_i omega).
  QuantumState omega_state;
  omega_state.pure = false;
  omega_state.rho = dephase(dec, state);
  Matrix omega_eig = dec.eigenbasis.adjoint() * omega_state.rho * dec.eigenbasis;
  std::vector<double> q(n_out, 0.0);
  double q_rest = 1.0;
  for (std::size_t i = 0; i + 1 < n_out; ++i) {
    q[i] = (omega_eig.cwiseProduct(proj_eig[i].transpose())).sum().real();
    q_rest -= q[i];
  }
  q[n_out - 1] = q_rest;

  auto value_at = [&](const Vector& u) {
    double dist = 0.0;
    double p_rest = 1.0;
    for (std::size_t i = 0; i + 1 < n_out; ++i) {
      double p;
      if (state.pure) {
        Vector w = c.cwiseProduct(u);
        p = w.dot(proj_eig[i] * w).real();
      } else {
        p = (u.transpose() * (mixed_m[i] * u.conjugate()))(0, 0).real();
      }
      dist += std::abs(p - q[i]);
      p_rest -= p;
    }
    dist += std::abs(p_rest - q[n_out - 1]);
    return 0.5 * dist;
  };
  return sampled_time_average(dec.column_energies(), horizon, opts.samples, opts.threads,
                              value_at);
}

double sampled_survival_distinguishability_average(const SpectralDecomposition& dec,
                                                   const QuantumState& state, double horizon,
                                                   const SampledAverageOptions& opts) {
  if (!state.pure) {
    throw std::invalid_argument("survival distinguishability needs a pure state");
  }
  RealVector p = level_populations(dec, state);
  double equilibrium = p.squaredNorm();  // <psi|omega|psi>
  RealVector energies = dec.distinct_energies;
  auto value_at = [&](const Vector& u) {
    Complex overlap = 0.0;
    for (Index k = 0; k < p.size(); ++k) overlap += p(k) * u(k);
    return std::abs(std::norm(overlap) - equilibrium);
  };
  // Note: phases here are per level, not per column.
  if (!(horizon > 0.0)) throw std::invalid_argument("sampling horizon must be positive");
  int samples = std::max(2, opts.samples);
  double h = horizon / samples;
  std::vector<double> values(static_cast<std::size_t>(samples), 0.0);
  parallel_for(samples, opts.threads, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t n = begin; n < end; ++n) {
      Vector u = phase_vector(energies, (static_cast<double>(n) + 0.5) * h);
      values[static_cast<std::size_t>(n)] = value_at(u);
    }
  });
  CompensatedSum acc;
  for (double v : values) acc.add(v);
  return acc.value() / samples;
}

Matrix partial_trace(const Matrix& rho, std::span<const int> keep_sites, int sites) {
  Index dim = Index{1} << sites;
  if (rho.rows() != dim || rho.cols() != dim) {
    throw std::invalid_argument("density matrix does not match " + std::to_string(sites) +
                                " sites");
  }
  std::vector<int> keep(keep_sites.begin(), keep_sites.end());
  if (!std::is_sorted(keep.begin(), keep.end()) ||
      std::adjacent_find(keep.begin(), keep.end()) != keep.end()) {
    throw std::invalid_argument("kept sites must be strictly ascending");
  }
  for (int s : keep) {
    if (s < 0 || s >= sites) throw std::invalid_argument("kept site outside the chain");
  }
  int n_keep = static_cast<int>(keep.size());
  int n_trace = sites - n_keep;
  Index dim_keep = Index{1} << n_keep;
  Index dim_trace = Index{1} << n_trace;
  std::vector<int> traced;
  for (int s = 0; s < sites; ++s) {
    if (!std::binary_search(keep.begin(), keep.end(), s)) traced.push_back(s);
  }
  // Scatter tables: sub-register bit b (MSB first, preserving site order) to
  // its position in the full index.
  auto scatter = [&](const std::vector<int>& sub, std::uint64_t value) {
    std::uint64_t full = 0;
    for (std::size_t b = 0; b < sub.size(); ++b) {
      std::uint64_t bit = (value >> (sub.size() - 1 - b)) & 1ULL;
      full |= bit << (sites - 1 - sub[b]);
    }
    return full;
  };
  std::vector<std::uint64_t> keep_scatter(static_cast<std::size_t>(dim_keep));
  for (Index a = 0; a < dim_keep; ++a) {
    keep_scatter[static_cast<std::size_t>(a)] = scatter(keep, static_cast<std::uint64_t>(a));
  }
  std::vector<std::uint64_t> trace_scatter(static_cast<std::size_t>(dim_trace));
  for (Index t = 0; t < dim_trace; ++t) {
    trace_scatter[static_cast<std::size_t>(t)] = scatter(traced, static_cast<std::uint64_t>(t));
  }
  Matrix out = Matrix::Zero(dim_keep, dim_keep);
  for (Index a = 0; a < dim_keep; ++a) {
    for (Index b = 0; b < dim_keep; ++b) {
      Complex acc = 0.0;
      for (Index t = 0; t < dim_trace; ++t) {
        std::uint64_t row = keep_scatter[static_cast<std::size_t>(a)] |
                            trace_scatter[static_cast<std::size_t>(t)];
        std::uint64_t col = keep_scatter[static_cast<std::size_t>(b)] |
                            trace_scatter[static_cast<std::size_t>(t)];
        acc += rho(static_cast<Index>(row), static_cast<Index>(col));
      }
      out(a, b) = acc;
    }
  }
  return out;
}

Matrix partial_trace_first(const Matrix& rho, Index dim_first, Index dim_rest) {
  if (rho.rows() != dim_first * dim_rest || rho.cols() != rho.rows()) {
    throw std::invalid_argument("density matrix does not match the requested factorization");
  }
  Matrix out = Matrix::Zero(dim_first, dim_first);
  for (Index a = 0; a < dim_first; ++a) {
    for (Index b = 0; b < dim_first; ++b) {
      Complex acc = 0.0;
      for (Index t = 0; t < dim_rest; ++t) acc += rho(a * dim_rest + t, b * dim_rest + t);
      out(a, b) = acc;
    }
  }
  return out;
}

double trace_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("trace distance: dimension mismatch");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a - b, Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

CloudSnapshot cloud_snapshot(const FluctuationData& fd, double horizon, double time) {
  CloudSnapshot snap;
  snap.time = time;
  snap.horizon = horizon;
  std::size_t m = fd.z.size();
  std::vector<Complex> rotated(m);
  for (std::size_t j = 0; j < m; ++j) {
    rotated[j] = fd.z[j] * std::polar(1.0, -fd.gap_values[j] * time);
  }
  bool raw = !(horizon > 0.0) || std::isinf(horizon);
  if (raw) {
    snap.grid = fd.gap_values;
    snap.amplitudes = rotated;
  } else {
    if (m == 0) return snap;
    double sigma = 1.0 / horizon;
    double step = sigma / 4.0;
    double g_max = std::abs(fd.gap_values[m - 1]);
    if (m > 1) g_max = std::max(g_max, std::abs(fd.gap_values[0]));
    g_max += 4.0 * sigma;
    Index n_side = static_cast<Index>(std::ceil(g_max / step));
    Index n_grid = 2 * n_side + 1;
    snap.grid.resize(static_cast<std::size_t>(n_grid));
    snap.amplitudes.assign(static_cast<std::size_t>(n_grid), Complex(0.0, 0.0));
    for (Index i = 0; i < n_grid; ++i) {
      snap.grid[static_cast<std::size_t>(i)] = (static_cast<double>(i) - n_side) * step;
    }
    // Gaussian kernel, truncated at 8 sigma and renormalized per source so the
    // snapshot redistributes each z_G without losing amplitude.
    Index half_window = 32;  // 8 sigma / step
    std::vector<double> kernel(static_cast<std::size_t>(2 * half_window + 1));
    for (std::size_t j = 0; j < m; ++j) {
      double g = fd.gap_values[j];
      Index center = static_cast<Index>(std::llround(g / step)) + n_side;
      Index lo = std::max<Index>(0, center - half_window);
      Index hi = std::min<Index>(n_grid - 1, center + half_window);
      double total = 0.0;
      for (Index i = lo; i <= hi; ++i) {
        double x = snap.grid[static_cast<std::size_t>(i)] - g;
        double w = std::exp(-0.5 * x * x / (sigma * sigma));
        kernel[static_cast<std::size_t>(i - lo)] = w;
        total += w;
      }
      if (total <= 0.0) continue;
      for (Index i = lo; i <= hi; ++i) {
        snap.amplitudes[static_cast<std::size_t>(i)] +=
            rotated[j] * (kernel[static_cast<std::size_t>(i - lo)] / total);
      }
    }
  }
  Complex total = 0.0;
  for (const Complex& a : snap.amplitudes) total += a;
  snap.total = total;
  return snap;
}

double circular_variance(const CloudSnapshot& snapshot) {
  double mass = 0.0;
  Complex sum = 0.0;
  for (const Complex& a : snapshot.amplitudes) {
    mass += std::abs(a);
    sum += a;
  }
  if (mass <= 0.0) return 0.0;
  return 1.0 - std::abs(sum) / mass;
}

std::vector<double> gaussian_envelope(double initial_deviation, double tau,
                                      std::span<const double> times) {
  if (!(tau > 0.0)) throw std::invalid_argument("gaussian envelope requires tau > 0");
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) {
    out.push_back(std::abs(initial_deviation) * std::exp(-t * t / (tau * tau)));
  }
  return out;
}

double fit_gaussian_tau(std::span<const double> times, std::span<const double> abs_deviation) {
  if (times.size() != abs_deviation.size() || times.size() < 3) return 0.0;
  double v0 = abs_deviation[0];
  if (v0 < 1e-14) return 0.0;
  // Use the initial decay only: stop at the first local minimum of |Delta A|.
  std::size_t end = 1;
  while (end + 1 < times.size() && abs_deviation[end + 1] < abs_deviation[end]) ++end;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 1; i <= end; ++i) {
    double v = abs_deviation[i];
    if (v <= 0.0 || v >= v0) continue;
    double x = times[i] * times[i];
    double y = std::log(v0 / v);
    sxx += x * x;
    sxy += x * y;
  }
  if (sxx <= 0.0 || sxy <= 0.0) return 0.0;
  double slope = sxy / sxx;  // 1/tau^2
  return 1.0 / std::sqrt(slope);
}

}  // namespace eqsim
