#include "eqsim/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace eqsim {

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Single-linkage clustering of sorted values: a new cluster starts where the
// adjacent difference exceeds tol.
std::vector<Index> cluster_boundaries(const RealVector& sorted, double tol) {
  std::vector<Index> starts{0};
  for (Index i = 1; i < sorted.size(); ++i) {
    if (sorted(i) - sorted(i - 1) > tol) starts.push_back(i);
  }
  starts.push_back(sorted.size());
  return starts;
}

}  // namespace

RealVector SpectralDecomposition::column_energies() const {
  RealVector e(dimension());
  for (Index k = 0; k < levels(); ++k) {
    for (Index c = offsets[static_cast<std::size_t>(k)]; c < offsets[static_cast<std::size_t>(k) + 1]; ++c) {
      e(c) = distinct_energies(k);
    }
  }
  return e;
}

Matrix SpectralDecomposition::reconstruct() const {
  return eigenbasis * column_energies().asDiagonal() * eigenbasis.adjoint();
}

SpectralDecomposition diagonalize(const Matrix& hamiltonian, double degeneracy_tolerance) {
  if (hamiltonian.rows() != hamiltonian.cols() || hamiltonian.rows() == 0) {
    throw std::invalid_argument("diagonalize requires a nonempty square matrix");
  }
  if (degeneracy_tolerance <= 0.0) {
    throw std::invalid_argument("degeneracy tolerance must be positive");
  }
  double scale = hamiltonian.cwiseAbs().maxCoeff();
  if (hermiticity_error(hamiltonian) > 1e-10 * std::max(1.0, scale)) {
    throw std::invalid_argument("diagonalize requires a hermitian matrix");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hamiltonian);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigensolver failed to converge (dimension " +
                             std::to_string(hamiltonian.rows()) + ", max |entry| " +
                             std::to_string(scale) + ")");
  }
  SpectralDecomposition dec;
  dec.degeneracy_tolerance = degeneracy_tolerance;
  dec.eigenbasis = solver.eigenvectors();
  RealVector raw = solver.eigenvalues();
  dec.norm = raw.size() ? raw.cwiseAbs().maxCoeff() : 0.0;
  double tol = degeneracy_tolerance * std::max(1.0, dec.norm);
  auto starts = cluster_boundaries(raw, tol);
  Index levels = static_cast<Index>(starts.size()) - 1;
  dec.distinct_energies.resize(levels);
  dec.multiplicities.resize(static_cast<std::size_t>(levels));
  dec.offsets.resize(static_cast<std::size_t>(levels) + 1);
  for (Index k = 0; k < levels; ++k) {
    Index begin = starts[static_cast<std::size_t>(k)];
    Index end = starts[static_cast<std::size_t>(k) + 1];
    dec.distinct_energies(k) = raw.segment(begin, end - begin).mean();
    dec.multiplicities[static_cast<std::size_t>(k)] = end - begin;
    dec.offsets[static_cast<std::size_t>(k)] = begin;
  }
  dec.offsets[static_cast<std::size_t>(levels)] = raw.size();
  return dec;
}

GapCatalog gap_catalog(const SpectralDecomposition& dec, double gap_tolerance) {
  if (gap_tolerance <= 0.0) throw std::invalid_argument("gap tolerance must be positive");
  GapCatalog cat;
  cat.gap_tolerance = gap_tolerance;
  Index levels = dec.levels();
  cat.pair_group = Eigen::MatrixXi::Constant(levels, levels, -1);
  cat.gap_count = static_cast<std::int64_t>(levels) * (levels - 1);
  if (levels < 2) {
    cat.trivial = true;
    cat.eps_min = std::numeric_limits<double>::infinity();
    return cat;
  }

  // Positive gaps: level pairs (k, l) with k > l, value E_k - E_l.
  std::int64_t n_pos = static_cast<std::int64_t>(levels) * (levels - 1) / 2;
  std::vector<double> values;
  std::vector<std::pair<int, int>> pairs;
  values.reserve(static_cast<std::size_t>(n_pos));
  pairs.reserve(static_cast<std::size_t>(n_pos));
  for (Index k = 1; k < levels; ++k) {
    for (Index l = 0; l < k; ++l) {
      values.push_back(dec.distinct_energies(k) - dec.distinct_energies(l));
      pairs.emplace_back(static_cast<int>(k), static_cast<int>(l));
    }
  }
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  double tol = gap_tolerance * std::max(1.0, dec.norm);
  std::vector<double> group_reps;
  std::vector<std::int64_t> group_mult;
  double cluster_sum = 0.0;
  std::int64_t cluster_count = 0;
  double previous = 0.0;
  std::vector<int> group_of(values.size(), -1);
  for (std::size_t oi = 0; oi < order.size(); ++oi) {
    double v = values[order[oi]];
    if (cluster_count > 0 && v - previous > tol) {
      group_reps.push_back(cluster_sum / static_cast<double>(cluster_count));
      group_mult.push_back(cluster_count);
      cluster_sum = 0.0;
      cluster_count = 0;
    }
    cluster_sum += v;
    ++cluster_count;
    previous = v;
    group_of[order[oi]] = static_cast<int>(group_reps.size());
  }
  group_reps.push_back(cluster_sum / static_cast<double>(cluster_count));
  group_mult.push_back(cluster_count);

  // Mirror to the negative side; distinct gaps ascending.
  std::size_t n_groups = group_reps.size();
  cat.distinct_gaps.resize(2 * n_groups);
  cat.multiplicities.resize(2 * n_groups);
  for (std::size_t gi = 0; gi < n_groups; ++gi) {
    cat.distinct_gaps[n_groups - 1 - gi] = -group_reps[gi];
    cat.multiplicities[n_groups - 1 - gi] = group_mult[gi];
    cat.distinct_gaps[n_groups + gi] = group_reps[gi];
    cat.multiplicities[n_groups + gi] = group_mult[gi];
  }
  for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
    auto [k, l] = pairs[pi];
    int gi = group_of[pi];
    cat.pair_group(k, l) = static_cast<int>(n_groups + static_cast<std::size_t>(gi));
    cat.pair_group(l, k) = static_cast<int>(n_groups - 1 - static_cast<std::size_t>(gi));
  }
  cat.degeneracy = *std::max_element(group_mult.begin(), group_mult.end());
  cat.eps_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < cat.distinct_gaps.size(); ++i) {
    cat.eps_min = std::min(cat.eps_min, cat.distinct_gaps[i] - cat.distinct_gaps[i - 1]);
  }
  return cat;
}

std::int64_t gap_window_count(const GapCatalog& catalog, double width) {
  if (width <= 0.0) throw std::invalid_argument("window width must be positive");
  if (catalog.trivial) return 0;
  const auto& gaps = catalog.distinct_gaps;
  std::int64_t best = 0;
  std::size_t hi = 0;
  std::int64_t in_window = 0;
  for (std::size_t lo = 0; lo < gaps.size(); ++lo) {
    if (hi < lo) {
      hi = lo;
      in_window = 0;
    }
    while (hi < gaps.size() && gaps[hi] < gaps[lo] + width) {
      in_window += catalog.multiplicities[hi];
      ++hi;
    }
    best = std::max(best, in_window);
    in_window -= catalog.multiplicities[lo];
  }
  return best;
}

double window_concentration(std::span<const double> values, std::span<const double> weights,
                            double width) {
  if (values.empty()) throw std::invalid_argument("window concentration of an empty distribution");
  if (values.size() != weights.size()) {
    throw std::invalid_argument("values and weights must have equal length");
  }
  if (width <= 0.0) throw std::invalid_argument("window width must be positive");
  double total = 0.0;
  for (double w : weights) {
    if (w < -1e-15) throw std::invalid_argument("weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("weights must sum to 1, got " + std::to_string(total));
  }
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  // The sliding half-open window [x, x + width) attains its maximum with the
  // left edge at a data point.
  double best = 0.0;
  std::size_t hi = 0;
  double mass = 0.0;
  for (std::size_t lo = 0; lo < order.size(); ++lo) {
    if (hi < lo) {
      hi = lo;
      mass = 0.0;
    }
    while (hi < order.size() && values[order[hi]] < values[order[lo]] + width) {
      mass += weights[order[hi]];
      ++hi;
    }
    best = std::max(best, mass);
    mass -= weights[order[lo]];
  }
  return best;
}

EnvelopeFit fit_envelope(std::span<const ConcentrationSample> samples, double sigma,
                         double max_point_mass) {
  if (samples.size() < 2) throw std::invalid_argument("envelope fit requires at least 2 samples");
  if (sigma <= 0.0) throw std::invalid_argument("envelope fit requires sigma > 0");
  if (max_point_mass < 0.0 || max_point_mass > 1.0) {
    throw std::invalid_argument("max point mass must lie in [0, 1]");
  }
  EnvelopeFit fit;
  fit.delta = max_point_mass;
  for (const auto& sample : samples) {
    if (sample.horizon <= 0.0) throw std::invalid_argument("envelope samples need horizon > 0");
    double needed = (sample.value - fit.delta) * sigma * sample.horizon;
    fit.a = std::max(fit.a, needed);
  }
  fit.a = std::max(fit.a, 0.0);
  return fit;
}

DosDiagnostics dos_diagnostics(const SpectralDecomposition& dec, const QuantumState& state) {
  Index levels = dec.levels();
  RealVector populations(levels);
  if (state.dimension() != dec.dimension()) {
    throw std::invalid_argument("state dimension does not match the decomposition");
  }
  for (Index k = 0; k < levels; ++k) {
    Index begin = dec.offsets[static_cast<std::size_t>(k)];
    Index len = dec.multiplicities[static_cast<std::size_t>(k)];
    double p = 0.0;
    if (state.pure) {
      p = (dec.eigenbasis.middleCols(begin, len).adjoint() * state.ket).squaredNorm();
    } else {
      auto block = dec.eigenbasis.middleCols(begin, len);
      p = (block.adjoint() * state.rho * block).real().trace();
    }
    populations(k) = p;
  }
  DosDiagnostics out;
  out.mean = populations.dot(dec.distinct_energies);
  double second = populations.dot(dec.distinct_energies.cwiseAbs2());
  out.std_dev = std::sqrt(std::max(0.0, second - out.mean * out.mean));
  if (out.std_dev <= 1e-12 * std::max(1.0, dec.norm)) {
    out.degenerate = true;
    out.ks_distance = 1.0;
    return out;
  }
  double cumulative = 0.0;
  double ks = 0.0;
  for (Index k = 0; k < levels; ++k) {
    double model = normal_cdf((dec.distinct_energies(k) - out.mean) / out.std_dev);
    ks = std::max(ks, std::abs(cumulative - model));
    cumulative += populations(k);
    ks = std::max(ks, std::abs(cumulative - model));
  }
  out.ks_distance = ks;
  return out;
}

MatrixElementDecay matrix_element_decay(const Matrix& a_eig, const SpectralDecomposition& dec,
                                        int bins) {
  if (a_eig.rows() != dec.dimension() || a_eig.cols() != dec.dimension()) {
    throw std::invalid_argument("observable dimension does not match the decomposition");
  }
  if (bins < 4) throw std::invalid_argument("matrix element fit needs at least 4 bins");
  RealVector energies = dec.column_energies();
  Index dim = dec.dimension();
  double max_gap = energies(dim - 1) - energies(0);
  MatrixElementDecay out;
  out.bins = bins;
  if (max_gap <= 0.0 || dim < 2) return out;  // single level: nothing to fit

  struct Point {
    double gap;
    double log_abs;
  };
  std::vector<std::vector<double>> bin_values(static_cast<std::size_t>(bins));
  std::vector<Point> points;
  points.reserve(static_cast<std::size_t>(dim) * (dim - 1) / 2);
  double bin_width = max_gap / bins;
  for (Index i = 0; i < dim; ++i) {
    for (Index j = i + 1; j < dim; ++j) {
      double gap = std::abs(energies(j) - energies(i));
      double mag = std::abs(a_eig(i, j));
      int b = std::min(bins - 1, static_cast<int>(gap / bin_width));
      bin_values[static_cast<std::size_t>(b)].push_back(mag);
      if (mag > 1e-150) points.push_back({gap, std::log(mag)});
    }
  }
  out.bin_centers.resize(static_cast<std::size_t>(bins));
  out.bin_max.assign(static_cast<std::size_t>(bins), 0.0);
  for (int b = 0; b < bins; ++b) {
    out.bin_centers[static_cast<std::size_t>(b)] = (b + 0.5) * bin_width;
    for (double v : bin_values[static_cast<std::size_t>(b)]) {
      out.bin_max[static_cast<std::size_t>(b)] =
          std::max(out.bin_max[static_cast<std::size_t>(b)], v);
    }
  }
  if (points.size() < 2) return out;

  // Least squares on the upper decile of each bin, so the fit tracks the
  // envelope instead of the bulk of near-zero elements.
  std::vector<Point> upper;
  for (int b = 0; b < bins; ++b) {
    auto& vals = bin_values[static_cast<std::size_t>(b)];
    if (vals.empty()) continue;
    std::vector<double> sorted(vals);
    std::sort(sorted.begin(), sorted.end());
    double threshold = sorted[static_cast<std::size_t>(0.9 * (sorted.size() - 1))];
    double center = out.bin_centers[static_cast<std::size_t>(b)];
    for (double v : vals) {
      if (v >= threshold && v > 1e-150) upper.push_back({center, std::log(v)});
    }
  }
  if (upper.size() < 2) return out;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& p : upper) {
    sx += p.gap;
    sy += p.log_abs;
    sxx += p.gap * p.gap;
    sxy += p.gap * p.log_abs;
  }
  double n = static_cast<double>(upper.size());
  double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-30) return out;
  double slope = (n * sxy - sx * sy) / denom;
  out.alpha = std::max(0.0, -slope);

  // Raise the intercept until the envelope dominates every element.
  double intercept = -std::numeric_limits<double>::infinity();
  for (const auto& p : points) intercept = std::max(intercept, p.log_abs + out.alpha * p.gap);
  out.intercept = intercept;
  double log_norm = std::log(std::max(1e-300, hermitian_operator_norm(a_eig)));
  if (out.alpha > 1e-12) {
    // negative when the flat ||A|| envelope already dominates; report 0 then
    out.range = std::max(0.0, (intercept - log_norm) / (2.0 * out.alpha));
  } else {
    out.alpha = 0.0;
    out.range = max_gap / 2.0;  // no measurable decay: report the spectral span
  }
  std::size_t above = 0;
  for (const auto& p : points) {
    if (p.log_abs > intercept - out.alpha * p.gap + 1e-12) ++above;
  }
  out.violation_fraction = static_cast<double>(above) / static_cast<double>(points.size());
  return out;
}

}  // namespace eqsim
