#include "eqsim/runner.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>

#include "eqsim/cache.hpp"
#include "eqsim/dynamics.hpp"
#include "eqsim/spectral.hpp"
#include "eqsim/version.hpp"

namespace eqsim {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

namespace {

json json_number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);  // JSON has no inf/nan literals
}

std::string iso_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

class Emitter {
 public:
  Emitter(const fs::path& dir, RunOutcome& outcome) : dir_(dir), outcome_(outcome) {}

  std::ofstream open_csv(const std::string& name, const std::string& header) {
    std::ofstream out(dir_ / name, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + (dir_ / name).string());
    out << header << '\n';
    outcome_.artifacts.push_back(name);
    return out;
  }

  void write_json(const std::string& name, const json& j) {
    std::ofstream out(dir_ / name, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + (dir_ / name).string());
    out << j.dump(2) << '\n';
    outcome_.artifacts.push_back(name);
  }

 private:
  fs::path dir_;
  RunOutcome& outcome_;
};

// Lazily built shared pipeline: tasks only pay for the stages they use.
class Pipeline {
 public:
  Pipeline(const RunConfig& config, std::ostream& log, RunOutcome& outcome)
      : config_(config), log_(log), outcome_(outcome) {}

  const Matrix& hamiltonian() {
    if (!h_) h_ = build_hamiltonian(config_.system);
    return *h_;
  }

  const SpectralDecomposition& decomposition() {
    if (!dec_) {
      CacheKey key = spectral_cache_key(config_.system, config_.degeneracy_tolerance);
      std::string dir = resolve_cache_dir(config_.cache_dir);
      std::string warning;
      auto cached = cache_load(dir, key, &warning);
      if (!warning.empty()) log_ << "warning: " << warning << "\n";
      Index expected = config_.system.sector_sz
                           ? sector_basis(config_.system.sites, *config_.system.sector_sz)
                                 .dimension()
                           : config_.system.full_dimension();
      if (cached && cached->dimension() == expected) {
        dec_ = std::move(*cached);
        outcome_.cache_hit = true;
        log_ << "spectral cache hit (" << key.hex() << ")\n";
      } else {
        dec_ = diagonalize(hamiltonian(), config_.degeneracy_tolerance);
        cache_store(dir, key, *dec_);
        log_ << "spectral cache store (" << key.hex() << ")\n";
      }
    }
    return *dec_;
  }

  const GapCatalog& catalog() {
    if (!catalog_) catalog_ = gap_catalog(decomposition(), config_.gap_tolerance);
    return *catalog_;
  }

  const QuantumState& state() {
    if (!state_) state_ = build_state(config_.state, config_.system);
    return *state_;
  }

  const Matrix& observable() {
    if (!a_) a_ = build_observable(config_.observable, config_.system);
    return *a_;
  }

  const FluctuationData& fluctuations() {
    if (!fd_) fd_ = fluctuation_data(decomposition(), catalog(), state(), observable());
    return *fd_;
  }

  const Measurement& measurement() {
    if (!meas_) meas_ = measure_observable(observable());
    return *meas_;
  }

  double observable_norm() {
    if (!norm_a_) norm_a_ = hermitian_operator_norm(observable());
    return *norm_a_;
  }

 private:
  const RunConfig& config_;
  std::ostream& log_;
  RunOutcome& outcome_;
  std::optional<Matrix> h_;
  std::optional<SpectralDecomposition> dec_;
  std::optional<GapCatalog> catalog_;
  std::optional<QuantumState> state_;
  std::optional<Matrix> a_;
  std::optional<FluctuationData> fd_;
  std::optional<Measurement> meas_;
  std::optional<double> norm_a_;
};

json report_to_json(const BoundReport& r) {
  json inputs = json::object();
  for (const auto& [k, v] : r.inputs) inputs[k] = json_number(v);
  return json{{"bound_name", r.bound_name}, {"lhs_measured", json_number(r.lhs_measured)},
              {"rhs_bound", json_number(r.rhs_bound)},  {"inputs", inputs},
              {"satisfied", r.satisfied},               {"slack", json_number(r.slack)}};
}

void run_spectrum_task(Pipeline& pipe, const SpectrumTask& task,
                       const std::string& label, Emitter& emit) {
  const auto& dec = pipe.decomposition();
  const auto& cat = pipe.catalog();
  RealVector populations = level_populations(dec, pipe.state());
  {
    auto csv = emit.open_csv(label + "_spectrum.csv", "level,energy,multiplicity,population");
    for (Index k = 0; k < dec.levels(); ++k) {
      csv << k << ',' << format_double(dec.distinct_energies(k)) << ','
          << dec.multiplicities[static_cast<std::size_t>(k)] << ','
          << format_double(populations(k)) << '\n';
    }
  }
  EffectiveDimension ed = effective_dimension(dec, pipe.state());
  DosDiagnostics dos = dos_diagnostics(dec, pipe.state());
  json summary{
      {"dimension", dec.dimension()},
      {"levels", dec.levels()},
      {"spectral_norm", json_number(dec.norm)},
      {"gap_degeneracy_g", cat.degeneracy},
      {"eps_min", json_number(cat.eps_min)},
      {"gap_count", cat.gap_count},
      {"distinct_gap_count", cat.distinct_count()},
      {"d_eff", json_number(ed.d_eff)},
      {"ipr", json_number(ed.ipr)},
      {"dos", json{{"mean", json_number(dos.mean)},
                   {"std_dev", json_number(dos.std_dev)},
                   {"ks_distance", json_number(dos.ks_distance)},
                   {"degenerate", dos.degenerate}}},
  };
  if (task.matrix_element_fit) {
    Matrix a_eig = dec.eigenbasis.adjoint() * pipe.observable() * dec.eigenbasis;
    MatrixElementDecay fit = matrix_element_decay(a_eig, dec);
    auto csv = emit.open_csv(label + "_matrix_decay.csv", "gap,envelope_max");
    for (std::size_t b = 0; b < fit.bin_centers.size(); ++b) {
      csv << format_double(fit.bin_centers[b]) << ',' << format_double(fit.bin_max[b]) << '\n';
    }
    summary["matrix_element_fit"] = json{{"alpha", json_number(fit.alpha)},
                                         {"range", json_number(fit.range)},
                                         {"intercept", json_number(fit.intercept)},
                                         {"violation_fraction", fit.violation_fraction}};
  }
  emit.write_json(label + "_summary.json", summary);
}

void run_dynamics_task(Pipeline& pipe, const RunConfig& config, const DynamicsTask& task,
                       const std::string& label, Emitter& emit) {
  std::vector<double> times = task.times.points();
  const auto& fd = pipe.fluctuations();
  std::vector<double> deviation = fluctuation_trajectory(fd, times, config.threads);
  std::vector<double> abs_dev(deviation.size());
  for (std::size_t i = 0; i < deviation.size(); ++i) abs_dev[i] = std::abs(deviation[i]);
  double tau = fit_gaussian_tau(times, abs_dev);
  std::vector<double> envelope(times.size(), 0.0);
  if (tau > 0.0) envelope = gaussian_envelope(fd.initial_deviation, tau, times);
  auto csv = emit.open_csv(label + "_decay.csv", "t,delta_a,envelope");
  for (std::size_t i = 0; i < times.size(); ++i) {
    csv << format_double(times[i]) << ',' << format_double(deviation[i]) << ','
        << format_double(envelope[i]) << '\n';
  }
  emit.write_json(label + "_summary.json",
                  json{{"tau_fit", json_number(tau)},
                       {"initial_deviation", json_number(fd.initial_deviation)},
                       {"equilibrium_value", json_number(fd.equilibrium_value)},
                       {"sigma_g", json_number(fd.sigma_g)},
                       {"q_total", json_number(fd.q_total)}});
}

void run_cloud_task(Pipeline& pipe, const CloudTask& task,
                    const std::string& label, Emitter& emit) {
  const auto& fd = pipe.fluctuations();
  json summary = json::array();
  for (std::size_t ti = 0; ti < task.times.size(); ++ti) {
    double horizon = task.regularization > 0.0 ? task.regularization
                                               : std::numeric_limits<double>::infinity();
    CloudSnapshot snap = cloud_snapshot(fd, horizon, task.times[ti]);
    std::string name = label + "_t" + std::to_string(ti) + ".csv";
    auto csv = emit.open_csv(name, "gap,re,im,abs");
    for (std::size_t i = 0; i < snap.grid.size(); ++i) {
      csv << format_double(snap.grid[i]) << ',' << format_double(snap.amplitudes[i].real()) << ','
          << format_double(snap.amplitudes[i].imag()) << ','
          << format_double(std::abs(snap.amplitudes[i])) << '\n';
    }
    // The amplitude sum must reproduce the instantaneous deviation.
    double check = fluctuation_trajectory(fd, std::vector<double>{snap.time}, 1)[0];
    summary.push_back(json{{"time", json_number(snap.time)},
                           {"file", name},
                           {"total_re", json_number(snap.total.real())},
                           {"total_im", json_number(snap.total.imag())},
                           {"delta_a", json_number(check)},
                           {"circular_variance", json_number(circular_variance(snap))}});
  }
  emit.write_json(label + "_summary.json", summary);
}

std::vector<BoundReport> bounds_task_reports(Pipeline& pipe, const RunConfig& config,
                                             const BoundsTask& task);

void run_bounds_task(Pipeline& pipe, const RunConfig& config, const BoundsTask& task,
                     const std::string& label, Emitter& emit, RunOutcome& outcome,
                     std::ostream& log) {
  std::vector<BoundReport> reports = bounds_task_reports(pipe, config, task);
  auto csv = emit.open_csv(label + ".csv", "bound_name,horizon,lhs,rhs,satisfied,slack");
  json jreports = json::array();
  for (const auto& r : reports) {
    double horizon = r.inputs.count("horizon") ? r.inputs.at("horizon")
                                               : std::numeric_limits<double>::infinity();
    csv << r.bound_name << ',' << format_double(horizon) << ',' << format_double(r.lhs_measured)
        << ',' << format_double(r.rhs_bound) << ',' << (r.satisfied ? "true" : "false") << ','
        << format_double(r.slack) << '\n';
    jreports.push_back(report_to_json(r));
    if (!r.satisfied) {
      ++outcome.violations;
      log << "BOUND VIOLATION: " << r.bound_name << " lhs=" << format_double(r.lhs_measured)
          << " rhs=" << format_double(r.rhs_bound) << "\n";
    }
  }
  emit.write_json(label + ".json", jreports);
  outcome.reports.insert(outcome.reports.end(), reports.begin(), reports.end());
}

void run_ensemble_task(const RunConfig& config, const EnsembleTask& task, const std::string& label,
                       Emitter& emit, RunOutcome& outcome, std::ostream& log) {
  ExperimentConfig experiment = task.experiment;
  if (experiment.seed == 0) experiment.seed = config.seed;
  experiment.threads = config.threads;
  ExperimentOutput result = run_experiment(experiment);
  std::string header = "grid,mean,std_error";
  std::vector<std::string> keys;
  for (const auto& [k, v] : result.series) {
    keys.push_back(k);
    header += "," + k;
  }
  auto csv = emit.open_csv(label + ".csv", header);
  for (std::size_t i = 0; i < result.ensemble.grid.size(); ++i) {
    csv << format_double(result.ensemble.grid[i]) << ',' << format_double(result.ensemble.mean[i])
        << ',' << format_double(result.ensemble.std_error[i]);
    for (const auto& k : keys) csv << ',' << format_double(result.series.at(k)[i]);
    csv << '\n';
  }
  json jreports = json::array();
  for (const auto& r : result.reports) {
    jreports.push_back(report_to_json(r));
    if (!r.satisfied) {
      ++outcome.violations;
      log << "BOUND VIOLATION: " << r.bound_name << "\n";
    }
  }
  emit.write_json(label + ".json",
                  json{{"experiment", to_string(experiment.kind)},
                       {"quantity", result.ensemble.quantity},
                       {"trials", result.ensemble.trials},
                       {"seed", experiment.seed},
                       {"reports", jreports}});
  outcome.reports.insert(outcome.reports.end(), result.reports.begin(), result.reports.end());
}

// Measured quantities vs every applicable rigorous bound, at each horizon.
std::vector<BoundReport> bounds_task_reports(Pipeline& pipe, const RunConfig& config,
                                             const BoundsTask& task) {
  const auto& dec = pipe.decomposition();
  const auto& cat = pipe.catalog();
  const auto& fd = pipe.fluctuations();
  const auto& state = pipe.state();
  const auto& meas = pipe.measurement();
  double norm_a = pipe.observable_norm();
  EffectiveDimension ed = effective_dimension(dec, state);
  double g = static_cast<double>(cat.degeneracy);
  double n_out = static_cast<double>(meas.n_outcomes());
  double levels = static_cast<double>(dec.levels());
  double scale = task.rhs_scale_test_hook;
  RealVector populations = level_populations(dec, state);
  std::vector<double> pop(populations.begin(), populations.end());
  std::vector<double> level_energies(dec.distinct_energies.begin(), dec.distinct_energies.end());
  double purity = state.pure ? 1.0 : state.rho.squaredNorm();  // tr(rho^2), rho hermitian

  std::vector<BoundReport> reports;
  std::map<std::string, double> base{{"g", g},
                                     {"d_eff", ed.d_eff},
                                     {"norm_a", norm_a},
                                     {"n_outcomes", n_out},
                                     {"eps_min", cat.eps_min},
                                     {"levels", levels}};

  double lhs_inf = time_average_infinite(fd);
  InfiniteFluctuationBound inf_b = bound_infinite_fluctuation(g, fd.sum_v_sq, norm_a, ed.d_eff);
  {
    auto inputs = base;
    inputs["sum_v_sq"] = fd.sum_v_sq;
    reports.push_back(compare_bound("fluctuation_infinite_vs_sum_v", lhs_inf,
                                    scale * inf_b.via_sum_v_sq, inputs));
    reports.push_back(
        compare_bound("fluctuation_infinite_vs_d_eff", lhs_inf, scale * inf_b.via_d_eff, inputs));
  }

  SampledAverageOptions sample_opts;
  sample_opts.samples = task.samples;
  sample_opts.threads = config.threads;
  {
    double lhs = sampled_distinguishability_average(dec, state, meas,
                                                    task.infinite_proxy_horizon, sample_opts);
    auto inputs = base;
    inputs["proxy_horizon"] = task.infinite_proxy_horizon;
    inputs["samples"] = static_cast<double>(task.samples);
    reports.push_back(compare_bound(
        "distinguishability_infinite", lhs,
        scale * bound_infinite_distinguishability(g, n_out, ed.d_eff), inputs));
  }

  FiniteAverageOptions fin_opts;
  fin_opts.pair_budget = config.pair_budget;
  fin_opts.samples = config.time_samples;
  fin_opts.threads = config.threads;
  for (double horizon : task.horizons) {
    FiniteAverageResult avg = time_average_finite(fd, horizon, fin_opts);
    double eta = window_concentration(level_energies, pop, 1.0 / horizon);
    double xi = pair_gap_concentration(fd, 1.0 / horizon);
    auto inputs = base;
    inputs["horizon"] = horizon;
    inputs["eta"] = eta;
    inputs["xi"] = xi;
    if (avg.sampled) inputs["sampling_error"] = avg.error_estimate;
    reports.push_back(compare_bound(
        "fluctuation_finite_log T=" + format_double(horizon), avg.value,
        scale * bound_finite_time_log(g, norm_a, ed.d_eff, levels, cat.eps_min, horizon), inputs));
    reports.push_back(compare_bound(
        "fluctuation_finite_flat T=" + format_double(horizon), avg.value,
        scale * bound_finite_time_flat(g, norm_a, ed.d_eff, cat.eps_min, horizon), inputs));
    reports.push_back(compare_bound(
        "random_state_general T=" + format_double(horizon), avg.value,
        scale * bound_random_state(norm_a, static_cast<double>(dec.dimension()), purity, xi),
        inputs));
    {
      double lhs = sampled_distinguishability_average(dec, state, meas, horizon, sample_opts);
      reports.push_back(compare_bound(
          "distinguishability_finite T=" + format_double(horizon), lhs,
          scale * bound_finite_distinguishability(g, n_out, ed.d_eff, cat.eps_min, horizon),
          inputs));
    }
    if (state.pure) {
      double lhs = sampled_survival_distinguishability_average(dec, state, horizon, sample_opts);
      reports.push_back(compare_bound("survival_small_rank T=" + format_double(horizon), lhs,
                                      scale * bound_small_rank(1.0, eta), inputs));
    }
  }
  return reports;
}

}  // namespace

RunOutcome run_config(const RunConfig& config, std::ostream& log) {
  RunOutcome outcome;
  fs::path dir(config.output_dir);
  fs::create_directories(dir);
  Emitter emit(dir, outcome);
  Pipeline pipe(config, log, outcome);
  for (const auto& task : config.tasks) {
    log << "task " << task.label << "\n";
    if (const auto* t = std::get_if<SpectrumTask>(&task.payload)) {
      run_spectrum_task(pipe, *t, task.label, emit);
    } else if (const auto* t = std::get_if<DynamicsTask>(&task.payload)) {
      run_dynamics_task(pipe, config, *t, task.label, emit);
    } else if (const auto* t = std::get_if<CloudTask>(&task.payload)) {
      run_cloud_task(pipe, *t, task.label, emit);
    } else if (const auto* t = std::get_if<BoundsTask>(&task.payload)) {
      run_bounds_task(pipe, config, *t, task.label, emit, outcome, log);
    } else if (const auto* t = std::get_if<EnsembleTask>(&task.payload)) {
      run_ensemble_task(config, *t, task.label, emit, outcome, log);
    }
  }
  // Column documentation for downstream scripts.
  {
    std::ofstream doc(dir / "columns.md", std::ios::trunc);
    doc << "# Output columns\n\n"
        << "- `*_spectrum.csv`: level index, level energy, multiplicity, initial-state "
           "population.\n"
        << "- `*_decay.csv`: time, deviation from equilibrium, fitted gaussian envelope.\n"
        << "- `*_t<k>.csv` (cloud): gap, Re/Im/abs of the rotating-frame amplitude.\n"
        << "- `bounds csv`: bound name, averaging horizon (inf for infinite-time), measured "
           "value, bound, satisfied flag, slack.\n"
        << "- `ensemble csv`: grid value (dimension, time, or horizon), trial mean, standard "
           "error, plus named companion series.\n";
    outcome.artifacts.push_back("columns.md");
  }
  json manifest{{"tool", "eqsim"},
                {"version", version_string},
                {"created", iso_timestamp()},
                {"cache_hit", outcome.cache_hit},
                {"violations", outcome.violations},
                {"config", config_to_json(config)},
                {"artifacts", outcome.artifacts}};
  {
    std::ofstream out(dir / "manifest.json", std::ios::trunc);
    out << manifest.dump(2) << '\n';
  }
  log << "wrote " << outcome.artifacts.size() + 1 << " artifacts to " << dir.string() << "\n";
  return outcome;
}

}  // namespace eqsim
