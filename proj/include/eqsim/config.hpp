#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "eqsim/ensembles.hpp"
#include "eqsim/model.hpp"

namespace eqsim {

/// Configuration rejected: message carries the JSON path of the offender and,
/// for enumerations, the list of accepted values.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct TimeGridSpec {
  double start = 0.0;
  double stop = 1.0;
  int count = 2;
  bool log_spacing = false;
  std::vector<double> points() const;
};

struct SpectrumTask {
  bool matrix_element_fit = false;  // also emit the off-diagonal decay fit
};

struct DynamicsTask {
  TimeGridSpec times;
};

struct CloudTask {
  double regularization = 0.0;  // horizon T; <= 0 means raw points
  std::vector<double> times;
};

struct BoundsTask {
  std::vector<double> horizons;
  int samples = 2048;              // time samples for measured distinguishability
  double infinite_proxy_horizon = 1e4;
  // Test hook: scales every rhs before comparison; 1.0 in real runs. Used to
  // exercise the violation exit path.
  double rhs_scale_test_hook = 1.0;
};

struct EnsembleTask {
  ExperimentConfig experiment;
};

struct Task {
  std::string label;
  std::variant<SpectrumTask, DynamicsTask, CloudTask, BoundsTask, EnsembleTask> payload;
};

struct RunConfig {
  SpinChainSpec system;
  StateSpec state;
  ObservableSpec observable;
  double degeneracy_tolerance = 1e-9;
  double gap_tolerance = 1e-9;
  std::int64_t pair_budget = 20'000'000;
  int time_samples = 4096;
  std::string output_dir = "out";
  std::string cache_dir;  // empty: default, overridden by EQSIM_CACHE_DIR
  std::uint64_t seed = 1;
  int threads = 1;
  std::vector<Task> tasks;
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig parse_config_file(const std::string& path);

/// Canonical serialization (self-describing, key-sorted); echoed into run
/// manifests and hashed for cache keys.
nlohmann::json system_to_json(const SpinChainSpec& spec);
nlohmann::json config_to_json(const RunConfig& config);

}  // namespace eqsim
