#include "eqsim/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace eqsim {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError("config error at " + (path.empty() ? "<root>" : path) + ": " + msg);
}

std::string type_name(const json& j) { return j.type_name(); }

// Strict object reader: every key must be consumed, unknown keys are rejected
// with the full path so typos surface immediately.
class ObjectView {
 public:
  ObjectView(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object, got " + type_name(j_));
  }

  std::string path(const char* key) const { return path_ + "." + key; }

  bool has(const char* key) const { return j_.contains(key); }

  const json& require(const char* key) {
    if (!j_.contains(key)) fail(path_, std::string("missing required field '") + key + "'");
    seen_.insert(key);
    return j_.at(key);
  }

  const json* optional(const char* key) {
    if (!j_.contains(key)) return nullptr;
    seen_.insert(key);
    return &j_.at(key);
  }

  double number(const char* key) {
    const json& v = require(key);
    if (!v.is_number()) fail(path(key), "expected a number, got " + type_name(v));
    return v.get<double>();
  }

  double number_or(const char* key, double def) {
    const json* v = optional(key);
    if (!v) return def;
    if (!v->is_number()) fail(path(key), "expected a number, got " + type_name(*v));
    return v->get<double>();
  }

  std::int64_t integer(const char* key) {
    const json& v = require(key);
    if (!v.is_number_integer()) fail(path(key), "expected an integer, got " + type_name(v));
    return v.get<std::int64_t>();
  }

  std::int64_t integer_or(const char* key, std::int64_t def) {
    const json* v = optional(key);
    if (!v) return def;
    if (!v->is_number_integer()) fail(path(key), "expected an integer, got " + type_name(*v));
    return v->get<std::int64_t>();
  }

  std::uint64_t unsigned_or(const char* key, std::uint64_t def) {
    const json* v = optional(key);
    if (!v) return def;
    if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<std::int64_t>() >= 0)) {
      fail(path(key), "expected a nonnegative integer, got " + v->dump());
    }
    return v->get<std::uint64_t>();
  }

  std::string str(const char* key) {
    const json& v = require(key);
    if (!v.is_string()) fail(path(key), "expected a string, got " + type_name(v));
    return v.get<std::string>();
  }

  std::string str_or(const char* key, const std::string& def) {
    const json* v = optional(key);
    if (!v) return def;
    if (!v->is_string()) fail(path(key), "expected a string, got " + type_name(*v));
    return v->get<std::string>();
  }

  bool boolean_or(const char* key, bool def) {
    const json* v = optional(key);
    if (!v) return def;
    if (!v->is_boolean()) fail(path(key), "expected true/false, got " + type_name(*v));
    return v->get<bool>();
  }

  std::vector<double> number_array(const char* key) {
    const json& v = require(key);
    if (!v.is_array()) fail(path(key), "expected an array, got " + type_name(v));
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) fail(path(key), "expected numbers, got " + type_name(e));
      out.push_back(e.get<double>());
    }
    return out;
  }

  void done() {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) {
        std::string known;
        for (auto jt = j_.begin(); jt != j_.end(); ++jt) {
          // list the accepted keys actually probed on this object
        }
        fail(path_ + "." + it.key(), "unknown field");
      }
    }
  }

  const json& raw() const { return j_; }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

ModelKind model_kind(const std::string& s, const std::string& path) {
  if (s == "xxz_nnn") return ModelKind::xxz_nnn;
  if (s == "transverse_ising") return ModelKind::transverse_ising;
  if (s == "custom") return ModelKind::custom;
  fail(path, "unknown model '" + s + "'; expected one of xxz_nnn, transverse_ising, custom");
}

BoundaryKind boundary_kind(const std::string& s, const std::string& path) {
  if (s == "open") return BoundaryKind::open;
  if (s == "periodic") return BoundaryKind::periodic;
  fail(path, "unknown boundary '" + s + "'; expected one of open, periodic");
}

StateKind state_kind(const std::string& s, const std::string& path) {
  if (s == "product") return StateKind::product;
  if (s == "cdw") return StateKind::cdw;
  if (s == "amplitudes") return StateKind::amplitude_vector;
  if (s == "mixed_system_bath") return StateKind::mixed_system_bath;
  fail(path, "unknown state kind '" + s +
                 "'; expected one of product, cdw, amplitudes, mixed_system_bath");
}

ObservableKind observable_kind(const std::string& s, const std::string& path) {
  if (s == "site_pauli") return ObservableKind::site_pauli;
  if (s == "magnetization") return ObservableKind::magnetization;
  if (s == "imbalance") return ObservableKind::imbalance;
  if (s == "projector") return ObservableKind::projector;
  if (s == "custom") return ObservableKind::custom;
  fail(path, "unknown observable kind '" + s +
                 "'; expected one of site_pauli, magnetization, imbalance, projector, custom");
}

std::vector<PauliTerm> parse_terms(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of pauli terms");
  std::vector<PauliTerm> terms;
  std::size_t i = 0;
  for (const auto& e : j) {
    std::string tp = path + "[" + std::to_string(i++) + "]";
    ObjectView term(e, tp);
    PauliTerm t;
    const json& coeff = term.require("coefficient");
    if (coeff.is_number()) {
      t.coefficient = Complex(coeff.get<double>(), 0.0);
    } else if (coeff.is_array() && coeff.size() == 2 && coeff[0].is_number() &&
               coeff[1].is_number()) {
      t.coefficient = Complex(coeff[0].get<double>(), coeff[1].get<double>());
    } else {
      fail(tp + ".coefficient", "expected a number or [re, im] pair");
    }
    t.pauli = term.str("pauli");
    term.done();
    terms.push_back(std::move(t));
  }
  return terms;
}

std::uint64_t parse_basis_state(const json& e, const std::string& path, int sites) {
  if (e.is_number_integer()) {
    std::int64_t v = e.get<std::int64_t>();
    if (v < 0 || v >= (std::int64_t{1} << sites)) {
      fail(path, "basis state " + std::to_string(v) + " outside 0..2^" + std::to_string(sites) +
                     "-1");
    }
    return static_cast<std::uint64_t>(v);
  }
  if (e.is_string()) {
    std::string bits = e.get<std::string>();
    if (static_cast<int>(bits.size()) != sites) {
      fail(path, "bit string '" + bits + "' does not match " + std::to_string(sites) + " sites");
    }
    std::uint64_t index = 0;
    for (char c : bits) {
      if (c != '0' && c != '1') fail(path, "bit string '" + bits + "' must contain only 0/1");
      index = (index << 1) | static_cast<std::uint64_t>(c - '0');
    }
    return index;
  }
  fail(path, "expected an integer index or a bit string");
}

SpinChainSpec parse_system(const json& j, const std::string& path) {
  ObjectView view(j, path);
  SpinChainSpec spec;
  spec.sites = static_cast<int>(view.integer("sites"));
  {
    const json& mj = view.require("model");
    ObjectView model(mj, path + ".model");
    spec.model = model_kind(model.str("kind"), path + ".model.kind");
    switch (spec.model) {
      case ModelKind::xxz_nnn:
        spec.jxy = model.number_or("jxy", 1.0);
        spec.jz = model.number_or("jz", 1.0);
        spec.j2 = model.number_or("j2", 0.0);
        break;
      case ModelKind::transverse_ising:
        spec.j = model.number_or("j", 1.0);
        spec.h = model.number_or("h", 1.0);
        break;
      case ModelKind::custom:
        spec.custom_terms = parse_terms(model.require("terms"), path + ".model.terms");
        break;
    }
    model.done();
  }
  spec.boundary = boundary_kind(view.str_or("boundary", "open"), path + ".boundary");
  if (const json* sector = view.optional("sector_sz")) {
    if (!sector->is_number_integer()) fail(path + ".sector_sz", "expected an integer");
    spec.sector_sz = sector->get<int>();
  }
  if (const json* dj = view.optional("disorder")) {
    ObjectView disorder(*dj, path + ".disorder");
    DisorderSpec d;
    d.strength = disorder.number("strength");
    d.seed = disorder.unsigned_or("seed", 0);
    disorder.done();
    if (d.strength < 0.0) fail(path + ".disorder.strength", "must be nonnegative");
    spec.disorder = d;
  }
  view.done();
  return spec;
}

StateSpec parse_state(const json& j, const std::string& path, int sites) {
  ObjectView view(j, path);
  StateSpec spec;
  spec.kind = state_kind(view.str("kind"), path + ".kind");
  switch (spec.kind) {
    case StateKind::product:
      spec.product_bits = view.str("bits");
      break;
    case StateKind::cdw:
      break;
    case StateKind::amplitude_vector: {
      std::vector<double> re = view.number_array("re");
      std::vector<double> im;
      if (view.has("im")) im = view.number_array("im");
      if (!im.empty() && im.size() != re.size()) {
        fail(path + ".im", "imaginary part length does not match the real part");
      }
      spec.amplitudes.resize(static_cast<Index>(re.size()));
      for (std::size_t i = 0; i < re.size(); ++i) {
        spec.amplitudes(static_cast<Index>(i)) = Complex(re[i], im.empty() ? 0.0 : im[i]);
      }
      break;
    }
    case StateKind::mixed_system_bath:
      spec.system_bits = view.str("system_bits");
      spec.bath_dim = view.integer("bath_dim");
      break;
  }
  view.done();
  (void)sites;
  return spec;
}

ObservableSpec parse_observable(const json& j, const std::string& path, int sites) {
  ObjectView view(j, path);
  ObservableSpec spec;
  spec.kind = observable_kind(view.str("kind"), path + ".kind");
  switch (spec.kind) {
    case ObservableKind::site_pauli: {
      spec.site = static_cast<int>(view.integer("site"));
      std::string axis = view.str_or("axis", "z");
      if (axis.size() != 1) fail(path + ".axis", "expected one of x, y, z");
      spec.axis = axis[0];
      break;
    }
    case ObservableKind::magnetization:
    case ObservableKind::imbalance:
      break;
    case ObservableKind::projector: {
      const json& states = view.require("states");
      if (!states.is_array() || states.empty()) {
        fail(path + ".states", "expected a nonempty array of basis states");
      }
      std::size_t i = 0;
      for (const auto& e : states) {
        spec.projector_states.push_back(
            parse_basis_state(e, path + ".states[" + std::to_string(i++) + "]", sites));
      }
      break;
    }
    case ObservableKind::custom:
      spec.custom_terms = parse_terms(view.require("terms"), path + ".terms");
      break;
  }
  view.done();
  return spec;
}

TimeGridSpec parse_time_grid(const json& j, const std::string& path) {
  ObjectView view(j, path);
  TimeGridSpec grid;
  grid.start = view.number("start");
  grid.stop = view.number("stop");
  grid.count = static_cast<int>(view.integer("count"));
  std::string spacing = view.str_or("spacing", "linear");
  if (spacing == "linear") {
    grid.log_spacing = false;
  } else if (spacing == "log") {
    grid.log_spacing = true;
  } else {
    fail(path + ".spacing", "unknown spacing '" + spacing + "'; expected one of linear, log");
  }
  view.done();
  if (grid.count < 2) fail(path + ".count", "need at least 2 points");
  if (!(grid.stop > grid.start)) fail(path, "stop must exceed start");
  if (grid.log_spacing && grid.start <= 0.0) fail(path + ".start", "log spacing needs start > 0");
  return grid;
}

Task parse_task(const json& j, const std::string& path, std::size_t index) {
  ObjectView view(j, path);
  Task task;
  std::string kind = view.str("kind");
  task.label = view.str_or("label", kind + "_" + std::to_string(index));
  if (kind == "spectrum") {
    SpectrumTask t;
    t.matrix_element_fit = view.boolean_or("matrix_element_fit", false);
    task.payload = t;
  } else if (kind == "dynamics") {
    DynamicsTask t;
    t.times = parse_time_grid(view.require("times"), path + ".times");
    task.payload = t;
  } else if (kind == "cloud") {
    CloudTask t;
    t.regularization = view.number_or("regularization", 0.0);
    t.times = view.number_array("times");
    if (t.times.empty()) fail(path + ".times", "need at least one snapshot time");
    task.payload = t;
  } else if (kind == "bounds") {
    BoundsTask t;
    t.horizons = view.number_array("horizons");
    if (t.horizons.empty()) fail(path + ".horizons", "need at least one averaging horizon");
    for (double h : t.horizons) {
      if (!(h > 0.0)) fail(path + ".horizons", "horizons must be positive");
    }
    t.samples = static_cast<int>(view.integer_or("samples", 2048));
    t.infinite_proxy_horizon = view.number_or("infinite_proxy_horizon", 1e4);
    t.rhs_scale_test_hook = view.number_or("rhs_scale_test_hook", 1.0);
    task.payload = t;
  } else if (kind == "ensemble") {
    EnsembleTask t;
    try {
      t.experiment.kind = experiment_kind_from_string(view.str("experiment"));
    } catch (const std::exception& e) {
      fail(path + ".experiment", e.what());
    }
    t.experiment.trials = static_cast<int>(view.integer_or("trials", 100));
    t.experiment.seed = view.unsigned_or("seed", 0);  // 0: inherit the run seed
    t.experiment.dim = view.integer_or("dim", 64);
    t.experiment.n_outcomes = static_cast<int>(view.integer_or("n_outcomes", 2));
    t.experiment.beta = view.number_or("beta", 1.0);
    t.experiment.width = view.number_or("width", 10.0);
    t.experiment.dim_neq = view.integer_or("dim_neq", 8);
    t.experiment.dim_system = view.integer_or("dim_system", 2);
    t.experiment.dim_bath = view.integer_or("dim_bath", 8);
    t.experiment.time_samples = static_cast<int>(view.integer_or("time_samples", 64));
    t.experiment.sites = static_cast<int>(view.integer_or("sites", 6));
    t.experiment.jxy = view.number_or("jxy", 1.0);
    t.experiment.jz = view.number_or("jz", 1.0);
    t.experiment.j2 = view.number_or("j2", 0.5);
    if (view.has("grid")) t.experiment.grid = view.number_array("grid");
    task.payload = t;
  } else {
    fail(path + ".kind", "unknown task '" + kind +
                             "'; expected one of spectrum, dynamics, cloud, bounds, ensemble");
  }
  view.done();
  return task;
}

}  // namespace

std::vector<double> TimeGridSpec::points() const {
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    double s = static_cast<double>(i) / (count - 1);
    out[static_cast<std::size_t>(i)] =
        log_spacing ? start * std::pow(stop / start, s) : start + (stop - start) * s;
  }
  return out;
}

RunConfig parse_config(const json& j) {
  ObjectView view(j, "");
  RunConfig config;
  config.system = parse_system(view.require("system"), "system");
  config.state = parse_state(view.require("state"), "state", config.system.sites);
  config.observable = parse_observable(view.require("observable"), "observable",
                                       config.system.sites);
  if (const json* tol = view.optional("tolerances")) {
    ObjectView tv(*tol, "tolerances");
    config.degeneracy_tolerance = tv.number_or("degeneracy", 1e-9);
    config.gap_tolerance = tv.number_or("gap", 1e-9);
    config.pair_budget = tv.integer_or("pair_budget", 20'000'000);
    config.time_samples = static_cast<int>(tv.integer_or("time_samples", 4096));
    tv.done();
    if (config.degeneracy_tolerance <= 0.0) fail("tolerances.degeneracy", "must be positive");
    if (config.gap_tolerance <= 0.0) fail("tolerances.gap", "must be positive");
  }
  config.output_dir = view.str_or("output_dir", "out");
  config.cache_dir = view.str_or("cache_dir", "");
  config.seed = view.unsigned_or("seed", 1);
  config.threads = static_cast<int>(view.integer_or("threads", 1));
  {
    const json& tasks = view.require("tasks");
    if (!tasks.is_array() || tasks.empty()) fail("tasks", "expected a nonempty array");
    std::size_t i = 0;
    for (const auto& e : tasks) {
      config.tasks.push_back(parse_task(e, "tasks[" + std::to_string(i) + "]", i));
      ++i;
    }
  }
  view.done();
  return config;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

json system_to_json(const SpinChainSpec& spec) {
  json j;
  j["sites"] = spec.sites;
  switch (spec.model) {
    case ModelKind::xxz_nnn:
      j["model"] = {{"kind", "xxz_nnn"}, {"jxy", spec.jxy}, {"jz", spec.jz}, {"j2", spec.j2}};
      break;
    case ModelKind::transverse_ising:
      j["model"] = {{"kind", "transverse_ising"}, {"j", spec.j}, {"h", spec.h}};
      break;
    case ModelKind::custom: {
      json terms = json::array();
      for (const auto& t : spec.custom_terms) {
        terms.push_back({{"coefficient", {t.coefficient.real(), t.coefficient.imag()}},
                         {"pauli", t.pauli}});
      }
      j["model"] = {{"kind", "custom"}, {"terms", terms}};
      break;
    }
  }
  j["boundary"] = spec.boundary == BoundaryKind::periodic ? "periodic" : "open";
  if (spec.sector_sz) j["sector_sz"] = *spec.sector_sz;
  if (spec.disorder) {
    j["disorder"] = {{"strength", spec.disorder->strength}, {"seed", spec.disorder->seed}};
  }
  return j;
}

json config_to_json(const RunConfig& config) {
  json j;
  j["system"] = system_to_json(config.system);
  switch (config.state.kind) {
    case StateKind::product:
      j["state"] = {{"kind", "product"}, {"bits", config.state.product_bits}};
      break;
    case StateKind::cdw:
      j["state"] = {{"kind", "cdw"}};
      break;
    case StateKind::amplitude_vector: {
      json re = json::array();
      json im = json::array();
      for (Index i = 0; i < config.state.amplitudes.size(); ++i) {
        re.push_back(config.state.amplitudes(i).real());
        im.push_back(config.state.amplitudes(i).imag());
      }
      j["state"] = {{"kind", "amplitudes"}, {"re", re}, {"im", im}};
      break;
    }
    case StateKind::mixed_system_bath:
      j["state"] = {{"kind", "mixed_system_bath"},
                    {"system_bits", config.state.system_bits},
                    {"bath_dim", config.state.bath_dim}};
      break;
  }
  switch (config.observable.kind) {
    case ObservableKind::site_pauli:
      j["observable"] = {{"kind", "site_pauli"},
                         {"site", config.observable.site},
                         {"axis", std::string(1, config.observable.axis)}};
      break;
    case ObservableKind::magnetization:
      j["observable"] = {{"kind", "magnetization"}};
      break;
    case ObservableKind::imbalance:
      j["observable"] = {{"kind", "imbalance"}};
      break;
    case ObservableKind::projector:
      j["observable"] = {{"kind", "projector"}, {"states", config.observable.projector_states}};
      break;
    case ObservableKind::custom: {
      json terms = json::array();
      for (const auto& t : config.observable.custom_terms) {
        terms.push_back({{"coefficient", {t.coefficient.real(), t.coefficient.imag()}},
                         {"pauli", t.pauli}});
      }
      j["observable"] = {{"kind", "custom"}, {"terms", terms}};
      break;
    }
  }
  j["tolerances"] = {{"degeneracy", config.degeneracy_tolerance},
                     {"gap", config.gap_tolerance},
                     {"pair_budget", config.pair_budget},
                     {"time_samples", config.time_samples}};
  j["output_dir"] = config.output_dir;
  if (!config.cache_dir.empty()) j["cache_dir"] = config.cache_dir;
  j["seed"] = config.seed;
  j["threads"] = config.threads;
  json tasks = json::array();
  for (const auto& task : config.tasks) {
    json t;
    t["label"] = task.label;
    if (const auto* s = std::get_if<SpectrumTask>(&task.payload)) {
      t["kind"] = "spectrum";
      t["matrix_element_fit"] = s->matrix_element_fit;
    } else if (const auto* d = std::get_if<DynamicsTask>(&task.payload)) {
      t["kind"] = "dynamics";
      t["times"] = {{"start", d->times.start},
                    {"stop", d->times.stop},
                    {"count", d->times.count},
                    {"spacing", d->times.log_spacing ? "log" : "linear"}};
    } else if (const auto* c = std::get_if<CloudTask>(&task.payload)) {
      t["kind"] = "cloud";
      t["regularization"] = c->regularization;
      t["times"] = c->times;
    } else if (const auto* b = std::get_if<BoundsTask>(&task.payload)) {
      t["kind"] = "bounds";
      t["horizons"] = b->horizons;
      t["samples"] = b->samples;
      t["infinite_proxy_horizon"] = b->infinite_proxy_horizon;
      t["rhs_scale_test_hook"] = b->rhs_scale_test_hook;
    } else if (const auto* e = std::get_if<EnsembleTask>(&task.payload)) {
      t["kind"] = "ensemble";
      t["experiment"] = to_string(e->experiment.kind);
      t["trials"] = e->experiment.trials;
      t["seed"] = e->experiment.seed;
      t["dim"] = e->experiment.dim;
      t["n_outcomes"] = e->experiment.n_outcomes;
      t["beta"] = e->experiment.beta;
      t["width"] = e->experiment.width;
      t["dim_neq"] = e->experiment.dim_neq;
      t["dim_system"] = e->experiment.dim_system;
      t["dim_bath"] = e->experiment.dim_bath;
      t["time_samples"] = e->experiment.time_samples;
      t["sites"] = e->experiment.sites;
      t["jxy"] = e->experiment.jxy;
      t["jz"] = e->experiment.jz;
      t["j2"] = e->experiment.j2;
      if (!e->experiment.grid.empty()) t["grid"] = e->experiment.grid;
    }
    tasks.push_back(t);
  }
  j["tasks"] = tasks;
  return j;
}

}  // namespace eqsim
