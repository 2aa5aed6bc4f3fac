#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "eqsim/cache.hpp"
#include "eqsim/config.hpp"
#include "eqsim/runner.hpp"
#include "eqsim/version.hpp"

namespace {

int execute(const std::string& config_path, std::uint64_t* seed_override, int* threads_override,
            bool strict) {
  eqsim::RunConfig config;
  try {
    config = eqsim::parse_config_file(config_path);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }
  if (seed_override) config.seed = *seed_override;
  if (threads_override) config.threads = *threads_override;
  try {
    eqsim::RunOutcome outcome = eqsim::run_config(config, std::cout);
    if (outcome.violations > 0) {
      std::cerr << outcome.violations << " bound violation(s) detected\n";
      if (strict) return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"equilibration simulator: exact diagonalization, dephasing dynamics, and "
               "rigorous equilibration bounds"};
  app.set_version_flag("--version", std::string("eqsim ") + eqsim::version_string);
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  int threads = 0;
  bool seed_set = false, threads_set = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("config", config_path, "JSON configuration file")->required();
    cmd->add_option("--seed", seed, "override the run seed")->each([&](const std::string&) {
      seed_set = true;
    });
    cmd->add_option("--threads", threads, "worker thread count (0 = hardware)")
        ->each([&](const std::string&) { threads_set = true; });
  };

  CLI::App* run = app.add_subcommand("run", "execute the tasks in a configuration");
  add_common(run);
  CLI::App* verify = app.add_subcommand(
      "verify", "execute and exit nonzero if any measured quantity exceeds its bound");
  add_common(verify);

  CLI::App* cache = app.add_subcommand("cache", "manage the spectral decomposition cache");
  std::string cache_dir;
  bool do_clear = false, do_list = false;
  cache->add_option("--dir", cache_dir, "cache directory (default: EQSIM_CACHE_DIR or .eqsim-cache)");
  cache->add_flag("--clear", do_clear, "delete all cached decompositions");
  cache->add_flag("--list", do_list, "list cached decompositions");

  CLI11_PARSE(app, argc, argv);

  if (cache->parsed()) {
    std::string dir = eqsim::resolve_cache_dir(cache_dir);
    if (do_clear) {
      std::size_t n = eqsim::cache_clear(dir);
      std::cout << "removed " << n << " entr" << (n == 1 ? "y" : "ies") << " from " << dir << "\n";
    }
    if (do_list) {
      auto entries = eqsim::cache_list(dir);
      for (const auto& e : entries) std::cout << e.file << "  " << e.bytes << " bytes\n";
      std::cout << entries.size() << " entr" << (entries.size() == 1 ? "y" : "ies") << " in "
                << dir << "\n";
    }
    if (!do_clear && !do_list) {
      std::cerr << "cache: pass --list or --clear\n";
      return 1;
    }
    return 0;
  }

  return execute(config_path, seed_set ? &seed : nullptr, threads_set ? &threads : nullptr,
                 verify->parsed());
}
