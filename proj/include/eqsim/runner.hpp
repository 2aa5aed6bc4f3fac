#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "eqsim/bounds.hpp"
#include "eqsim/config.hpp"

namespace eqsim {

struct RunOutcome {
  std::vector<BoundReport> reports;
  std::vector<std::string> artifacts;  // files written under output_dir
  int violations = 0;                  // reports with satisfied == false
  bool cache_hit = false;
};

/// Executes every task of the config, writes CSV/JSON artifacts plus a
/// manifest into config.output_dir, and returns the collected bound reports.
RunOutcome run_config(const RunConfig& config, std::ostream& log);

/// Deterministic float formatting shared by all emitters (%.17g round-trip).
std::string format_double(double x);

}  // namespace eqsim
