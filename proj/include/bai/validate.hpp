#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bai/algorithm.hpp"

namespace bai {

struct SuiteResult {
  std::string name;
  bool passed = false;
  double millis = 0.0;
  std::string detail;  // failure description or summary counts
};

struct ValidateOptions {
  // Run only the named suite when nonempty.
  std::string suite_filter;
  // Negative-control hook: flips the sign of the divergence used by the
  // property checks, which must trip the pinsker suite.
  bool corrupt_kl = false;
};

std::vector<std::string> validation_suite_names();

// Runs the property suites (kl roundtrips, divergence inequalities, phi
// brute-force checks, the max-min weight oracle against a simplex grid, and
// stopping-rule replay). Returns one result per executed suite.
std::vector<SuiteResult> run_validation(const ValidateOptions& options);

// Replays a trace of (arm, reward) pulls: rebuilds the statistics step by
// step and re-evaluates candidates and the stopping predicate from scratch.
// Returns true iff the predicate is false at every decision step before the
// end of the trace and true exactly at the final step.
bool replay_confirms_stop(const BanditInstance& instance, double delta,
                          const Trace& trace, std::string* why = nullptr);

}  // namespace bai
