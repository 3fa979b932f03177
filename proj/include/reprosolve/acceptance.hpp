#pragma once

#include <string>
#include <vector>

#include "reprosolve/harness.hpp"

namespace reprosolve {

struct CriterionResult {
  std::string id;
  std::string name;
  bool passed = false;
  std::string details;  // measured values against the pinned tolerances
  double seconds = 0;
  std::string csv;  // byte-stable artifact, re-checked by the determinism gate
};

// Fixed master seed for the acceptance experiments.
inline constexpr std::uint64_t kAcceptanceSeed = 20240703;

// Ball radius for the large bilinear replication experiment and figure.
inline constexpr double kMinimaxReplicationRadius = 20.0;

// The full acceptance gate (criteria C1..C9), in order.
std::vector<CriterionResult> run_acceptance();

// Fast self-contained re-check of the module invariants (no files, no network).
std::vector<CriterionResult> run_invariants();

std::string results_table(const std::vector<CriterionResult>& results);
bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace reprosolve
