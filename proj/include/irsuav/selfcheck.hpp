#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace irsuav {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Recomputes SINR, rates, total power and energy efficiency for random
// instances (N <= 3, M <= 4, K <= 8) with straight-line real/imaginary
// arithmetic, independent of the production complex path, and compares at
// the given relative tolerance.
std::vector<CheckResult> metric_oracle_suite(int instances, std::uint64_t seed, double tolerance);

// Central finite differences (h = 1e-5) against the analytic reverse-mode
// gradients for the actor/critic/value/policy network shapes, including the
// input gradient used by the deterministic policy chain.
std::vector<CheckResult> gradient_check_suite(std::uint64_t seed, double tolerance);

// Structural invariants: coherent-alignment bound, clip-branch agreement,
// replay eviction, soft-update algebra, state information hiding and
// determinism under a fixed seed.
std::vector<CheckResult> invariant_suite(std::uint64_t seed);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace irsuav
