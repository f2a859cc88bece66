#pragma once

#include <cstdint>
#include <string>

#include "rearrangement.hpp"

namespace polareig {

struct SuiteOptions {
  uint64_t seed = 2024;
  int counts = 1000;  // trials for the pairing batteries; others scale down
  // Test hook: perturbs one polarized value inside the Hardy-Littlewood
  // battery so negative gaps must surface. Never exposed through the CLI.
  bool corrupt_polarization = false;
};

struct SuiteResult {
  int exit_code = 0;  // 0 all batteries pass, 1 otherwise
  int failures = 0;
  std::string table;  // one line per battery
};

// Randomized invariant batteries over a fixed mask zoo: Hardy-Littlewood and
// reverse gaps, equimeasurability/idempotence of polarization, extremal
// rearrangements against exhaustive permutation search, and the iterative
// eigensolver against the dense oracle.
SuiteResult run_property_suite(const SuiteOptions& opts);

}  // namespace polareig
