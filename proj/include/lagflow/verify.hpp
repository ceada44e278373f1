#pragma once

// Randomized property suites for the pointwise algebra, oracle-equivalence
// checks for the geometry, and small refinement studies. Everything is a
// deterministic function of the seed.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace lagflow {

struct VerifyOptions {
  std::uint64_t seed = 0;
  std::size_t inequality_samples = 1'000'000;
  std::size_t identity_samples = 100'000;
  std::size_t oracle_samples = 100'000;
  /// Test-harness mutation: flips the sign of the Cauchy-Schwarz residual.
  bool flip_cauchy_schwarz = false;
};

struct SuiteResult {
  std::string name;
  bool passed = true;
  std::size_t samples = 0;
  double worst = 0.0;       // worst normalized slack observed
  std::string failure;      // first failing sample, reproducible from the seed
};

struct VerifyReport {
  std::uint64_t seed = 0;
  std::vector<SuiteResult> suites;

  bool passed() const;
  nlohmann::json to_json() const;
};

VerifyReport run_verification(const VerifyOptions& options);

}  // namespace lagflow
