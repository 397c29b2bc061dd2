#pragma once

#include <string>
#include <vector>

namespace gpgm {

struct SuiteResult {
  std::string name;
  bool pass = false;
  std::size_t checks = 0;
  std::string detail;  // first failure, or a short summary
  double seconds = 0.0;
};

/// Runs the built-in invariant suites: "appendixA" (operator-valued measure
/// identities), "convolution" (Gaussian score factorization), and
/// "pgm-reduction" (singleton GPGM equals the finite PGM).
std::vector<SuiteResult> run_selftest();

}  // namespace gpgm
