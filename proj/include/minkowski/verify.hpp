#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "minkowski/io.hpp"

namespace minkowski {

struct VerifyFailure {
  std::string invariant;
  std::string inputs;
  double observed = 0.0;
  std::string expected;
};

struct VerifyReport {
  std::string suite;
  long cases_run = 0;
  std::vector<VerifyFailure> failures;
  double wall_time = 0.0;  // seconds

  bool passed() const { return failures.empty(); }
  io::Json to_json() const;
};

// core, norms, legendre, birkhoff, bodies, projection, subdifferential, cli.
const std::vector<std::string>& verify_suites();

// Runs one invariant suite ("all" runs every suite and merges the reports).
// Throws DomainError for an unknown suite name.
VerifyReport run_suite(const std::string& suite, std::uint64_t seed);

}  // namespace minkowski
