#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace parastat {

struct SelftestCheck {
  std::string suite;
  std::string name;
  std::uint64_t fingerprint = 0;  // of the R-matrix the check ran on
  double residual = 0.0;
  double tol = 0.0;
  bool passed() const;  // residual <= tol, NaN fails
};

struct SelftestOptions {
  std::vector<std::string> suites;  // empty: all
  std::optional<double> tol;        // replaces every per-check tolerance
  std::uint64_t seed = 20240611;
};

const std::vector<std::string>& selftest_suites();
// Throws ShapeError for an unknown suite name.
std::vector<SelftestCheck> run_selftest(const SelftestOptions& opts);

}  // namespace parastat
