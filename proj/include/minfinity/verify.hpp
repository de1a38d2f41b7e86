#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace minfinity {

/// One property checked over many samples. `worst` is the largest observed
/// error or offending value; `tolerance` is the bound it is held to.
struct CheckResult {
  std::string name;
  std::size_t checked = 0;
  std::size_t skipped = 0;
  std::size_t violations = 0;
  double worst = 0.0;
  double tolerance = 0.0;
  std::vector<std::string> examples;  // first few violations, human readable

  void record(bool ok, double value, const std::string& detail);
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;
  nlohmann::json details = nlohmann::json::object();

  bool passed() const;
  std::size_t violations() const;
  nlohmann::json to_json() const;
};

struct GradCheckOptions {
  std::size_t points_per_field = 1000;
  double fd_tolerance = 1e-6;
  double dual_tolerance = 1e-12;
};

struct CriticalPointOptions {
  std::size_t seeds_per_field = 256;
  double l_tolerance = 1e-4;
  double a_tolerance = 1e-3;
};

struct InfimumOptions {
  std::size_t thetas_per_field = 100;
  std::size_t lower_bound_samples_per_field = 10000;
  double tolerance = 1e-3;
};

/// Analytic augmented gradient against central differences and dual numbers
/// at seeded random points (theta in the domain, a in [-2,2], b in [-3,3]).
SuiteReport verify_grad_check(std::uint64_t seed, const GradCheckOptions& options = {});

/// Multi-seed critical-point finder on every shipped field. Converged reports
/// on zero-minimum fields must satisfy L <= 1e-4 and |a| <= 1e-3 and re-certify
/// their gradient norm; the violator must yield no converged report.
SuiteReport verify_critical_points(std::uint64_t seed, const CriticalPointOptions& options = {});

/// Infimum probe against L(theta), plus the pointwise lower bound
/// augmented >= L on random samples.
SuiteReport verify_infimum(std::uint64_t seed, const InfimumOptions& options = {});

}  // namespace minfinity
