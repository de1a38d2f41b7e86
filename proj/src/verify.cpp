#include "minfinity/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "minfinity/analysis.hpp"
#include "minfinity/augmentation.hpp"
#include "minfinity/differentiation.hpp"
#include "minfinity/export.hpp"
#include "minfinity/scalar_field.hpp"

namespace minfinity {

namespace {

constexpr std::size_t kMaxExamples = 10;
constexpr double kFinderGradTol = 1e-8;

std::mt19937_64 field_rng(std::uint64_t seed, std::size_t field_index, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(field_index), stream};
  return std::mt19937_64(seq);
}

// Uniform theta in the domain, kept off the boundary so FD stencils stay inside.
ThetaVector interior_theta(const ScalarField& field, std::mt19937_64& rng) {
  ThetaVector theta(field.dim());
  for (std::size_t d = 0; d < field.dim(); ++d) {
    const auto iv = field.domain()[d];
    const double margin = 1e-3 * (iv.hi - iv.lo);
    std::uniform_real_distribution<double> dist(iv.lo + margin, iv.hi - margin);
    theta[d] = dist(rng);
  }
  return theta;
}

AugPoint random_aug_point(const ScalarField& field, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> a_dist(-2.0, 2.0);
  std::uniform_real_distribution<double> b_dist(-3.0, 3.0);
  AugPoint p;
  p.theta = interior_theta(field, rng);
  p.a = a_dist(rng);
  p.b = b_dist(rng);
  return p;
}

std::string describe(const AugPoint& p) {
  std::ostringstream os;
  os << "theta=(";
  for (std::size_t i = 0; i < p.theta.size(); ++i) {
    os << (i ? "," : "") << format_double(p.theta[i]);
  }
  os << ") a=" << format_double(p.a) << " b=" << format_double(p.b);
  return os.str();
}

CheckResult make_check(std::string name, double tolerance) {
  CheckResult c;
  c.name = std::move(name);
  c.tolerance = tolerance;
  return c;
}

}  // namespace

void CheckResult::record(bool ok, double value, const std::string& detail) {
  ++checked;
  if (!(value <= worst)) worst = value;
  if (!ok) {
    ++violations;
    if (examples.size() < kMaxExamples) examples.push_back(detail);
  }
}

bool SuiteReport::passed() const { return violations() == 0; }

std::size_t SuiteReport::violations() const {
  std::size_t n = 0;
  for (const auto& c : checks) n += c.violations;
  return n;
}

nlohmann::json SuiteReport::to_json() const {
  nlohmann::json checks_json = nlohmann::json::array();
  for (const auto& c : checks) {
    checks_json.push_back({{"name", c.name},
                           {"checked", c.checked},
                           {"skipped", c.skipped},
                           {"violations", c.violations},
                           {"worst", json_number(c.worst)},
                           {"tolerance", json_number(c.tolerance)},
                           {"examples", c.examples}});
  }
  return {{"suite", suite},
          {"seed", seed},
          {"passed", passed()},
          {"violations", violations()},
          {"checks", checks_json},
          {"details", details}};
}

SuiteReport verify_grad_check(std::uint64_t seed, const GradCheckOptions& options) {
  SuiteReport report;
  report.suite = "grad-check";
  report.seed = seed;
  AugConfig cfg;
  cfg.saturation = SaturationPolicy::flag_and_saturate;

  const auto fields = shipped_fields();
  for (std::size_t fi = 0; fi < fields.size(); ++fi) {
    const ScalarField& field = *fields[fi];
    auto rng = field_rng(seed, fi, 1);
    CheckResult fd = make_check("fd:" + field.name(), options.fd_tolerance);
    CheckResult dual = make_check("dual:" + field.name(), options.dual_tolerance);
    CheckResult field_fd = make_check("field-fd:" + field.name(), options.fd_tolerance);
    const auto objective = augmented_objective(field, cfg);
    const auto lifted = augmented_lifted(field, cfg);
    const ScalarFunction base = [&field](std::span<const double> t) { return field.evaluate(t); };

    for (std::size_t k = 0; k < options.points_per_field; ++k) {
      const AugPoint p = random_aug_point(field, rng);
      const AugGradient g = grad_augmented(field, p, cfg);
      if (g.saturated) {
        ++fd.skipped;
        ++dual.skipped;
        continue;
      }
      const auto analytic = pack(g);
      const auto x = pack(p);
      const double e_fd = max_relative_error(analytic, fd_gradient(objective, x));
      fd.record(e_fd <= options.fd_tolerance, e_fd, describe(p));
      const double e_dual = max_relative_error(analytic, dual_gradient(lifted, x));
      dual.record(e_dual <= options.dual_tolerance, e_dual, describe(p));

      const double e_field = max_relative_error(field.gradient(p.theta), fd_gradient(base, p.theta));
      field_fd.record(e_field <= options.fd_tolerance, e_field, describe(p));
    }
    report.checks.push_back(std::move(fd));
    report.checks.push_back(std::move(dual));
    report.checks.push_back(std::move(field_fd));
  }
  return report;
}

SuiteReport verify_critical_points(std::uint64_t seed, const CriticalPointOptions& options) {
  SuiteReport report;
  report.suite = "critical-points";
  report.seed = seed;
  AugConfig cfg;
  FinderOptions finder;
  finder.grad_tol = kFinderGradTol;

  const auto fields = shipped_fields();
  for (std::size_t fi = 0; fi < fields.size(); ++fi) {
    const ScalarField& field = *fields[fi];
    const auto reports = find_critical_points(field, cfg, options.seeds_per_field, seed + fi, finder);

    std::size_t converged = 0;
    double max_l = 0.0;
    double max_a = 0.0;
    double max_b = 0.0;
    CheckResult certify = make_check("certificate:" + field.name(), kFinderGradTol);
    if (field.satisfies_zero_minimum()) {
      CheckResult theorem = make_check("theorem:" + field.name(), options.l_tolerance);
      for (const auto& r : reports) {
        if (!r.converged) continue;
        ++converged;
        max_l = std::max(max_l, r.base_loss);
        max_a = std::max(max_a, std::abs(r.point.a));
        max_b = std::max(max_b, std::abs(r.point.b));
        const bool ok = r.base_loss <= options.l_tolerance && std::abs(r.point.a) <= options.a_tolerance;
        theorem.record(ok, r.base_loss, describe(r.point));
        const double gn = grad_augmented(field, r.point, cfg).norm();
        certify.record(gn <= kFinderGradTol, gn, describe(r.point));
      }
      report.checks.push_back(std::move(theorem));
    } else {
      CheckResult none = make_check("no-finite-critical-point:" + field.name(), 0.0);
      for (const auto& r : reports) {
        if (r.converged) ++converged;
        none.record(!r.converged, r.converged ? 1.0 : 0.0, describe(r.point));
      }
      report.checks.push_back(std::move(none));
    }
    report.checks.push_back(std::move(certify));
    report.details[field.name()] = {{"runs", reports.size()},
                                    {"converged", converged},
                                    {"max_L_converged", json_number(max_l)},
                                    {"max_abs_a_converged", json_number(max_a)},
                                    {"max_abs_b_converged", json_number(max_b)}};
  }
  return report;
}

SuiteReport verify_infimum(std::uint64_t seed, const InfimumOptions& options) {
  SuiteReport report;
  report.suite = "infimum";
  report.seed = seed;
  AugConfig cfg;
  cfg.saturation = SaturationPolicy::flag_and_saturate;

  const auto fields = shipped_fields();
  for (std::size_t fi = 0; fi < fields.size(); ++fi) {
    const ScalarField& field = *fields[fi];
    auto rng = field_rng(seed, fi, 2);
    CheckResult probe = make_check("infimum:" + field.name(), options.tolerance);
    for (std::size_t k = 0; k < options.thetas_per_field; ++k) {
      const ThetaVector theta = interior_theta(field, rng);
      const double l = field.evaluate(theta);
      const double inf = probe_infimum(field, theta, cfg);
      const double dev = inf - l;
      const bool ok = dev >= 0.0 && dev <= options.tolerance;
      probe.record(ok, std::abs(dev), describe(AugPoint{theta, 0.0, 0.0}));
    }
    report.checks.push_back(std::move(probe));

    CheckResult bound = make_check("lower-bound:" + field.name(), 0.0);
    for (std::size_t k = 0; k < options.lower_bound_samples_per_field; ++k) {
      const AugPoint p = random_aug_point(field, rng);
      const AugValue v = eval_augmented_detail(field, p, cfg);
      // Report how far below L the augmented value falls (0 when the bound holds).
      const double shortfall = std::max(0.0, v.base_loss - v.loss);
      bound.record(v.loss >= v.base_loss, shortfall, describe(p));
    }
    report.checks.push_back(std::move(bound));
  }
  return report;
}

}  // namespace minfinity
