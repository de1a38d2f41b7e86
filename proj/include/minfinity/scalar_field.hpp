#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "minfinity/dual.hpp"

namespace minfinity {

using ThetaVector = std::vector<double>;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// A registered stationary point of the base loss with strictly positive value.
struct KnownMinimum {
  ThetaVector theta;
  double value = 0.0;
};

/// Closed-form base loss before normalization.
struct FieldDefinition {
  std::string name;
  std::vector<Interval> domain;
  std::function<double(std::span<const double>)> value;
  std::function<void(std::span<const double>, std::span<double>)> gradient;
  std::function<DualScalar(std::span<const DualScalar>)> lifted;
  /// Starting points that are polished into known bad minima.
  std::vector<ThetaVector> bad_minimum_seeds;
};

struct NormalizationOptions {
  std::size_t starts = 32;
  std::size_t lattice_starts = 16;  // remaining starts are uniform random
  std::uint64_t seed = 20190917;
  std::size_t max_iterations = 20000;
  double grad_tol = 1e-10;
};

/**
 * A base loss L(theta) on a closed box, shifted so that its minimum over the
 * box is zero. The violator field skips the shift and reports
 * `satisfies_zero_minimum() == false`.
 */
class ScalarField {
 public:
  const std::string& name() const { return name_; }
  std::size_t dim() const { return domain_.size(); }
  std::span<const Interval> domain() const { return domain_; }
  double offset() const { return offset_; }
  const ThetaVector& global_minimizer() const { return global_minimizer_; }
  std::span<const KnownMinimum> known_bad_minima() const { return bad_minima_; }
  bool satisfies_zero_minimum() const { return zero_minimum_; }

  /// L(theta) - offset. Throws UsageError on dimension mismatch and
  /// EvaluationError outside the domain or on a non-finite result.
  double evaluate(std::span<const double> theta) const;

  /// Analytic gradient; the offset does not contribute.
  ThetaVector gradient(std::span<const double> theta) const;
  void gradient_into(std::span<const double> theta, std::span<double> out) const;

  /// Dual-number lift of evaluate() with no domain checks.
  DualScalar evaluate_lifted(std::span<const DualScalar> theta) const;

  bool contains(std::span<const double> theta) const;
  /// Projects theta onto the domain box; returns true when a coordinate moved.
  bool clamp(std::span<double> theta) const;

 private:
  friend ScalarField normalize_field(FieldDefinition raw, const NormalizationOptions& options);
  friend ScalarField unnormalized_field(FieldDefinition raw);

  void check_dimension(std::span<const double> theta) const;
  void register_bad_minima(const std::vector<ThetaVector>& seeds);

  std::string name_;
  std::vector<Interval> domain_;
  std::function<double(std::span<const double>)> raw_value_;
  std::function<void(std::span<const double>, std::span<double>)> raw_gradient_;
  std::function<DualScalar(std::span<const DualScalar>)> raw_lifted_;
  double offset_ = 0.0;
  ThetaVector global_minimizer_;
  std::vector<KnownMinimum> bad_minima_;
  bool zero_minimum_ = true;
};

/// Locates the global minimum by multistart descent and shifts it to zero.
/// Throws EvaluationError when no start terminates at a minimum.
ScalarField normalize_field(FieldDefinition raw, const NormalizationOptions& options = {});

/// Wraps a definition without shifting it (precondition violators).
ScalarField unnormalized_field(FieldDefinition raw);

// Shipped definitions.
FieldDefinition quadratic_definition(std::size_t dim);
FieldDefinition rastrigin_definition(std::size_t dim);
FieldDefinition ackley_definition();
FieldDefinition double_well_definition();
FieldDefinition violator_definition();

/// Names accepted by get_field(), in registry order.
std::vector<std::string> field_names();

/// Registry lookup by name ("rastrigin-2d"); throws UsageError when unknown.
const ScalarField& get_field(std::string_view name);

/// Every shipped field, violator included.
std::vector<const ScalarField*> shipped_fields();

}  // namespace minfinity
