#pragma once

#include <span>
#include <vector>

#include "minfinity/scalar_field.hpp"

namespace minfinity {

/// A point (theta, a, b) of the augmented parameter space.
struct AugPoint {
  ThetaVector theta;
  double a = 0.0;
  double b = 0.0;
};

enum class SaturationPolicy {
  error,              // throw SaturationError
  flag_and_saturate,  // clamp the exponent and mark the result
};

struct AugConfig {
  double lambda = 1.0;
  /// Largest exponent admitted in a*exp(b); exp(b_clamp) must be finite.
  double b_clamp = 700.0;
  SaturationPolicy saturation = SaturationPolicy::flag_and_saturate;

  /// Throws UsageError unless lambda > 0 and 0 < b_clamp <= log(DBL_MAX).
  void validate() const;
};

struct UValue {
  double u = 0.0;
  bool saturated = false;
};

struct AugValue {
  double base_loss = 0.0;  // L(theta)
  double loss = 0.0;       // augmented loss
  double u = 0.0;
  bool saturated = false;
};

struct AugGradient {
  ThetaVector d_theta;
  double d_a = 0.0;
  double d_b = 0.0;
  bool saturated = false;

  double norm() const;
};

/// u = a*exp(b), computed as sign(a)*exp(ln|a| + b).
UValue eval_u(double a, double b, const AugConfig& cfg);

/// Augmented loss for a known base value L; the building block for contour slices.
AugValue augment_value(double base_loss, double a, double b, const AugConfig& cfg);

/// L(theta) (1 + (a e^b - 1)^2) + lambda a^2.
double eval_augmented(const ScalarField& field, const AugPoint& p, const AugConfig& cfg);
AugValue eval_augmented_detail(const ScalarField& field, const AugPoint& p, const AugConfig& cfg);

/**
 * Closed-form gradient of the augmented loss:
 *   d_theta = grad L(theta) (1 + (u - 1)^2)
 *   d_a     = 2 L(theta) (u - 1) e^b + 2 lambda a
 *   d_b     = 2 L(theta) (u - 1) u
 * e^b alone is guarded by the same exponent clamp as u.
 */
AugGradient grad_augmented(const ScalarField& field, const AugPoint& p, const AugConfig& cfg);

/// Flat layout (theta..., a, b) used by generic descent and the oracles.
std::vector<double> pack(const AugPoint& p);
std::vector<double> pack(const AugGradient& g);
AugPoint unpack(std::span<const double> x);

/// Gradient with respect to (a, b) only, for a known base value L.
AugGradient grad_augmented_ab(double base_loss, double a, double b, const AugConfig& cfg);

}  // namespace minfinity
