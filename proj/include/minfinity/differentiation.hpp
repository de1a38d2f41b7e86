#pragma once

#include <functional>
#include <span>
#include <vector>

#include "minfinity/augmentation.hpp"
#include "minfinity/dual.hpp"
#include "minfinity/scalar_field.hpp"

namespace minfinity {

using ScalarFunction = std::function<double(std::span<const double>)>;
using LiftedFunction = std::function<DualScalar(std::span<const DualScalar>)>;

inline constexpr double kDefaultFdScale = 1e-6;

/// Central differences with h_i = h_scale * max(1, |x_i|). The divisor is the
/// representable stencil width, which equals 2 h_i up to rounding.
std::vector<double> fd_gradient(const ScalarFunction& f, std::span<const double> x,
                                double h_scale = kDefaultFdScale);

/// One forward pass per coordinate with a unit tangent.
std::vector<double> dual_gradient(const LiftedFunction& f, std::span<const double> x);

/// |x - y| / max(1, |x|, |y|).
double relative_error(double x, double y);
double max_relative_error(std::span<const double> x, std::span<const double> y);

/// Augmented loss over the packed layout (theta..., a, b), evaluated through
/// eval_augmented.
ScalarFunction augmented_objective(const ScalarField& field, const AugConfig& cfg);

/// The augmented loss written directly as L (1 + (a exp(b) - 1)^2) + lambda a^2
/// over dual numbers. Shares no code with the log-space evaluation or the
/// closed-form gradient, which makes it an independent oracle for both.
LiftedFunction augmented_lifted(const ScalarField& field, const AugConfig& cfg);

}  // namespace minfinity
