#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace minfinity {

struct DescentOptions {
  std::size_t max_iterations = 20000;
  double grad_tol = 1e-8;
  double initial_step = 1.0;
  double max_step = 1.0;
  int max_halvings = 60;
  /// Sufficient-decrease constant: accept when f(x - s g) <= f(x) - c s |g|^2.
  double armijo = 1e-4;
  /// Damping: caps the largest coordinate move per iteration (0 disables).
  double max_displacement = 0.0;
};

enum class DescentStatus {
  converged,   // gradient norm at or below grad_tol
  stalled,     // no decreasing step within max_halvings
  exhausted,   // iteration budget spent
  non_finite,  // objective or gradient stopped being finite
};

struct DescentResult {
  std::vector<double> x;
  double value = 0.0;
  double grad_norm = 0.0;
  std::size_t iterations = 0;
  DescentStatus status = DescentStatus::exhausted;
};

struct DescentProblem {
  std::function<double(std::span<const double>)> value;
  std::function<void(std::span<const double>, std::span<double>)> gradient;
  /// Optional projection applied to every trial point (box clamping).
  std::function<void(std::span<double>)> project;
  /// Optional extra condition for `converged`, checked alongside grad_tol.
  std::function<bool(std::span<const double>)> accept;
};

/**
 * Gradient descent with step halving: the step doubles (up to max_step)
 * after every accepted move and halves until the trial value passes the
 * sufficient-decrease test. No Hessian is formed, so singular plateaus are harmless.
 */
DescentResult backtracking_descent(const DescentProblem& problem, std::vector<double> start,
                                   const DescentOptions& options = {});

/// Continues from `start` accepting steps that shrink the gradient norm rather
/// than the value. Near a nondegenerate minimum this resolves the stationary
/// point well below the value-resolution limit where value-based descent stalls.
DescentResult refine_stationary(const DescentProblem& problem, std::vector<double> start,
                                const DescentOptions& options = {});

double euclidean_norm(std::span<const double> v);

}  // namespace minfinity
