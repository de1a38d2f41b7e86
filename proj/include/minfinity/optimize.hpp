#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "minfinity/augmentation.hpp"
#include "minfinity/scalar_field.hpp"

namespace minfinity {

enum class OptimizerKind { gd, momentum, adam };

struct OptimizerSpec {
  OptimizerKind kind = OptimizerKind::gd;
  double step_size = 1e-2;
  double momentum = 0.9;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t max_steps = 100000;
  double grad_tol = 1e-8;

  void validate() const;
};

/// Regime thresholds. Defaults separate the finite and asymptotic regimes by
/// at least four orders of magnitude.
struct Thresholds {
  double b_max = 20.0;
  double a_tol = 1e-3;
  double l_tol = 1e-4;
  double u_tol = 0.1;
  double grad_tol = 1e-8;
};

enum class Outcome { converged_finite, minimum_at_infinity, budget_exhausted, numerical_failure };

std::string_view to_string(Outcome o);
std::string_view to_string(OptimizerKind k);
Outcome outcome_from_string(std::string_view s);
OptimizerKind optimizer_kind_from_string(std::string_view s);

struct OutcomeLabel {
  Outcome outcome = Outcome::budget_exhausted;
  // Certificate, taken from the final recorded step.
  double a = 0.0;
  double b = 0.0;
  double u = 0.0;
  double base_loss = 0.0;
  double grad_norm = 0.0;
};

struct TrajectoryStep {
  std::size_t step = 0;
  AugPoint point;
  double u = 0.0;
  double base_loss = 0.0;
  double loss = 0.0;
  double grad_norm = 0.0;
  bool saturated = false;
};

/**
 * Recorded optimizer path. Every step is kept up to `kDenseRecordLimit`,
 * then every 10th; the final state is always recorded. Plain runs keep a and
 * b at zero and store loss == base_loss.
 */
struct Trajectory {
  static constexpr std::size_t kDenseRecordLimit = 10000;
  static constexpr std::size_t kStride = 10;

  bool augmented = true;
  std::vector<TrajectoryStep> steps;
  OutcomeLabel outcome;
  std::size_t steps_taken = 0;
  std::size_t clamp_events = 0;
  std::size_t saturation_events = 0;
};

/// Exactly one label per trajectory; budget_exhausted is the fallback.
OutcomeLabel classify_trajectory(const Trajectory& t, const Thresholds& thresholds = {});

/// True when b never decreases across the final quarter of the recorded steps.
bool b_monotone_in_final_quarter(const Trajectory& t);

/**
 * First-order optimization of the augmented loss from `start`. Optimizer
 * state spans all n + 2 coordinates jointly. theta is clamped to the field's
 * domain after each update (counted in clamp_events). Non-finite values end
 * the run with a numerical_failure label rather than an exception.
 *
 * Stops when the gradient norm reaches grad_tol, when the asymptotic regime is
 * entered (b >= b_max, |u - 1| <= u_tol, |a| <= 10 a_tol), or after max_steps.
 * The run is deterministic; there is no stochastic component.
 */
Trajectory run_optimizer(const ScalarField& field, const AugPoint& start, const OptimizerSpec& spec,
                         const AugConfig& cfg, const Thresholds& thresholds = {});

/// Same optimizer on the base loss alone.
Trajectory run_plain(const ScalarField& field, const ThetaVector& start, const OptimizerSpec& spec,
                     const Thresholds& thresholds = {});

struct BaselineComparison {
  Trajectory plain;
  Trajectory augmented;
};

/// Plain and augmented runs from the same theta with identical specs. The
/// augmented run starts at (a0, b0).
BaselineComparison compare_baseline(const ScalarField& field, const ThetaVector& theta_start,
                                    const OptimizerSpec& spec, const AugConfig& cfg,
                                    double a0 = 0.1, double b0 = 0.0,
                                    const Thresholds& thresholds = {});

}  // namespace minfinity
