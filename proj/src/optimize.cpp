#include "minfinity/optimize.hpp"

#include <cmath>
#include <functional>

#include "minfinity/descent.hpp"
#include "minfinity/errors.hpp"

namespace minfinity {

namespace {

struct Evaluation {
  double base_loss = 0.0;
  double loss = 0.0;
  double u = 0.0;
  bool saturated = false;
  std::vector<double> grad;
};

bool finite_step(const TrajectoryStep& s) {
  if (!std::isfinite(s.loss) || !std::isfinite(s.base_loss) || !std::isfinite(s.grad_norm) ||
      !std::isfinite(s.point.a) || !std::isfinite(s.point.b)) {
    return false;
  }
  for (double t : s.point.theta) {
    if (!std::isfinite(t)) return false;
  }
  return true;
}

bool in_asymptotic_regime(const TrajectoryStep& s, const Thresholds& th) {
  return s.point.b >= th.b_max && std::abs(s.u - 1.0) <= th.u_tol &&
         std::abs(s.point.a) <= 10.0 * th.a_tol;
}

class Stepper {
 public:
  Stepper(const OptimizerSpec& spec, std::size_t dim)
      : spec_(spec), first_(dim, 0.0), second_(dim, 0.0) {}

  void apply(std::vector<double>& x, const std::vector<double>& g, std::size_t t) {
    const double eta = spec_.step_size;
    switch (spec_.kind) {
      case OptimizerKind::gd:
        for (std::size_t i = 0; i < x.size(); ++i) x[i] -= eta * g[i];
        break;
      case OptimizerKind::momentum:
        for (std::size_t i = 0; i < x.size(); ++i) {
          first_[i] = spec_.momentum * first_[i] + g[i];
          x[i] -= eta * first_[i];
        }
        break;
      case OptimizerKind::adam: {
        const double c1 = 1.0 - std::pow(spec_.beta1, static_cast<double>(t));
        const double c2 = 1.0 - std::pow(spec_.beta2, static_cast<double>(t));
        for (std::size_t i = 0; i < x.size(); ++i) {
          first_[i] = spec_.beta1 * first_[i] + (1.0 - spec_.beta1) * g[i];
          second_[i] = spec_.beta2 * second_[i] + (1.0 - spec_.beta2) * g[i] * g[i];
          const double m_hat = first_[i] / c1;
          const double v_hat = second_[i] / c2;
          x[i] -= eta * m_hat / (std::sqrt(v_hat) + spec_.epsilon);
        }
        break;
      }
    }
  }

 private:
  const OptimizerSpec& spec_;
  std::vector<double> first_;
  std::vector<double> second_;
};

// Shared driver over the packed coordinates. `theta_dim` leading entries are
// clamped to the field domain; for augmented runs two auxiliary entries follow.
Trajectory drive(const ScalarField& field, std::vector<double> x, bool augmented,
                 const OptimizerSpec& spec, const Thresholds& thresholds,
                 const std::function<Evaluation(std::span<const double>)>& evaluate) {
  spec.validate();
  Trajectory traj;
  traj.augmented = augmented;
  const std::size_t n = field.dim();
  Thresholds th = thresholds;
  th.grad_tol = spec.grad_tol;

  auto clamp_theta = [&](std::vector<double>& v) {
    bool finite = true;
    for (std::size_t i = 0; i < n; ++i) finite = finite && std::isfinite(v[i]);
    if (finite && field.clamp(std::span<double>(v.data(), n))) ++traj.clamp_events;
  };
  clamp_theta(x);

  Stepper stepper(spec, x.size());
  bool stop_on_regime = false;
  for (std::size_t k = 0;; ++k) {
    TrajectoryStep rec;
    rec.step = k;
    rec.point.theta.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n));
    rec.point.a = augmented ? x[n] : 0.0;
    rec.point.b = augmented ? x[n + 1] : 0.0;

    Evaluation ev;
    bool failed = false;
    try {
      ev = evaluate(x);
      rec.base_loss = ev.base_loss;
      rec.loss = ev.loss;
      rec.u = ev.u;
      rec.saturated = ev.saturated;
      rec.grad_norm = euclidean_norm(ev.grad);
    } catch (const EvaluationError&) {
      failed = true;
    }
    if (failed) {
      rec.base_loss = rec.loss = rec.grad_norm = std::nan("");
    }
    if (rec.saturated) ++traj.saturation_events;

    const bool last = failed || !finite_step(rec) || rec.grad_norm <= th.grad_tol ||
                      k >= spec.max_steps;
    if (!last && augmented && in_asymptotic_regime(rec, th)) {
      // Confirm with the monotonicity check before stopping.
      traj.steps.push_back(rec);
      stop_on_regime = b_monotone_in_final_quarter(traj);
      traj.steps.pop_back();
    }

    const bool keep = k <= Trajectory::kDenseRecordLimit || k % Trajectory::kStride == 0;
    if (keep || last || stop_on_regime) traj.steps.push_back(rec);
    if (last || stop_on_regime) {
      traj.steps_taken = k;
      break;
    }

    stepper.apply(x, ev.grad, k + 1);
    clamp_theta(x);
  }

  traj.outcome = classify_trajectory(traj, th);
  return traj;
}

}  // namespace

void OptimizerSpec::validate() const {
  if (!(step_size > 0.0)) throw UsageError("step_size must be positive");
  if (max_steps < 1) throw UsageError("max_steps must be at least 1");
  if (!(grad_tol > 0.0)) throw UsageError("grad_tol must be positive");
  if (kind == OptimizerKind::adam) {
    if (!(epsilon > 0.0)) throw UsageError("adam epsilon must be positive");
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
      throw UsageError("adam betas must lie in [0, 1)");
    }
  }
  if (kind == OptimizerKind::momentum && !(momentum >= 0.0 && momentum < 1.0)) {
    throw UsageError("momentum must lie in [0, 1)");
  }
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::converged_finite: return "converged-finite";
    case Outcome::minimum_at_infinity: return "minimum-at-infinity";
    case Outcome::budget_exhausted: return "budget-exhausted";
    case Outcome::numerical_failure: return "numerical-failure";
  }
  return "budget-exhausted";
}

std::string_view to_string(OptimizerKind k) {
  switch (k) {
    case OptimizerKind::gd: return "gd";
    case OptimizerKind::momentum: return "momentum";
    case OptimizerKind::adam: return "adam";
  }
  return "gd";
}

Outcome outcome_from_string(std::string_view s) {
  for (Outcome o : {Outcome::converged_finite, Outcome::minimum_at_infinity,
                    Outcome::budget_exhausted, Outcome::numerical_failure}) {
    if (to_string(o) == s) return o;
  }
  throw UsageError("unknown outcome '" + std::string(s) + "'");
}

OptimizerKind optimizer_kind_from_string(std::string_view s) {
  for (OptimizerKind k : {OptimizerKind::gd, OptimizerKind::momentum, OptimizerKind::adam}) {
    if (to_string(k) == s) return k;
  }
  throw UsageError("unknown optimizer '" + std::string(s) + "'");
}

bool b_monotone_in_final_quarter(const Trajectory& t) {
  const std::size_t count = t.steps.size();
  if (count < 2) return false;
  const std::size_t begin = count - std::max<std::size_t>(2, count / 4);
  for (std::size_t i = begin + 1; i < count; ++i) {
    if (t.steps[i].point.b < t.steps[i - 1].point.b) return false;
  }
  return t.steps.back().point.b > t.steps[begin].point.b;
}

OutcomeLabel classify_trajectory(const Trajectory& t, const Thresholds& th) {
  OutcomeLabel label;
  if (t.steps.empty()) return label;
  const TrajectoryStep& last = t.steps.back();
  label.a = last.point.a;
  label.b = last.point.b;
  label.u = last.u;
  label.base_loss = last.base_loss;
  label.grad_norm = last.grad_norm;

  for (const auto& s : t.steps) {
    if (!finite_step(s)) {
      label.outcome = Outcome::numerical_failure;
      return label;
    }
  }
  if (last.grad_norm <= th.grad_tol && std::abs(last.point.b) <= th.b_max) {
    label.outcome = Outcome::converged_finite;
  } else if (t.augmented && in_asymptotic_regime(last, th) && b_monotone_in_final_quarter(t)) {
    label.outcome = Outcome::minimum_at_infinity;
  } else {
    label.outcome = Outcome::budget_exhausted;
  }
  return label;
}

Trajectory run_optimizer(const ScalarField& field, const AugPoint& start, const OptimizerSpec& spec,
                         const AugConfig& cfg, const Thresholds& thresholds) {
  cfg.validate();
  if (start.theta.size() != field.dim()) {
    throw UsageError("start dimension does not match field '" + field.name() + "'");
  }
  if (!std::isfinite(start.a) || !std::isfinite(start.b)) {
    throw UsageError("start a and b must be finite");
  }
  AugConfig run_cfg = cfg;
  run_cfg.saturation = SaturationPolicy::flag_and_saturate;
  auto evaluate = [&field, run_cfg](std::span<const double> x) {
    const AugPoint p = unpack(x);
    const AugValue v = eval_augmented_detail(field, p, run_cfg);
    const AugGradient g = grad_augmented(field, p, run_cfg);
    return Evaluation{v.base_loss, v.loss, v.u, v.saturated || g.saturated, pack(g)};
  };
  return drive(field, pack(start), true, spec, thresholds, evaluate);
}

Trajectory run_plain(const ScalarField& field, const ThetaVector& start, const OptimizerSpec& spec,
                     const Thresholds& thresholds) {
  if (start.size() != field.dim()) {
    throw UsageError("start dimension does not match field '" + field.name() + "'");
  }
  auto evaluate = [&field](std::span<const double> x) {
    const double l = field.evaluate(x);
    return Evaluation{l, l, 0.0, false, field.gradient(x)};
  };
  return drive(field, start, false, spec, thresholds, evaluate);
}

BaselineComparison compare_baseline(const ScalarField& field, const ThetaVector& theta_start,
                                    const OptimizerSpec& spec, const AugConfig& cfg, double a0,
                                    double b0, const Thresholds& thresholds) {
  BaselineComparison out;
  out.plain = run_plain(field, theta_start, spec, thresholds);
  out.augmented = run_optimizer(field, AugPoint{theta_start, a0, b0}, spec, cfg, thresholds);
  return out;
}

}  // namespace minfinity
