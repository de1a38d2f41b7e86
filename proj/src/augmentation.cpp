#include "minfinity/augmentation.hpp"

#include <cmath>
#include <limits>

#include "minfinity/errors.hpp"

namespace minfinity {

namespace {

struct Exponential {
  double value = 0.0;
  bool saturated = false;
};

// exp(x) with x limited to [-clamp, clamp].
Exponential guarded_exp(double x, const AugConfig& cfg, const char* what) {
  if (std::abs(x) <= cfg.b_clamp) return {std::exp(x), false};
  if (cfg.saturation == SaturationPolicy::error) {
    throw SaturationError(std::string(what) + " exponent exceeds b_clamp");
  }
  return {std::exp(x < 0.0 ? -cfg.b_clamp : cfg.b_clamp), true};
}

void check_finite_ab(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw EvaluationError("a and b must be finite");
}

void check_result(bool finite, bool& saturated, const AugConfig& cfg, const char* what) {
  if (finite) return;
  if (cfg.saturation == SaturationPolicy::error) {
    throw SaturationError(std::string("non-finite ") + what);
  }
  saturated = true;
}

}  // namespace

void AugConfig::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw UsageError("lambda must be positive");
  if (!(b_clamp > 0.0) || !(b_clamp <= std::log(std::numeric_limits<double>::max()))) {
    throw UsageError("b_clamp must be positive with exp(b_clamp) representable");
  }
}

double AugGradient::norm() const {
  double s = d_a * d_a + d_b * d_b;
  for (double g : d_theta) s += g * g;
  return std::sqrt(s);
}

UValue eval_u(double a, double b, const AugConfig& cfg) {
  check_finite_ab(a, b);
  if (a == 0.0) return {0.0, false};
  const auto e = guarded_exp(std::log(std::abs(a)) + b, cfg, "ln|a| + b");
  return {std::copysign(e.value, a), e.saturated};
}

AugValue augment_value(double base_loss, double a, double b, const AugConfig& cfg) {
  const UValue u = eval_u(a, b, cfg);
  const double dev = u.u - 1.0;
  AugValue out;
  out.base_loss = base_loss;
  out.u = u.u;
  out.saturated = u.saturated;
  out.loss = base_loss * (1.0 + dev * dev) + cfg.lambda * a * a;
  check_result(std::isfinite(out.loss), out.saturated, cfg, "augmented loss");
  return out;
}

AugValue eval_augmented_detail(const ScalarField& field, const AugPoint& p, const AugConfig& cfg) {
  return augment_value(field.evaluate(p.theta), p.a, p.b, cfg);
}

double eval_augmented(const ScalarField& field, const AugPoint& p, const AugConfig& cfg) {
  return eval_augmented_detail(field, p, cfg).loss;
}

AugGradient grad_augmented_ab(double base_loss, double a, double b, const AugConfig& cfg) {
  const UValue u = eval_u(a, b, cfg);
  AugGradient g;
  g.saturated = u.saturated;
  const double dev = u.u - 1.0;
  // At L = 0 the e^b factor is multiplied by zero; skip it so large b is not flagged.
  if (base_loss != 0.0) {
    const auto eb = guarded_exp(b, cfg, "b");
    g.saturated = g.saturated || eb.saturated;
    g.d_a = 2.0 * base_loss * dev * eb.value + 2.0 * cfg.lambda * a;
  } else {
    g.d_a = 2.0 * cfg.lambda * a;
  }
  g.d_b = 2.0 * base_loss * dev * u.u;
  check_result(std::isfinite(g.d_a) && std::isfinite(g.d_b), g.saturated, cfg, "gradient");
  return g;
}

AugGradient grad_augmented(const ScalarField& field, const AugPoint& p, const AugConfig& cfg) {
  const double base = field.evaluate(p.theta);
  AugGradient g = grad_augmented_ab(base, p.a, p.b, cfg);
  const double dev = eval_u(p.a, p.b, cfg).u - 1.0;
  const double multiplier = 1.0 + dev * dev;
  g.d_theta = field.gradient(p.theta);
  bool finite = std::isfinite(multiplier);
  for (double& x : g.d_theta) {
    x *= multiplier;
    finite = finite && std::isfinite(x);
  }
  check_result(finite, g.saturated, cfg, "theta gradient");
  return g;
}

std::vector<double> pack(const AugPoint& p) {
  std::vector<double> x(p.theta);
  x.push_back(p.a);
  x.push_back(p.b);
  return x;
}

std::vector<double> pack(const AugGradient& g) {
  std::vector<double> x(g.d_theta);
  x.push_back(g.d_a);
  x.push_back(g.d_b);
  return x;
}

AugPoint unpack(std::span<const double> x) {
  if (x.size() < 3) throw UsageError("packed augmented point needs at least 3 coordinates");
  const std::size_t n = x.size() - 2;
  return AugPoint{ThetaVector(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n)), x[n], x[n + 1]};
}

}  // namespace minfinity
