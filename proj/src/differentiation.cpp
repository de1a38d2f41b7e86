#include "minfinity/differentiation.hpp"

#include <algorithm>
#include <cmath>

#include "minfinity/errors.hpp"

namespace minfinity {

std::vector<double> fd_gradient(const ScalarFunction& f, std::span<const double> x,
                                double h_scale) {
  std::vector<double> g(x.size());
  std::vector<double> probe(x.begin(), x.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = h_scale * std::max(1.0, std::abs(x[i]));
    const double hi = x[i] + h;
    const double lo = x[i] - h;
    probe[i] = hi;
    const double f_hi = f(probe);
    probe[i] = lo;
    const double f_lo = f(probe);
    probe[i] = x[i];
    if (!std::isfinite(f_hi) || !std::isfinite(f_lo)) {
      throw EvaluationError("non-finite value on the finite-difference stencil");
    }
    g[i] = (f_hi - f_lo) / (hi - lo);
  }
  return g;
}

std::vector<double> dual_gradient(const LiftedFunction& f, std::span<const double> x) {
  std::vector<DualScalar> probe(x.begin(), x.end());
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    probe[i] = DualScalar::variable(x[i]);
    g[i] = f(probe).tangent();
    probe[i] = DualScalar(x[i]);
  }
  return g;
}

double relative_error(double x, double y) {
  return std::abs(x - y) / std::max({1.0, std::abs(x), std::abs(y)});
}

double max_relative_error(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw UsageError("vector size mismatch in relative error");
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = relative_error(x[i], y[i]);
    if (!(e <= worst)) worst = e;  // NaN propagates as the worst case
  }
  return worst;
}

ScalarFunction augmented_objective(const ScalarField& field, const AugConfig& cfg) {
  return [&field, cfg](std::span<const double> x) {
    return eval_augmented(field, unpack(x), cfg);
  };
}

LiftedFunction augmented_lifted(const ScalarField& field, const AugConfig& cfg) {
  return [&field, lambda = cfg.lambda](std::span<const DualScalar> x) {
    const std::size_t n = x.size() - 2;
    const DualScalar base = field.evaluate_lifted(x.first(n));
    const DualScalar& a = x[n];
    const DualScalar& b = x[n + 1];
    const DualScalar dev = a * exp(b) - 1.0;
    return base * (1.0 + dev * dev) + lambda * a * a;
  };
}

}  // namespace minfinity
