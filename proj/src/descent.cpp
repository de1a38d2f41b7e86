#include "minfinity/descent.hpp"

#include <algorithm>
#include <cmath>

namespace minfinity {

double euclidean_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

DescentResult backtracking_descent(const DescentProblem& problem, std::vector<double> start,
                                   const DescentOptions& options) {
  DescentResult result;
  std::vector<double> x = std::move(start);
  if (problem.project) problem.project(x);
  std::vector<double> g(x.size());
  std::vector<double> trial(x.size());

  double f = problem.value(x);
  problem.gradient(x, g);
  double gn = euclidean_norm(g);
  double step = options.initial_step;

  auto finish = [&](DescentStatus status, std::size_t iterations) {
    result.x = x;
    result.value = f;
    result.grad_norm = gn;
    result.iterations = iterations;
    result.status = status;
    return result;
  };

  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    if (!std::isfinite(f) || !std::isfinite(gn)) return finish(DescentStatus::non_finite, it);
    if (gn <= options.grad_tol && (!problem.accept || problem.accept(x))) {
      return finish(DescentStatus::converged, it);
    }

    if (options.max_displacement > 0.0) {
      double g_inf = 0.0;
      for (double gi : g) g_inf = std::max(g_inf, std::abs(gi));
      if (step * g_inf > options.max_displacement) step = options.max_displacement / g_inf;
    }
    bool moved = false;
    double f_trial = f;
    for (int h = 0; h <= options.max_halvings; ++h) {
      for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] - step * g[i];
      if (problem.project) problem.project(trial);
      f_trial = problem.value(trial);
      // Predicted decrease along the projected displacement, so moves that
      // slide along a box face are judged by what they actually do.
      double predicted = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) predicted += g[i] * (x[i] - trial[i]);
      if (std::isfinite(f_trial) && f_trial < f && f_trial <= f - options.armijo * predicted) {
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) return finish(DescentStatus::stalled, it);

    x.swap(trial);
    f = f_trial;
    problem.gradient(x, g);
    gn = euclidean_norm(g);
    step = std::min(2.0 * step, options.max_step);
  }
  if (std::isfinite(f) && std::isfinite(gn) && gn <= options.grad_tol &&
      (!problem.accept || problem.accept(x))) {
    return finish(DescentStatus::converged, options.max_iterations);
  }
  return finish(DescentStatus::exhausted, options.max_iterations);
}

DescentResult refine_stationary(const DescentProblem& problem, std::vector<double> start,
                                const DescentOptions& options) {
  std::vector<double> x = std::move(start);
  if (problem.project) problem.project(x);
  std::vector<double> g(x.size());
  std::vector<double> trial(x.size());
  std::vector<double> g_trial(x.size());
  problem.gradient(x, g);
  double gn = euclidean_norm(g);
  double step = options.initial_step;

  DescentResult result;
  result.status = DescentStatus::exhausted;
  std::size_t it = 0;
  for (; it < options.max_iterations; ++it) {
    if (!std::isfinite(gn)) {
      result.status = DescentStatus::non_finite;
      break;
    }
    if (gn <= options.grad_tol) {
      result.status = DescentStatus::converged;
      break;
    }
    bool moved = false;
    double gn_trial = gn;
    for (int h = 0; h <= options.max_halvings; ++h) {
      for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] - step * g[i];
      if (problem.project) problem.project(trial);
      problem.gradient(trial, g_trial);
      gn_trial = euclidean_norm(g_trial);
      if (gn_trial < gn) {
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) {
      result.status = DescentStatus::stalled;
      break;
    }
    x.swap(trial);
    g.swap(g_trial);
    gn = gn_trial;
    step = std::min(2.0 * step, options.max_step);
  }
  result.value = problem.value(x);
  result.x = std::move(x);
  result.grad_norm = gn;
  result.iterations = it;
  return result;
}

}  // namespace minfinity
