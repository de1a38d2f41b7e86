#include "minfinity/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "minfinity/descent.hpp"
#include "minfinity/errors.hpp"
#include "minfinity/parallel.hpp"

namespace minfinity {

namespace {

double uniform_in(std::mt19937_64& rng, Interval iv) {
  std::uniform_real_distribution<double> dist(iv.lo, iv.hi);
  return dist(rng);
}

GridCell cell(const ContourGrid& g, std::size_t i, std::size_t j) {
  return GridCell{i, j, g.a_axis[i], g.b_axis[j], g.at(i, j)};
}

}  // namespace

AugPoint finder_start(const ScalarField& field, std::uint64_t seed, std::size_t index,
                      const FinderOptions& options) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  AugPoint p;
  p.theta.resize(field.dim());
  for (std::size_t d = 0; d < field.dim(); ++d) p.theta[d] = uniform_in(rng, field.domain()[d]);
  p.a = uniform_in(rng, options.a_box);
  p.b = uniform_in(rng, options.b_box);
  return p;
}

std::vector<CriticalPointReport> find_critical_points(const ScalarField& field,
                                                      const AugConfig& cfg, std::size_t n_seeds,
                                                      std::uint64_t seed,
                                                      const FinderOptions& options) {
  if (n_seeds < 1) throw UsageError("n_seeds must be at least 1");
  cfg.validate();
  AugConfig run_cfg = cfg;
  run_cfg.saturation = SaturationPolicy::flag_and_saturate;

  DescentProblem problem;
  problem.value = [&field, run_cfg](std::span<const double> x) {
    const AugValue v = eval_augmented_detail(field, unpack(x), run_cfg);
    return v.saturated ? std::numeric_limits<double>::infinity() : v.loss;
  };
  problem.gradient = [&field, run_cfg](std::span<const double> x, std::span<double> out) {
    const auto g = pack(grad_augmented(field, unpack(x), run_cfg));
    std::copy(g.begin(), g.end(), out.begin());
  };
  const std::size_t n = field.dim();
  problem.project = [&field, n](std::span<double> x) { field.clamp(x.first(n)); };
  const double b_max = options.b_max;
  problem.accept = [b_max](std::span<const double> x) { return std::abs(x.back()) <= b_max; };

  DescentOptions dopts;
  dopts.max_iterations = options.max_iterations;
  dopts.grad_tol = options.grad_tol;
  dopts.max_halvings = options.max_halvings;
  dopts.max_displacement = options.max_displacement;

  std::vector<CriticalPointReport> reports(n_seeds);
  parallel_for(n_seeds, [&](std::size_t i) {
    const AugPoint start = finder_start(field, seed, i, options);
    const DescentResult res = backtracking_descent(problem, pack(start), dopts);
    CriticalPointReport& r = reports[i];
    r.point = unpack(res.x);
    r.grad_norm = res.grad_norm;
    r.base_loss = field.evaluate(r.point.theta);
    r.seed_index = i;
    r.iterations = res.iterations;
    r.converged = res.status == DescentStatus::converged;
  });
  return reports;
}

double probe_infimum_at(double base_loss, const AugConfig& cfg, double b_max) {
  cfg.validate();
  if (!(base_loss >= 0.0)) throw EvaluationError("base loss must be non-negative");
  if (base_loss == 0.0) return 0.0;  // attained at a = 0 for every b

  AugConfig run_cfg = cfg;
  run_cfg.saturation = SaturationPolicy::flag_and_saturate;

  // On a = exp(-b) the product u is exactly one up to rounding, leaving
  // L + lambda exp(-2b), which decreases monotonically in b.
  constexpr std::size_t kCurveSamples = 401;
  double best = std::numeric_limits<double>::infinity();
  double best_b = 0.0;
  for (std::size_t k = 0; k < kCurveSamples; ++k) {
    const double b = b_max * static_cast<double>(k) / static_cast<double>(kCurveSamples - 1);
    const double v = augment_value(base_loss, std::exp(-b), b, run_cfg).loss;
    if (v < best) {
      best = v;
      best_b = b;
    }
  }

  DescentProblem problem;
  problem.value = [base_loss, run_cfg](std::span<const double> x) {
    const AugValue v = augment_value(base_loss, x[0], x[1], run_cfg);
    return v.saturated ? std::numeric_limits<double>::infinity() : v.loss;
  };
  problem.gradient = [base_loss, run_cfg](std::span<const double> x, std::span<double> out) {
    const AugGradient g = grad_augmented_ab(base_loss, x[0], x[1], run_cfg);
    out[0] = g.d_a;
    out[1] = g.d_b;
  };
  DescentOptions dopts;
  dopts.max_iterations = 200;
  dopts.grad_tol = 0.0;
  const auto polished = backtracking_descent(problem, {std::exp(-best_b), best_b}, dopts);
  return std::isfinite(polished.value) ? std::min(best, polished.value) : best;
}

double probe_infimum(const ScalarField& field, const ThetaVector& theta, const AugConfig& cfg,
                     double b_max) {
  return probe_infimum_at(field.evaluate(theta), cfg, b_max);
}

std::size_t ContourGrid::saturated_cells() const {
  return static_cast<std::size_t>(std::count(saturated.begin(), saturated.end(), 1));
}

std::vector<double> uniform_axis(AxisRange range, std::size_t n) {
  if (n < 2) throw UsageError("axis resolution must be at least 2");
  if (!std::isfinite(range.lo) || !std::isfinite(range.hi) || !(range.lo < range.hi)) {
    throw UsageError("axis range must be finite with lo < hi");
  }
  std::vector<double> axis(n);
  for (std::size_t k = 0; k < n; ++k) {
    axis[k] = range.lo + (range.hi - range.lo) * static_cast<double>(k) / static_cast<double>(n - 1);
  }
  axis.back() = range.hi;
  return axis;
}

ContourGrid sample_contour(double l_slice, double lambda, AxisRange a_range, AxisRange b_range,
                           std::size_t a_resolution, std::size_t b_resolution, double b_clamp) {
  if (!(l_slice >= 0.0) || !std::isfinite(l_slice)) throw UsageError("L slice must be >= 0");
  AugConfig cfg;
  cfg.lambda = lambda;
  cfg.b_clamp = b_clamp;
  cfg.saturation = SaturationPolicy::flag_and_saturate;
  cfg.validate();

  ContourGrid grid;
  grid.a_axis = uniform_axis(a_range, a_resolution);
  grid.b_axis = uniform_axis(b_range, b_resolution);
  grid.l_slice = l_slice;
  grid.lambda = lambda;
  grid.values.resize(a_resolution * b_resolution);
  grid.saturated.resize(a_resolution * b_resolution, 0);
  parallel_for(a_resolution, [&](std::size_t i) {
    for (std::size_t j = 0; j < b_resolution; ++j) {
      const AugValue v = augment_value(l_slice, grid.a_axis[i], grid.b_axis[j], cfg);
      grid.values[i * b_resolution + j] = v.loss;
      grid.saturated[i * b_resolution + j] = v.saturated ? 1 : 0;
    }
  });
  return grid;
}

std::vector<GridCell> stationarity_scan(const ContourGrid& grid) {
  std::vector<GridCell> out;
  if (grid.rows() < 3 || grid.cols() < 3) return out;
  for (std::size_t i = 1; i + 1 < grid.rows(); ++i) {
    for (std::size_t j = 1; j + 1 < grid.cols(); ++j) {
      const double c = grid.at(i, j);
      bool minimal = true;
      for (std::size_t di = 0; di < 3 && minimal; ++di) {
        for (std::size_t dj = 0; dj < 3; ++dj) {
          if (di == 1 && dj == 1) continue;
          if (grid.at(i + di - 1, j + dj - 1) < c) {
            minimal = false;
            break;
          }
        }
      }
      if (minimal) out.push_back(cell(grid, i, j));
    }
  }
  return out;
}

GridCell grid_minimum(const ContourGrid& grid) {
  if (grid.values.empty()) throw UsageError("empty grid");
  const auto it = std::min_element(grid.values.begin(), grid.values.end());
  const auto flat = static_cast<std::size_t>(it - grid.values.begin());
  return cell(grid, flat / grid.cols(), flat % grid.cols());
}

std::vector<GridCell> minimizing_set(const ContourGrid& grid, double tol) {
  const double lo = grid_minimum(grid).value;
  std::vector<GridCell> out;
  for (std::size_t i = 0; i < grid.rows(); ++i) {
    for (std::size_t j = 0; j < grid.cols(); ++j) {
      if (grid.at(i, j) <= lo + tol) out.push_back(cell(grid, i, j));
    }
  }
  return out;
}

}  // namespace minfinity
