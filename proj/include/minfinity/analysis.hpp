#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "minfinity/augmentation.hpp"
#include "minfinity/scalar_field.hpp"

namespace minfinity {

struct FinderOptions {
  std::size_t max_iterations = 20000;
  double grad_tol = 1e-8;
  double b_max = 20.0;
  int max_halvings = 60;
  /// Largest coordinate move per iteration.
  double max_displacement = 0.1;
  Interval a_box{-2.0, 2.0};
  Interval b_box{-3.0, 3.0};
};

/// A descent run of the critical-point finder and its certificate.
struct CriticalPointReport {
  AugPoint point;
  double grad_norm = 0.0;
  double base_loss = 0.0;  // L(theta) at the final point
  std::size_t seed_index = 0;
  std::size_t iterations = 0;
  bool converged = false;  // grad_norm <= grad_tol and |b| <= b_max
};

/// Seeded start for run `index`; independent of how runs are scheduled.
AugPoint finder_start(const ScalarField& field, std::uint64_t seed, std::size_t index,
                      const FinderOptions& options = {});

/**
 * Step-halving descent on the augmented loss from n_seeds random starts
 * (theta uniform in the domain, a and b uniform in their boxes). Every run is
 * reported in seed order; non-convergence is data, not an error.
 */
std::vector<CriticalPointReport> find_critical_points(const ScalarField& field,
                                                      const AugConfig& cfg, std::size_t n_seeds,
                                                      std::uint64_t seed,
                                                      const FinderOptions& options = {});

/// Infimum of the augmented loss over (a, b) at fixed theta: the best point on
/// the curve a = exp(-b), b in [0, b_max], polished by local descent in (a, b).
/// Equals L(theta) up to lambda exp(-2 b_max).
double probe_infimum(const ScalarField& field, const ThetaVector& theta, const AugConfig& cfg,
                     double b_max = 20.0);
double probe_infimum_at(double base_loss, const AugConfig& cfg, double b_max = 20.0);

struct AxisRange {
  double lo = 0.0;
  double hi = 0.0;
};

/// Augmented loss with L(theta) replaced by a constant, sampled on a uniform
/// (a, b) lattice. values is row-major: row i is a_axis[i], column j is b_axis[j].
struct ContourGrid {
  std::vector<double> a_axis;
  std::vector<double> b_axis;
  std::vector<double> values;
  std::vector<unsigned char> saturated;
  double l_slice = 0.0;
  double lambda = 1.0;

  std::size_t rows() const { return a_axis.size(); }
  std::size_t cols() const { return b_axis.size(); }
  double at(std::size_t i, std::size_t j) const { return values[i * cols() + j]; }
  std::size_t saturated_cells() const;
};

/// Uniform axis with exact endpoints: lo + (hi - lo) * k / (n - 1).
std::vector<double> uniform_axis(AxisRange range, std::size_t n);

ContourGrid sample_contour(double l_slice, double lambda, AxisRange a_range, AxisRange b_range,
                           std::size_t a_resolution, std::size_t b_resolution,
                           double b_clamp = 700.0);

struct GridCell {
  std::size_t i = 0;
  std::size_t j = 0;
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
};

/// Interior cells no larger than any of their 8 neighbours, in row-major order.
/// Plateaus report every cell.
std::vector<GridCell> stationarity_scan(const ContourGrid& grid);

/// First row-major cell attaining the grid minimum.
GridCell grid_minimum(const ContourGrid& grid);

/// All cells within `tol` of the grid minimum, in row-major order.
std::vector<GridCell> minimizing_set(const ContourGrid& grid, double tol = 0.0);

}  // namespace minfinity
