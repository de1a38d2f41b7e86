#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "minfinity/analysis.hpp"
#include "minfinity/optimize.hpp"

namespace minfinity {

/// Shortest decimal form that round-trips to the same double; "nan", "inf", "-inf" otherwise.
std::string format_double(double x);

/// JSON number for finite values, null otherwise.
nlohmann::json json_number(double x);

/// Header: step,theta_0..theta_{n-1},a,b,u,L,L_tilde,grad_norm
std::string trajectory_csv_header(std::size_t theta_dim);
void write_trajectory_csv(std::ostream& os, const Trajectory& t);

nlohmann::json outcome_json(const OutcomeLabel& label);
/// Outcome plus run counters (steps taken, recorded rows, clamp and saturation events).
nlohmann::json trajectory_summary_json(const Trajectory& t);

/// First row holds "a\b" and the b axis; each further row is a_i followed by its values.
void write_contour_csv(std::ostream& os, const ContourGrid& grid);

/// Axes, lambda, L slice, grid minimum, minimizing set and stationarity scan.
nlohmann::json contour_json(const ContourGrid& grid);

/// Level values spread quadratically between the grid minimum and a cap
/// that keeps the informative low region resolved.
std::vector<double> default_contour_levels(const ContourGrid& grid, std::size_t count = 12);

/// Standalone SVG with marching-squares level sets; a horizontal, b vertical.
/// No timestamp unless `timestamp` is non-empty.
std::string render_contour_svg(const ContourGrid& grid, std::span<const double> levels,
                               const std::string& timestamp = {});

/// Writes `contents` to `path`, throwing IoError on failure.
void write_file(const std::filesystem::path& path, const std::string& contents);

/// Creates `dir` if needed; throws IoError when it cannot be used.
void ensure_directory(const std::filesystem::path& dir);

}  // namespace minfinity
