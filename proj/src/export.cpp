#include "minfinity/export.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "minfinity/errors.hpp"

namespace minfinity {

namespace {

std::string fixed3(double x) {
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), "%.3f", x);
  return buf.data();
}

nlohmann::json cell_json(const GridCell& c) {
  return {{"i", c.i}, {"j", c.j}, {"a", json_number(c.a)}, {"b", json_number(c.b)},
          {"value", json_number(c.value)}};
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x < 0 ? "-inf" : "inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

nlohmann::json json_number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

std::string trajectory_csv_header(std::size_t theta_dim) {
  std::string h = "step";
  for (std::size_t i = 0; i < theta_dim; ++i) h += ",theta_" + std::to_string(i);
  h += ",a,b,u,L,L_tilde,grad_norm";
  return h;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& t) {
  const std::size_t n = t.steps.empty() ? 0 : t.steps.front().point.theta.size();
  os << trajectory_csv_header(n) << '\n';
  for (const auto& s : t.steps) {
    os << s.step;
    for (double th : s.point.theta) os << ',' << format_double(th);
    os << ',' << format_double(s.point.a) << ',' << format_double(s.point.b) << ','
       << format_double(s.u) << ',' << format_double(s.base_loss) << ','
       << format_double(s.loss) << ',' << format_double(s.grad_norm) << '\n';
  }
}

nlohmann::json outcome_json(const OutcomeLabel& label) {
  return {{"label", std::string(to_string(label.outcome))},
          {"certificate",
           {{"a", json_number(label.a)},
            {"b", json_number(label.b)},
            {"u", json_number(label.u)},
            {"L", json_number(label.base_loss)},
            {"grad_norm", json_number(label.grad_norm)}}}};
}

nlohmann::json trajectory_summary_json(const Trajectory& t) {
  nlohmann::json j = outcome_json(t.outcome);
  j["augmented"] = t.augmented;
  j["steps_taken"] = t.steps_taken;
  j["recorded_rows"] = t.steps.size();
  j["clamp_events"] = t.clamp_events;
  j["saturation_events"] = t.saturation_events;
  if (!t.steps.empty()) {
    const auto& last = t.steps.back();
    nlohmann::json theta = nlohmann::json::array();
    for (double x : last.point.theta) theta.push_back(json_number(x));
    j["final"] = {{"theta", theta},
                  {"L", json_number(last.base_loss)},
                  {"L_tilde", json_number(last.loss)}};
  }
  return j;
}

void write_contour_csv(std::ostream& os, const ContourGrid& grid) {
  os << "a\\b";
  for (double b : grid.b_axis) os << ',' << format_double(b);
  os << '\n';
  for (std::size_t i = 0; i < grid.rows(); ++i) {
    os << format_double(grid.a_axis[i]);
    for (std::size_t j = 0; j < grid.cols(); ++j) os << ',' << format_double(grid.at(i, j));
    os << '\n';
  }
}

nlohmann::json contour_json(const ContourGrid& grid) {
  nlohmann::json j;
  j["l_slice"] = json_number(grid.l_slice);
  j["lambda"] = json_number(grid.lambda);
  j["a_axis"] = {{"lo", json_number(grid.a_axis.front())},
                 {"hi", json_number(grid.a_axis.back())},
                 {"resolution", grid.rows()}};
  j["b_axis"] = {{"lo", json_number(grid.b_axis.front())},
                 {"hi", json_number(grid.b_axis.back())},
                 {"resolution", grid.cols()}};
  j["saturated_cells"] = grid.saturated_cells();

  const GridCell lo = grid_minimum(grid);
  nlohmann::json minimum = cell_json(lo);
  minimum["u"] = json_number(lo.a * std::exp(lo.b));
  minimum["on_max_b_edge"] = lo.j + 1 == grid.cols();
  j["grid_minimum"] = minimum;

  nlohmann::json set = nlohmann::json::array();
  for (const auto& c : minimizing_set(grid)) set.push_back(cell_json(c));
  j["minimizing_set"] = set;

  nlohmann::json scan = nlohmann::json::array();
  for (const auto& c : stationarity_scan(grid)) scan.push_back(cell_json(c));
  j["stationarity_scan"] = {{"interior_minima", scan}, {"count", scan.size()}};
  return j;
}

std::vector<double> default_contour_levels(const ContourGrid& grid, std::size_t count) {
  const double lo = grid_minimum(grid).value;
  double hi = *std::max_element(grid.values.begin(), grid.values.end());
  hi = std::min(hi, lo + 4.0 * std::max(1.0, grid.l_slice) + 2.0 * grid.lambda);
  std::vector<double> levels;
  for (std::size_t k = 1; k <= count; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(count + 1);
    levels.push_back(lo + (hi - lo) * t * t);
  }
  return levels;
}

std::string render_contour_svg(const ContourGrid& grid, std::span<const double> levels,
                               const std::string& timestamp) {
  constexpr double kSize = 480.0;
  constexpr double kMargin = 48.0;
  const double a_lo = grid.a_axis.front();
  const double a_hi = grid.a_axis.back();
  const double b_lo = grid.b_axis.front();
  const double b_hi = grid.b_axis.back();
  auto px = [&](double a) { return kMargin + (a - a_lo) / (a_hi - a_lo) * kSize; };
  auto py = [&](double b) { return kMargin + (b_hi - b) / (b_hi - b_lo) * kSize; };

  std::ostringstream os;
  const double total = kSize + 2 * kMargin;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed3(total) << "\" height=\""
     << fixed3(total) << "\" viewBox=\"0 0 " << fixed3(total) << ' ' << fixed3(total) << "\">\n";
  if (!timestamp.empty()) os << "<!-- generated " << timestamp << " -->\n";
  os << "<rect x=\"" << fixed3(kMargin) << "\" y=\"" << fixed3(kMargin) << "\" width=\""
     << fixed3(kSize) << "\" height=\"" << fixed3(kSize)
     << "\" fill=\"white\" stroke=\"black\"/>\n";

  // Marching squares, one path per level. Corner order: (i,j) (i+1,j) (i+1,j+1) (i,j+1).
  for (std::size_t li = 0; li < levels.size(); ++li) {
    const double level = levels[li];
    const int shade = static_cast<int>(200.0 * static_cast<double>(li) /
                                       static_cast<double>(std::max<std::size_t>(1, levels.size())));
    os << "<path fill=\"none\" stroke=\"rgb(" << shade << ',' << shade << ",255)\" stroke-width=\"1\" "
       << "data-level=\"" << format_double(level) << "\" d=\"";
    for (std::size_t i = 0; i + 1 < grid.rows(); ++i) {
      for (std::size_t j = 0; j + 1 < grid.cols(); ++j) {
        const std::array<double, 4> v{grid.at(i, j), grid.at(i + 1, j), grid.at(i + 1, j + 1),
                                      grid.at(i, j + 1)};
        const std::array<std::pair<double, double>, 4> p{
            std::pair{grid.a_axis[i], grid.b_axis[j]},
            std::pair{grid.a_axis[i + 1], grid.b_axis[j]},
            std::pair{grid.a_axis[i + 1], grid.b_axis[j + 1]},
            std::pair{grid.a_axis[i], grid.b_axis[j + 1]}};
        int mask = 0;
        for (int c = 0; c < 4; ++c) {
          if (v[c] >= level) mask |= 1 << c;
        }
        if (mask == 0 || mask == 15) continue;

        auto crossing = [&](int e) {
          const int c0 = e;
          const int c1 = (e + 1) % 4;
          const double t = (level - v[c0]) / (v[c1] - v[c0]);
          return std::pair{p[c0].first + t * (p[c1].first - p[c0].first),
                           p[c0].second + t * (p[c1].second - p[c0].second)};
        };
        // Edge e joins corner e and corner e+1; an edge is crossed when its
        // corners fall on opposite sides of the level.
        std::vector<int> edges;
        for (int e = 0; e < 4; ++e) {
          if (((mask >> e) & 1) != ((mask >> ((e + 1) % 4)) & 1)) edges.push_back(e);
        }
        std::vector<std::pair<int, int>> segments;
        if (edges.size() == 2) {
          segments.emplace_back(edges[0], edges[1]);
        } else {
          // Saddle: disambiguate with the cell centre.
          const double centre = 0.25 * (v[0] + v[1] + v[2] + v[3]);
          const bool centre_high = centre >= level;
          const bool corner0_high = (mask & 1) != 0;
          if (centre_high == corner0_high) {
            segments.emplace_back(0, 1);
            segments.emplace_back(2, 3);
          } else {
            segments.emplace_back(3, 0);
            segments.emplace_back(1, 2);
          }
        }
        for (const auto& [e0, e1] : segments) {
          const auto q0 = crossing(e0);
          const auto q1 = crossing(e1);
          os << 'M' << fixed3(px(q0.first)) << ' ' << fixed3(py(q0.second)) << 'L'
             << fixed3(px(q1.first)) << ' ' << fixed3(py(q1.second));
        }
      }
    }
    os << "\"/>\n";
  }

  const GridCell lo = grid_minimum(grid);
  os << "<circle cx=\"" << fixed3(px(lo.a)) << "\" cy=\"" << fixed3(py(lo.b))
     << "\" r=\"4\" fill=\"red\"/>\n";
  os << "<text x=\"" << fixed3(kMargin + kSize / 2) << "\" y=\"" << fixed3(total - 12)
     << "\" text-anchor=\"middle\" font-size=\"14\">a</text>\n";
  os << "<text x=\"14\" y=\"" << fixed3(kMargin + kSize / 2)
     << "\" text-anchor=\"middle\" font-size=\"14\">b</text>\n";
  os << "<text x=\"" << fixed3(kMargin + kSize / 2) << "\" y=\"" << fixed3(kMargin - 16)
     << "\" text-anchor=\"middle\" font-size=\"13\">L = " << format_double(grid.l_slice)
     << ", lambda = " << format_double(grid.lambda) << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << contents;
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot use output directory '" + dir.string() + "'");
  }
}

}  // namespace minfinity
