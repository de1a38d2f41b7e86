// Regimes of the (a, b) landscape at fixed L on the reference grid:
// a in [-2, 2], b in [-2, 4], 101 x 101, lambda = 1.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "minfinity/analysis.hpp"
#include "subprocess.hpp"

using namespace minfinity;

namespace {

ContourGrid reference_grid(double l_slice) {
  return sample_contour(l_slice, 1.0, {-2.0, 2.0}, {-2.0, 4.0}, 101, 101);
}

// Independent brute force: interior cells with no strictly smaller neighbour.
std::size_t brute_force_interior_minima(const ContourGrid& g) {
  std::size_t count = 0;
  for (std::size_t i = 1; i + 1 < g.rows(); ++i) {
    for (std::size_t j = 1; j + 1 < g.cols(); ++j) {
      bool strictly_smaller_neighbour = false;
      for (int di = -1; di <= 1; ++di)
        for (int dj = -1; dj <= 1; ++dj)
          if ((di || dj) && g.at(i + di, j + dj) < g.at(i, j)) strictly_smaller_neighbour = true;
      if (!strictly_smaller_neighbour) ++count;
    }
  }
  return count;
}

}  // namespace

TEST_CASE("L = 1: no interior discrete minimum, minimum on the far b edge") {
  const ContourGrid g = reference_grid(1.0);
  const auto scan = stationarity_scan(g);
  CHECK(scan.size() == brute_force_interior_minima(g));
  for (const auto& c : scan) MESSAGE("interior minimum at a = " << c.a << ", b = " << c.b << ", value " << c.value);
  CHECK(scan.empty());

  const GridCell m = grid_minimum(g);
  MESSAGE("grid minimum at a = " << m.a << ", b = " << m.b << ", value " << m.value);
  CHECK(m.j == g.cols() - 1);
  CHECK(std::abs(m.a * std::exp(m.b) - 1.0) <= 0.1);
}

TEST_CASE("positive slices have no interior discrete minimum") {
  for (double L : {0.1, 1.0, 10.0}) {
    CAPTURE(L);
    const ContourGrid g = reference_grid(L);
    const auto scan = stationarity_scan(g);
    CHECK(scan.size() == brute_force_interior_minima(g));
    CHECK(scan.empty());
  }
}

TEST_CASE("L = 0: the a = 0 column is the minimizing set") {
  const ContourGrid g = reference_grid(0.0);
  const auto set = minimizing_set(g, 1e-12);
  REQUIRE(set.size() == g.cols());
  for (const auto& c : set) {
    CHECK(c.a == 0.0);
    CHECK(std::abs(c.value) <= 1e-12);
  }
  const auto scan = stationarity_scan(g);
  CHECK(scan.size() == brute_force_interior_minima(g));
  for (const auto& c : scan) CHECK(c.a == 0.0);
  CHECK(scan.size() == g.cols() - 2);
}

namespace {

std::string cli(const std::string& args) {
  return testing_support::quote(MINFINITY_CLI_PATH) + " " + args + " 2>/dev/null";
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("minfinity-cli-test-" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cli: L = 1 contour has no interior minima") {
  const std::filesystem::path dir = scratch("contour-one");
  const auto r = testing_support::run(cli("contour --l-slice 1 --out " + testing_support::quote(dir.string())));
  REQUIRE(r.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(read_file(dir / "contour.json"));
  MESSAGE("interior minima on the L = 1 grid: " << j["stationarity_scan"]["count"]);
  CHECK(j["stationarity_scan"]["interior_minima"].empty());
  std::filesystem::remove_all(dir);
}
