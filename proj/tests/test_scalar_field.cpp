#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "minfinity/errors.hpp"
#include "minfinity/scalar_field.hpp"
#include "oracles.hpp"

using namespace minfinity;

namespace {

std::vector<double> random_interior(const ScalarField& f, std::mt19937_64& rng) {
  std::vector<double> x(f.dim());
  for (std::size_t i = 0; i < f.dim(); ++i) {
    const auto iv = f.domain()[i];
    const double margin = 1e-3 * (iv.hi - iv.lo);
    x[i] = std::uniform_real_distribution<double>(iv.lo + margin, iv.hi - margin)(rng);
  }
  return x;
}

oracle::real ld_central(const ScalarField& f, std::vector<double> x, std::size_t i) {
  const double h = 1e-6 * std::max(1.0, std::abs(x[i]));
  const double xi = x[i];
  x[i] = xi + h;
  const double up = x[i];
  const oracle::real fp = f.evaluate(x);
  x[i] = xi - h;
  const double down = x[i];
  const oracle::real fm = f.evaluate(x);
  return (fp - fm) / (static_cast<oracle::real>(up) - down);
}

}  // namespace

TEST_CASE("registry lists the shipped fields") {
  const auto names = field_names();
  const std::vector<std::string> expected{"quadratic-1d", "quadratic-2d",   "rastrigin-1d", "rastrigin-2d",
                                          "ackley-2d",    "double-well-1d", "violator-1d"};
  CHECK(names == expected);
  CHECK(get_field("rastrigin-2d").dim() == 2);
  CHECK_THROWS_AS(get_field("rosenbrock-2d"), UsageError);
  CHECK(shipped_fields().size() == expected.size());
}

TEST_CASE("closed-form values") {
  CHECK(get_field("quadratic-2d").evaluate(std::vector<double>{0.0, 0.0}) == 0.0);
  CHECK(get_field("rastrigin-1d").evaluate(std::vector<double>{0.0}) == 0.0);
  CHECK(get_field("quadratic-1d").gradient(std::vector<double>{3.0})[0] == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(get_field("rastrigin-1d").gradient(std::vector<double>{0.0})[0] == 0.0);

  // Stable rewrites agree with the textbook formulas.
  std::mt19937_64 rng(3);
  for (int k = 0; k < 200; ++k) {
    const auto x = random_interior(get_field("rastrigin-2d"), rng);
    const oracle::real ref = oracle::raw_rastrigin({x[0], x[1]});
    CHECK(std::abs(get_field("rastrigin-2d").evaluate(x) - static_cast<double>(ref)) <= 1e-12 * std::max<double>(1, ref));
    const auto y = random_interior(get_field("ackley-2d"), rng);
    const oracle::real ack = oracle::raw_ackley(y[0], y[1]);
    CHECK(std::abs(get_field("ackley-2d").evaluate(y) - static_cast<double>(ack)) <= 1e-12 * std::max<double>(1, ack));
  }
}

TEST_CASE("rastrigin-1d first bad minimum from a dense grid and bisection") {
  const auto f = [](oracle::real x) { return oracle::raw_rastrigin({x}); };
  const auto g = [&](oracle::real x) { return oracle::derivative(f, x); };
  const auto minima = oracle::local_minima_1d(f, g, 0.5L, 1.5L, 1e-4L);
  REQUIRE(minima.size() == 1);
  const double x_star = static_cast<double>(minima[0].x);
  const double value = get_field("rastrigin-1d").evaluate(std::vector<double>{x_star});
  CHECK(value == doctest::Approx(1.0).epsilon(1e-2));
  CHECK(std::abs(value - static_cast<double>(minima[0].value)) <= 1e-10);

  const auto registered = get_field("rastrigin-1d").known_bad_minima();
  bool found = false;
  for (const auto& m : registered) {
    if (std::abs(m.theta[0] - x_star) <= 1e-6) {
      found = true;
      CHECK(std::abs(m.value - static_cast<double>(minima[0].value)) <= 1e-10);
    }
  }
  CHECK(found);
}

TEST_CASE("double-well offset matches the grid and bisection oracle") {
  const auto f = [](oracle::real x) { return oracle::raw_double_well(x); };
  const auto g = [](oracle::real x) { return oracle::d_double_well(x); };
  const auto best = oracle::global_minimum_1d(f, g, -2.0L, 2.0L, 1e-4L);
  const auto& field = get_field("double-well-1d");
  CHECK(std::abs(field.offset() - static_cast<double>(best.value)) <= 1e-9);
  CHECK(std::abs(field.global_minimizer()[0] - static_cast<double>(best.x)) <= 1e-6);

  // The other well is the registered bad minimum.
  const auto minima = oracle::local_minima_1d(f, g, -2.0L, 2.0L, 1e-4L);
  REQUIRE(minima.size() == 2);
  REQUIRE(field.known_bad_minima().size() == 1);
  const auto& bad = field.known_bad_minima()[0];
  CHECK(std::abs(bad.theta[0] - static_cast<double>(minima[1].x)) <= 1e-6);
  CHECK(std::abs(bad.value - static_cast<double>(minima[1].value - best.value)) <= 1e-9);

  // Gradient at 0.5 against the central-difference oracle.
  const double grad = field.gradient(std::vector<double>{0.5})[0];
  const double fd = static_cast<double>(ld_central(field, {0.5}, 0));
  CHECK(std::abs(grad - fd) / std::max(1.0, std::abs(fd)) <= 1e-6);
}

TEST_CASE("offsets of the symmetric fields are zero") {
  CHECK(get_field("quadratic-1d").offset() == 0.0);
  CHECK(get_field("quadratic-2d").offset() == 0.0);
  CHECK(std::abs(get_field("rastrigin-1d").offset()) <= 1e-9);
  CHECK(std::abs(get_field("rastrigin-2d").offset()) <= 1e-9);
  CHECK(std::abs(get_field("ackley-2d").offset()) <= 1e-9);
  CHECK_FALSE(get_field("violator-1d").satisfies_zero_minimum());
  CHECK(get_field("violator-1d").offset() == 0.0);
}

TEST_CASE("non-negativity and zero global minimum on every zero-minimum field") {
  std::mt19937_64 rng(20);
  for (const ScalarField* f : shipped_fields()) {
    CAPTURE(f->name());
    if (!f->satisfies_zero_minimum()) continue;
    CHECK(f->evaluate(f->global_minimizer()) <= 1e-9);
    for (int k = 0; k < 2000; ++k) CHECK(f->evaluate(random_interior(*f, rng)) >= 0.0);
    // Domain corners too.
    std::vector<double> corner(f->dim());
    for (std::size_t i = 0; i < f->dim(); ++i) corner[i] = f->domain()[i].hi;
    CHECK(f->evaluate(corner) >= 0.0);
  }
}

TEST_CASE("gradient matches central differences on 1000 interior points per field") {
  std::mt19937_64 rng(1000);
  for (const ScalarField* f : shipped_fields()) {
    CAPTURE(f->name());
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const auto x = random_interior(*f, rng);
      const auto g = f->gradient(x);
      for (std::size_t i = 0; i < f->dim(); ++i) {
        const double fd = static_cast<double>(ld_central(*f, x, i));
        worst = std::max(worst, std::abs(g[i] - fd) / std::max({1.0, std::abs(g[i]), std::abs(fd)}));
      }
    }
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("registered bad minima are stationary with clearly positive value") {
  for (const ScalarField* f : shipped_fields()) {
    CAPTURE(f->name());
    for (const auto& m : f->known_bad_minima()) {
      const auto g = f->gradient(m.theta);
      double n = 0.0;
      for (double v : g) n += v * v;
      CHECK(std::sqrt(n) <= 1e-6);
      CHECK(m.value >= 10 * 1e-4);
      CHECK(f->evaluate(m.theta) == m.value);
    }
  }
  CHECK(get_field("rastrigin-1d").known_bad_minima().size() == 4);
  CHECK(get_field("rastrigin-2d").known_bad_minima().size() == 4);
  CHECK(get_field("ackley-2d").known_bad_minima().size() == 3);
}

TEST_CASE("domain and dimension errors") {
  const auto& q = get_field("quadratic-1d");
  CHECK_THROWS_AS(q.evaluate(std::vector<double>{5.5}), EvaluationError);
  CHECK_THROWS_AS(q.evaluate(std::vector<double>{1.0, 2.0}), UsageError);
  CHECK_THROWS_AS(q.evaluate(std::vector<double>{std::nan("")}), EvaluationError);
  CHECK_NOTHROW(q.evaluate(std::vector<double>{5.0}));

  std::vector<double> x{7.0};
  CHECK(q.clamp(x));
  CHECK(x[0] == 5.0);
  CHECK_FALSE(q.clamp(x));
  CHECK(q.contains(x));
}

TEST_CASE("normalization rejects a field with no reachable minimum") {
  FieldDefinition def;
  def.name = "nan-field";
  def.domain = {Interval{-1.0, 1.0}};
  def.value = [](std::span<const double>) { return std::nan(""); };
  def.gradient = [](std::span<const double>, std::span<double> g) { g[0] = std::nan(""); };
  def.lifted = [](std::span<const DualScalar> x) { return x[0]; };
  CHECK_THROWS_AS(normalize_field(def), EvaluationError);
}

TEST_CASE("normalization shifts a raw field to zero minimum") {
  FieldDefinition def;
  def.name = "shifted-bowl";
  def.domain = {Interval{-3.0, 3.0}};
  def.value = [](std::span<const double> x) { return (x[0] - 0.7) * (x[0] - 0.7) + 2.5; };
  def.gradient = [](std::span<const double> x, std::span<double> g) { g[0] = 2.0 * (x[0] - 0.7); };
  def.lifted = [](std::span<const DualScalar> x) { return (x[0] - 0.7) * (x[0] - 0.7) + 2.5; };
  const ScalarField f = normalize_field(def);
  CHECK(f.offset() == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(f.global_minimizer()[0] == doctest::Approx(0.7).epsilon(1e-6));
  CHECK(f.evaluate(f.global_minimizer()) <= 1e-9);
}
