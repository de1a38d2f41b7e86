#include "minfinity/scalar_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "minfinity/descent.hpp"
#include "minfinity/errors.hpp"

namespace minfinity {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;
constexpr double kNormalizationSlack = 1e-9;
constexpr double kBadMinimumGradTol = 1e-6;
// Ten times the critical-point L tolerance, so "bad" is never ambiguous.
constexpr double kBadMinimumFloor = 1e-3;

template <typename T>
T quadratic_expr(std::span<const T> x) {
  T s(0.0);
  for (const T& xi : x) s += xi * xi;
  return s;
}

// x^2 + 20 sin^2(pi x) equals x^2 + 10 - 10 cos(2 pi x) without the cancellation
// near the global minimum.
template <typename T>
T rastrigin_expr(std::span<const T> x) {
  using std::sin;
  T s(0.0);
  for (const T& xi : x) {
    const T sp = sin(kPi * xi);
    s += xi * xi + 20.0 * sp * sp;
  }
  return s;
}

// 20 (1 - exp(-0.2 r)) + e (1 - exp(mean cos(2 pi x) - 1)), with
// mean cos(2 pi x) - 1 = -2 mean sin^2(pi x).
template <typename T>
T ackley_expr(std::span<const T> x) {
  using std::expm1;
  using std::sin;
  using std::sqrt;
  const double n = static_cast<double>(x.size());
  T sq(0.0);
  T c(0.0);
  for (const T& xi : x) {
    sq += xi * xi;
    const T sp = sin(kPi * xi);
    c += sp * sp;
  }
  const T r = sqrt(sq / n);
  return -20.0 * expm1(-0.2 * r) - kE * expm1(-2.0 * c / n);
}

template <typename T>
T double_well_expr(std::span<const T> x) {
  const T& v = x[0];
  const T v2 = v * v;
  return v2 * v2 - 2.0 * v2 + 0.3 * v;
}

template <typename T>
T violator_expr(std::span<const T> x) {
  return x[0] * x[0] + 1.0;
}

std::vector<Interval> uniform_box(std::size_t dim, double lo, double hi) {
  return std::vector<Interval>(dim, Interval{lo, hi});
}

std::string dim_suffix(std::size_t dim) { return "-" + std::to_string(dim) + "d"; }

DescentProblem raw_problem(const FieldDefinition& def) {
  DescentProblem p;
  p.value = def.value;
  p.gradient = def.gradient;
  const auto domain = def.domain;
  p.project = [domain](std::span<double> x) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], domain[i].lo, domain[i].hi);
  };
  return p;
}

// Lowest points of an odd-resolution lattice over the box. Odd resolution puts
// the box centre on the lattice.
std::vector<ThetaVector> lattice_starts(const FieldDefinition& def, std::size_t count) {
  const std::size_t dim = def.domain.size();
  auto per_axis = static_cast<std::size_t>(std::floor(std::pow(4096.0, 1.0 / static_cast<double>(dim))));
  if (per_axis % 2 == 0) ++per_axis;
  per_axis = std::max<std::size_t>(per_axis, 3);

  std::size_t total = 1;
  for (std::size_t d = 0; d < dim; ++d) total *= per_axis;

  std::vector<ThetaVector> points;
  std::vector<double> values;
  points.reserve(total);
  values.reserve(total);
  ThetaVector x(dim);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    for (std::size_t d = 0; d < dim; ++d) {
      const std::size_t k = rem % per_axis;
      rem /= per_axis;
      const auto& iv = def.domain[d];
      x[d] = iv.lo + (iv.hi - iv.lo) * static_cast<double>(k) / static_cast<double>(per_axis - 1);
    }
    points.push_back(x);
    values.push_back(def.value(x));
  }

  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t l, std::size_t r) { return values[l] < values[r]; });
  std::vector<ThetaVector> out;
  for (std::size_t i = 0; i < std::min(count, total); ++i) out.push_back(points[order[i]]);
  return out;
}

}  // namespace

void ScalarField::check_dimension(std::span<const double> theta) const {
  if (theta.size() != dim()) {
    std::ostringstream os;
    os << "field '" << name_ << "' expects dimension " << dim() << ", got " << theta.size();
    throw UsageError(os.str());
  }
}

bool ScalarField::contains(std::span<const double> theta) const {
  if (theta.size() != dim()) return false;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (!(theta[i] >= domain_[i].lo && theta[i] <= domain_[i].hi)) return false;
  }
  return true;
}

bool ScalarField::clamp(std::span<double> theta) const {
  check_dimension(theta);
  bool moved = false;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double c = std::clamp(theta[i], domain_[i].lo, domain_[i].hi);
    if (c != theta[i]) {
      theta[i] = c;
      moved = true;
    }
  }
  return moved;
}

double ScalarField::evaluate(std::span<const double> theta) const {
  check_dimension(theta);
  if (!contains(theta)) throw EvaluationError("theta outside the domain of field '" + name_ + "'");
  const double raw = raw_value_(theta);
  if (!std::isfinite(raw)) throw EvaluationError("non-finite value of field '" + name_ + "'");
  const double v = raw - offset_;
  if (v < 0.0) {
    if (v >= -kNormalizationSlack) return 0.0;
    throw EvaluationError("field '" + name_ + "' fell below its normalized minimum");
  }
  return v;
}

void ScalarField::gradient_into(std::span<const double> theta, std::span<double> out) const {
  check_dimension(theta);
  raw_gradient_(theta, out);
  for (double g : out) {
    if (!std::isfinite(g)) throw EvaluationError("non-finite gradient of field '" + name_ + "'");
  }
}

ThetaVector ScalarField::gradient(std::span<const double> theta) const {
  ThetaVector g(dim());
  gradient_into(theta, g);
  return g;
}

DualScalar ScalarField::evaluate_lifted(std::span<const DualScalar> theta) const {
  return raw_lifted_(theta) - DualScalar(offset_);
}

void ScalarField::register_bad_minima(const std::vector<ThetaVector>& seeds) {
  // Small steps keep the polish inside the seed's basin.
  DescentOptions opts;
  opts.grad_tol = 1e-10;
  opts.initial_step = 1e-3;
  opts.max_step = 1e-3;
  opts.max_iterations = 100000;
  DescentProblem problem;
  problem.value = raw_value_;
  problem.gradient = raw_gradient_;
  problem.project = [this](std::span<double> x) { clamp(x); };
  for (const auto& seed : seeds) {
    const auto coarse = backtracking_descent(problem, seed, opts);
    const auto res = refine_stationary(problem, coarse.x, opts);
    const double value = evaluate(res.x);
    if (res.grad_norm > kBadMinimumGradTol || value < kBadMinimumFloor) {
      throw EvaluationError("seed for field '" + name_ + "' did not polish into a bad minimum");
    }
    bad_minima_.push_back(KnownMinimum{res.x, value});
  }
}

ScalarField normalize_field(FieldDefinition raw, const NormalizationOptions& options) {
  if (raw.domain.empty()) throw UsageError("field '" + raw.name + "' has no domain");

  std::vector<ThetaVector> starts = lattice_starts(raw, options.lattice_starts);
  std::mt19937_64 rng(options.seed);
  while (starts.size() < options.starts) {
    ThetaVector x(raw.domain.size());
    for (std::size_t d = 0; d < x.size(); ++d) {
      std::uniform_real_distribution<double> dist(raw.domain[d].lo, raw.domain[d].hi);
      x[d] = dist(rng);
    }
    starts.push_back(std::move(x));
  }

  DescentOptions opts;
  opts.max_iterations = options.max_iterations;
  opts.grad_tol = options.grad_tol;
  const DescentProblem problem = raw_problem(raw);

  double best = std::numeric_limits<double>::infinity();
  ThetaVector best_x;
  for (const auto& s : starts) {
    const auto res = backtracking_descent(problem, s, opts);
    const bool located =
        res.status == DescentStatus::converged || res.status == DescentStatus::stalled;
    if (located && res.value < best) {
      best = res.value;
      best_x = res.x;
    }
  }
  if (best_x.empty()) {
    throw EvaluationError("minimum search for field '" + raw.name + "' failed to converge");
  }

  // Value-based descent stalls once changes drop below rounding; finish on
  // the gradient norm. Kept only when it does not cost value (box-edge minima).
  DescentOptions polish = opts;
  polish.initial_step = 1e-3;
  polish.max_step = 1e-3;
  polish.grad_tol = 1e-14;
  const auto refined = refine_stationary(problem, best_x, polish);
  if (std::isfinite(refined.value) && refined.value <= best + 1e-12) {
    best = std::min(best, refined.value);
    best_x = refined.x;
  }

  ScalarField field;
  field.name_ = std::move(raw.name);
  field.domain_ = std::move(raw.domain);
  field.raw_value_ = std::move(raw.value);
  field.raw_gradient_ = std::move(raw.gradient);
  field.raw_lifted_ = std::move(raw.lifted);
  field.offset_ = best;
  field.global_minimizer_ = std::move(best_x);
  field.zero_minimum_ = true;
  field.register_bad_minima(raw.bad_minimum_seeds);
  return field;
}

ScalarField unnormalized_field(FieldDefinition raw) {
  ScalarField field;
  field.name_ = std::move(raw.name);
  field.domain_ = std::move(raw.domain);
  field.raw_value_ = std::move(raw.value);
  field.raw_gradient_ = std::move(raw.gradient);
  field.raw_lifted_ = std::move(raw.lifted);
  field.offset_ = 0.0;
  field.zero_minimum_ = false;
  return field;
}

FieldDefinition quadratic_definition(std::size_t dim) {
  FieldDefinition def;
  def.name = "quadratic" + dim_suffix(dim);
  def.domain = uniform_box(dim, -5.0, 5.0);
  def.value = [](std::span<const double> x) { return quadratic_expr(x); };
  def.gradient = [](std::span<const double> x, std::span<double> g) {
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = 2.0 * x[i];
  };
  def.lifted = [](std::span<const DualScalar> x) { return quadratic_expr(x); };
  return def;
}

FieldDefinition rastrigin_definition(std::size_t dim) {
  FieldDefinition def;
  def.name = "rastrigin" + dim_suffix(dim);
  def.domain = uniform_box(dim, -5.12, 5.12);
  def.value = [](std::span<const double> x) { return rastrigin_expr(x); };
  def.gradient = [](std::span<const double> x, std::span<double> g) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      g[i] = 2.0 * x[i] + 20.0 * kPi * std::sin(2.0 * kPi * x[i]);
    }
  };
  def.lifted = [](std::span<const DualScalar> x) { return rastrigin_expr(x); };
  if (dim == 1) {
    def.bad_minimum_seeds = {{1.0}, {-1.0}, {2.0}, {-2.0}};
  } else if (dim == 2) {
    def.bad_minimum_seeds = {{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}, {-1.0, 1.0}};
  }
  return def;
}

FieldDefinition ackley_definition() {
  FieldDefinition def;
  def.name = "ackley-2d";
  def.domain = uniform_box(2, -5.0, 5.0);
  def.value = [](std::span<const double> x) { return ackley_expr(x); };
  def.gradient = [](std::span<const double> x, std::span<double> g) {
    const double n = static_cast<double>(x.size());
    double sq = 0.0;
    double c = 0.0;
    for (double xi : x) {
      sq += xi * xi;
      const double sp = std::sin(kPi * xi);
      c += sp * sp;
    }
    const double r = std::sqrt(sq / n);
    // The cone term has no derivative at the origin; report the zero subgradient.
    const double radial = r > 0.0 ? 4.0 * std::exp(-0.2 * r) / (n * r) : 0.0;
    const double periodic = 2.0 * kPi * std::exp(1.0 - 2.0 * c / n) / n;
    for (std::size_t i = 0; i < x.size(); ++i) {
      g[i] = radial * x[i] + periodic * std::sin(2.0 * kPi * x[i]);
    }
  };
  def.lifted = [](std::span<const DualScalar> x) { return ackley_expr(x); };
  def.bad_minimum_seeds = {{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}};
  return def;
}

FieldDefinition double_well_definition() {
  FieldDefinition def;
  def.name = "double-well-1d";
  def.domain = uniform_box(1, -2.0, 2.0);
  def.value = [](std::span<const double> x) { return double_well_expr(x); };
  def.gradient = [](std::span<const double> x, std::span<double> g) {
    g[0] = 4.0 * x[0] * x[0] * x[0] - 4.0 * x[0] + 0.3;
  };
  def.lifted = [](std::span<const DualScalar> x) { return double_well_expr(x); };
  def.bad_minimum_seeds = {{1.0}};
  return def;
}

FieldDefinition violator_definition() {
  FieldDefinition def;
  def.name = "violator-1d";
  def.domain = uniform_box(1, -5.0, 5.0);
  def.value = [](std::span<const double> x) { return violator_expr(x); };
  def.gradient = [](std::span<const double> x, std::span<double> g) { g[0] = 2.0 * x[0]; };
  def.lifted = [](std::span<const DualScalar> x) { return violator_expr(x); };
  return def;
}

namespace {

const std::vector<ScalarField>& registry() {
  static const std::vector<ScalarField> fields = [] {
    std::vector<ScalarField> out;
    out.push_back(normalize_field(quadratic_definition(1)));
    out.push_back(normalize_field(quadratic_definition(2)));
    out.push_back(normalize_field(rastrigin_definition(1)));
    out.push_back(normalize_field(rastrigin_definition(2)));
    out.push_back(normalize_field(ackley_definition()));
    out.push_back(normalize_field(double_well_definition()));
    out.push_back(unnormalized_field(violator_definition()));
    return out;
  }();
  return fields;
}

}  // namespace

std::vector<std::string> field_names() {
  std::vector<std::string> names;
  for (const auto& f : registry()) names.push_back(f.name());
  return names;
}

const ScalarField& get_field(std::string_view name) {
  for (const auto& f : registry()) {
    if (f.name() == name) return f;
  }
  throw UsageError("unknown field '" + std::string(name) + "'");
}

std::vector<const ScalarField*> shipped_fields() {
  std::vector<const ScalarField*> out;
  for (const auto& f : registry()) out.push_back(&f);
  return out;
}

}  // namespace minfinity
