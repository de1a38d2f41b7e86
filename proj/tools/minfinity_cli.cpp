// minfinity command-line front end: eval, contour, verify, optimize, compare, fields.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "minfinity/analysis.hpp"
#include "minfinity/augmentation.hpp"
#include "minfinity/errors.hpp"
#include "minfinity/export.hpp"
#include "minfinity/optimize.hpp"
#include "minfinity/run_config.hpp"
#include "minfinity/scalar_field.hpp"
#include "minfinity/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace minfinity;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitEvaluation = 3;
constexpr int kExitIo = 4;

void print_json(const json& doc) { std::cout << doc.dump(2) << '\n'; }

json domain_json(const ScalarField& f) {
  json out = json::array();
  for (const auto& iv : f.domain()) out.push_back({iv.lo, iv.hi});
  return out;
}

// ---- eval ------------------------------------------------------------------

struct EvalArgs {
  std::string field;
  std::vector<double> theta;
  double a = 0.0;
  double b = 0.0;
  double lambda = 1.0;
  double b_clamp = 700.0;
};

int run_eval(const EvalArgs& args) {
  const ScalarField& field = get_field(args.field);
  AugConfig cfg;
  cfg.lambda = args.lambda;
  cfg.b_clamp = args.b_clamp;
  cfg.saturation = SaturationPolicy::error;
  cfg.validate();
  const AugPoint p{args.theta, args.a, args.b};
  const AugValue v = eval_augmented_detail(field, p, cfg);
  const AugGradient g = grad_augmented(field, p, cfg);
  json d_theta = json::array();
  for (double x : g.d_theta) d_theta.push_back(json_number(x));
  print_json({{"command", "eval"},
              {"config",
               {{"field", args.field},
                {"theta", args.theta},
                {"a", args.a},
                {"b", args.b},
                {"lambda", cfg.lambda},
                {"b_clamp", cfg.b_clamp},
                {"saturation", "error"}}},
              {"L", json_number(v.base_loss)},
              {"u", json_number(v.u)},
              {"L_tilde", json_number(v.loss)},
              {"gradient", {{"theta", d_theta}, {"a", json_number(g.d_a)}, {"b", json_number(g.d_b)}}},
              {"gradient_norm", json_number(g.norm())}});
  return kExitOk;
}

// ---- contour ---------------------------------------------------------------

struct ContourArgs {
  double l_slice = 1.0;
  double lambda = 1.0;
  double a_min = -2.0, a_max = 2.0;
  double b_min = -2.0, b_max = 4.0;
  std::size_t resolution = 101;
  std::optional<std::size_t> a_resolution;
  std::optional<std::size_t> b_resolution;
  std::string out = "contour-out";
  std::string name = "contour";
  bool svg = false;
  std::vector<double> levels;
  std::string timestamp;
};

int run_contour(const ContourArgs& args) {
  const std::size_t na = args.a_resolution.value_or(args.resolution);
  const std::size_t nb = args.b_resolution.value_or(args.resolution);
  if (na < 2 || nb < 2) throw UsageError("grid resolution must be at least 2 on each axis");
  if (!(args.lambda > 0.0)) throw UsageError("lambda must be positive");
  if (!(args.l_slice >= 0.0)) throw UsageError("L slice must be non-negative");

  const ContourGrid grid =
      sample_contour(args.l_slice, args.lambda, {args.a_min, args.a_max}, {args.b_min, args.b_max}, na, nb);

  const json config{{"l_slice", args.l_slice},
                    {"lambda", args.lambda},
                    {"a_range", {args.a_min, args.a_max}},
                    {"b_range", {args.b_min, args.b_max}},
                    {"a_resolution", na},
                    {"b_resolution", nb},
                    {"out", args.out},
                    {"name", args.name},
                    {"svg", args.svg}};

  ensure_directory(args.out);
  const fs::path dir(args.out);
  std::ostringstream csv;
  write_contour_csv(csv, grid);
  write_file(dir / (args.name + ".csv"), csv.str());

  json doc = contour_json(grid);
  doc["config"] = config;
  write_file(dir / (args.name + ".json"), doc.dump(2) + "\n");

  json written{(dir / (args.name + ".csv")).string(), (dir / (args.name + ".json")).string()};
  if (args.svg) {
    const std::vector<double> levels = args.levels.empty() ? default_contour_levels(grid) : args.levels;
    write_file(dir / (args.name + ".svg"), render_contour_svg(grid, levels, args.timestamp));
    written.push_back((dir / (args.name + ".svg")).string());
  }

  print_json({{"command", "contour"},
              {"config", config},
              {"files", written},
              {"grid_minimum", doc["grid_minimum"]},
              {"interior_minima", doc["stationarity_scan"]["count"]}});
  return kExitOk;
}

// ---- verify ----------------------------------------------------------------

struct VerifyArgs {
  std::string suite = "all";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> points;
  std::optional<std::size_t> seeds;
  std::optional<std::size_t> thetas;
  std::string out;
};

int run_verify(const VerifyArgs& args) {
  const std::uint64_t seed = resolve_seed(args.seed);
  GradCheckOptions gopt;
  CriticalPointOptions copt;
  InfimumOptions iopt;
  if (args.points) gopt.points_per_field = *args.points;
  if (args.seeds) copt.seeds_per_field = *args.seeds;
  if (args.thetas) iopt.thetas_per_field = *args.thetas;

  std::vector<SuiteReport> reports;
  const bool all = args.suite == "all";
  if (all || args.suite == "grad-check") reports.push_back(verify_grad_check(seed, gopt));
  if (all || args.suite == "critical-points") reports.push_back(verify_critical_points(seed, copt));
  if (all || args.suite == "infimum") reports.push_back(verify_infimum(seed, iopt));

  bool passed = true;
  json suites = json::array();
  for (const auto& r : reports) {
    passed = passed && r.passed();
    suites.push_back(r.to_json());
  }
  const json doc{{"command", "verify"},
                 {"config",
                  {{"suite", args.suite},
                   {"seed", seed},
                   {"points_per_field", gopt.points_per_field},
                   {"seeds_per_field", copt.seeds_per_field},
                   {"thetas_per_field", iopt.thetas_per_field}}},
                 {"passed", passed},
                 {"suites", suites}};
  if (!args.out.empty()) write_file(args.out, doc.dump(2) + "\n");
  print_json(doc);
  return passed ? kExitOk : kExitFailed;
}

// ---- optimize / compare ------------------------------------------------------

// Flags that override keys of the JSON run config. Unset flags leave the
// config value alone.
struct RunFlags {
  std::string config_path;
  std::optional<std::string> field;
  std::optional<double> lambda;
  std::optional<std::string> optimizer;
  std::optional<double> step_size;
  std::optional<std::size_t> max_steps;
  std::optional<double> grad_tol;
  std::optional<std::string> start;
  std::vector<double> theta;
  std::optional<double> a;
  std::optional<double> b;
  std::optional<std::size_t> bad_minimum_index;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  bool plain = false;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON run config");
  cmd->add_option("--field", f.field, "Scalar field name");
  cmd->add_option("--lambda", f.lambda, "Penalty weight on a^2");
  cmd->add_option("--optimizer", f.optimizer, "gd, momentum or adam");
  cmd->add_option("--step-size", f.step_size, "Learning rate");
  cmd->add_option("--max-steps", f.max_steps, "Step budget");
  cmd->add_option("--grad-tol", f.grad_tol, "Stop when the gradient norm falls below this");
  cmd->add_option("--start", f.start, "explicit, seeded-random or bad-minimum");
  cmd->add_option("--theta", f.theta, "Explicit starting theta")->allow_extra_args(false)->expected(1, -1);
  cmd->add_option("--a", f.a, "Starting a");
  cmd->add_option("--b", f.b, "Starting b");
  cmd->add_option("--bad-minimum-index", f.bad_minimum_index, "Index into the field's bad minima");
  cmd->add_option("--seed", f.seed, "Seed for seeded-random starts (default: MINFINITY_SEED or 0)");
  cmd->add_option("--out", f.out, "Output directory");
}

RunConfig resolve_run_config(const RunFlags& f) {
  RunConfig cfg;
  bool seed_in_file = false;
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw IoError("cannot read config '" + f.config_path + "'");
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::parse_error& e) {
      throw UsageError("config '" + f.config_path + "' is not valid JSON: " + e.what());
    }
    cfg = apply_run_config(doc, cfg);
    seed_in_file = doc.is_object() && doc.contains("seed");
  }
  json overrides = json::object();
  if (f.field) overrides["field"] = *f.field;
  if (f.lambda) overrides["lambda"] = *f.lambda;
  if (f.optimizer) overrides["optimizer"] = *f.optimizer;
  if (f.step_size) overrides["step_size"] = *f.step_size;
  if (f.max_steps) overrides["max_steps"] = *f.max_steps;
  if (f.grad_tol) overrides["grad_tol"] = *f.grad_tol;
  if (f.start) overrides["start"] = *f.start;
  if (!f.theta.empty()) overrides["theta"] = f.theta;
  if (f.a) overrides["a"] = *f.a;
  if (f.b) overrides["b"] = *f.b;
  if (f.bad_minimum_index) overrides["bad_minimum_index"] = *f.bad_minimum_index;
  if (f.out) overrides["out"] = *f.out;
  if (f.plain) overrides["augmented"] = false;
  cfg = apply_run_config(overrides, cfg);

  if (f.seed || !seed_in_file) cfg.seed = resolve_seed(f.seed);

  // A theta on the command line with no explicit start kind means "start here".
  if (!f.theta.empty() && !f.start) cfg.start = StartKind::explicit_point;

  cfg.optimizer.validate();
  cfg.aug_config().validate();
  return cfg;
}

std::string trajectory_csv(const Trajectory& t) {
  std::ostringstream os;
  write_trajectory_csv(os, t);
  return os.str();
}

json final_state_json(const Trajectory& t) { return trajectory_summary_json(t); }

int run_optimize(const RunFlags& flags) {
  const RunConfig cfg = resolve_run_config(flags);
  const ScalarField& field = get_field(cfg.field);
  const AugPoint start = resolve_start(cfg, field);

  const Trajectory t = cfg.augmented ? run_optimizer(field, start, cfg.optimizer, cfg.aug_config())
                                     : run_plain(field, start.theta, cfg.optimizer);

  ensure_directory(cfg.out);
  const fs::path dir(cfg.out);
  json doc = final_state_json(t);
  doc["command"] = "optimize";
  doc["config"] = to_json(cfg);
  doc["start"] = {{"theta", start.theta}, {"a", start.a}, {"b", start.b}};
  if (cfg.wants("csv")) write_file(dir / "trajectory.csv", trajectory_csv(t));
  if (cfg.wants("json")) write_file(dir / "outcome.json", doc.dump(2) + "\n");
  print_json({{"command", "optimize"},
              {"config", to_json(cfg)},
              {"label", doc["label"]},
              {"certificate", doc["certificate"]},
              {"steps_taken", doc["steps_taken"]}});
  return t.outcome.outcome == Outcome::numerical_failure ? kExitEvaluation : kExitOk;
}

int run_compare(const RunFlags& flags) {
  const RunConfig cfg = resolve_run_config(flags);
  const ScalarField& field = get_field(cfg.field);
  const AugPoint start = resolve_start(cfg, field);
  const BaselineComparison cmp =
      compare_baseline(field, start.theta, cfg.optimizer, cfg.aug_config(), start.a, start.b);

  ensure_directory(cfg.out);
  const fs::path dir(cfg.out);
  if (cfg.wants("csv")) {
    write_file(dir / "plain.csv", trajectory_csv(cmp.plain));
    write_file(dir / "augmented.csv", trajectory_csv(cmp.augmented));
  }
  const json doc{{"command", "compare"},
                 {"config", to_json(cfg)},
                 {"start", {{"theta", start.theta}, {"a", start.a}, {"b", start.b}}},
                 {"plain", final_state_json(cmp.plain)},
                 {"augmented", final_state_json(cmp.augmented)}};
  if (cfg.wants("json")) write_file(dir / "compare.json", doc.dump(2) + "\n");
  print_json({{"command", "compare"},
              {"config", to_json(cfg)},
              {"plain", {{"label", doc["plain"]["label"]}, {"final_L", doc["plain"]["final"]["L"]}}},
              {"augmented", {{"label", doc["augmented"]["label"]}, {"final_L", doc["augmented"]["final"]["L"]}}}});
  const bool failed = cmp.plain.outcome.outcome == Outcome::numerical_failure ||
                      cmp.augmented.outcome.outcome == Outcome::numerical_failure;
  return failed ? kExitEvaluation : kExitOk;
}

// ---- fields ------------------------------------------------------------------

int run_fields() {
  json out = json::array();
  for (const auto& name : field_names()) {
    const ScalarField& f = get_field(name);
    json minima = json::array();
    for (const auto& m : f.known_bad_minima()) minima.push_back({{"theta", m.theta}, {"L", m.value}});
    out.push_back({{"name", name},
                   {"dim", f.dim()},
                   {"domain", domain_json(f)},
                   {"offset", f.offset()},
                   {"global_minimizer", f.global_minimizer()},
                   {"zero_minimum", f.satisfies_zero_minimum()},
                   {"bad_minima", minima}});
  }
  print_json({{"command", "fields"}, {"config", json::object()}, {"fields", out}});
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"minfinity: augmented-loss experiments on scalar fields"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "minfinity 0.1.0");

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate the augmented loss and its gradient at one point");
  eval_cmd->add_option("--field", eval_args.field, "Scalar field name")->required();
  eval_cmd->add_option("--theta", eval_args.theta, "Theta coordinates")->required()->expected(1, -1);
  eval_cmd->add_option("--a", eval_args.a, "Auxiliary a")->required();
  eval_cmd->add_option("--b", eval_args.b, "Auxiliary b")->required();
  eval_cmd->add_option("--lambda", eval_args.lambda, "Penalty weight on a^2")->capture_default_str();
  eval_cmd->add_option("--b-clamp", eval_args.b_clamp, "Saturation bound on b")->capture_default_str();

  ContourArgs contour_args;
  auto* contour_cmd = app.add_subcommand("contour", "Sample the augmented loss on an (a,b) grid at fixed L");
  contour_cmd->add_option("--l-slice", contour_args.l_slice, "Fixed value of L")->capture_default_str();
  contour_cmd->add_option("--lambda", contour_args.lambda, "Penalty weight on a^2")->capture_default_str();
  contour_cmd->add_option("--a-min", contour_args.a_min)->capture_default_str();
  contour_cmd->add_option("--a-max", contour_args.a_max)->capture_default_str();
  contour_cmd->add_option("--b-min", contour_args.b_min)->capture_default_str();
  contour_cmd->add_option("--b-max", contour_args.b_max)->capture_default_str();
  contour_cmd->add_option("--resolution", contour_args.resolution, "Points per axis")->capture_default_str();
  contour_cmd->add_option("--a-resolution", contour_args.a_resolution, "Points along a");
  contour_cmd->add_option("--b-resolution", contour_args.b_resolution, "Points along b");
  contour_cmd->add_option("--out", contour_args.out, "Output directory")->capture_default_str();
  contour_cmd->add_option("--name", contour_args.name, "Output file stem")->capture_default_str();
  contour_cmd->add_flag("--svg", contour_args.svg, "Also render an SVG contour plot");
  contour_cmd->add_option("--levels", contour_args.levels, "Explicit contour levels")->expected(1, -1);
  contour_cmd->add_option("--timestamp", contour_args.timestamp, "Timestamp embedded in the SVG");

  VerifyArgs verify_args;
  auto* verify_cmd = app.add_subcommand("verify", "Run property suites; exit 1 on any violation");
  verify_cmd->add_option("--suite", verify_args.suite)
      ->check(CLI::IsMember({"grad-check", "critical-points", "infimum", "all"}))
      ->capture_default_str();
  verify_cmd->add_option("--seed", verify_args.seed, "Seed (default: MINFINITY_SEED or 0)");
  verify_cmd->add_option("--points", verify_args.points, "Gradient-check points per field");
  verify_cmd->add_option("--seeds", verify_args.seeds, "Finder seeds per field");
  verify_cmd->add_option("--thetas", verify_args.thetas, "Infimum-probe thetas per field");
  verify_cmd->add_option("--report", verify_args.out, "Also write the JSON report here");

  RunFlags optimize_flags;
  auto* optimize_cmd = app.add_subcommand("optimize", "Run one optimizer trajectory");
  add_run_flags(optimize_cmd, optimize_flags);
  optimize_cmd->add_flag("--plain", optimize_flags.plain, "Optimize L alone, without augmentation");

  RunFlags compare_flags;
  auto* compare_cmd = app.add_subcommand("compare", "Plain and augmented runs from the same theta");
  add_run_flags(compare_cmd, compare_flags);

  auto* fields_cmd = app.add_subcommand("fields", "List the shipped scalar fields");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*eval_cmd) return run_eval(eval_args);
    if (*contour_cmd) return run_contour(contour_args);
    if (*verify_cmd) return run_verify(verify_args);
    if (*optimize_cmd) return run_optimize(optimize_flags);
    if (*compare_cmd) return run_compare(compare_flags);
    if (*fields_cmd) return run_fields();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const EvaluationError& e) {
    std::cerr << "evaluation error: " << e.what() << '\n';
    return kExitEvaluation;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailed;
  }
  return kExitUsage;
}
