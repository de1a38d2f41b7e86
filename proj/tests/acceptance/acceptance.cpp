// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: acceptance <path-to-minfinity-cli> [scratch-dir]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "minfinity/analysis.hpp"
#include "minfinity/optimize.hpp"
#include "minfinity/run_config.hpp"
#include "minfinity/verify.hpp"
#include "subprocess.hpp"
#include "sweep.hpp"

namespace fs = std::filesystem;
using namespace minfinity;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

bool run_criterion(int id, const char* title, double budget_s, const std::function<Verdict()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_budget = budget_s <= 0 || secs <= budget_s;
  const bool pass = v.pass && in_budget;
  std::printf("[%s] %d %s (%.2fs%s) %s\n", pass ? "PASS" : "FAIL", id, title, secs,
              in_budget ? "" : ", over budget", v.detail.c_str());
  std::fflush(stdout);
  return pass;
}

std::size_t violations_of(const SuiteReport& r) { return r.violations(); }

Verdict theorem(std::uint64_t seed) {
  const SuiteReport r = verify_critical_points(seed);
  std::size_t converged = 0;
  for (const auto& c : r.checks) {
    if (c.name.rfind("theorem:", 0) == 0) converged += c.checked;
  }
  return {r.passed(), "converged=" + std::to_string(converged) + " violations=" +
                          std::to_string(violations_of(r))};
}

Verdict contours() {
  const AxisRange a{-2.0, 2.0}, b{-2.0, 4.0};
  const ContourGrid one = sample_contour(1.0, 1.0, a, b, 101, 101);
  const ContourGrid zero = sample_contour(0.0, 1.0, a, b, 101, 101);

  const auto scan = stationarity_scan(one);
  const GridCell m = grid_minimum(one);
  const bool on_edge = m.j + 1 == one.cols();
  const double u_gap = std::abs(m.a * std::exp(m.b) - 1.0);
  const bool one_ok = scan.empty() && on_edge && u_gap <= 0.1;

  const auto set = minimizing_set(zero, 1e-12);
  bool column = set.size() == zero.cols();
  for (const auto& c : set) column = column && c.a == 0.0 && std::abs(c.value) <= 1e-12;

  return {one_ok && column, "L=1: interior_minima=" + std::to_string(scan.size()) +
                                " grid_min(a=" + fmt("%.3g", m.a) + ",b=" + fmt("%.3g", m.b) +
                                ",on_max_b_edge=" + (on_edge ? "yes" : "no") +
                                ",|u-1|=" + fmt("%.3g", u_gap) + ")" +
                                "; L=0: a=0 column " + (column ? "exact" : "mismatch")};
}

Verdict gradients(std::uint64_t seed) {
  const SuiteReport r = verify_grad_check(seed);
  double fd = 0.0, dual = 0.0;
  for (const auto& c : r.checks) {
    if (c.name.rfind("fd:", 0) == 0) fd = std::max(fd, c.worst);
    if (c.name.rfind("dual:", 0) == 0) dual = std::max(dual, c.worst);
  }
  return {r.passed(), "worst fd=" + fmt("%.2e", fd) + " worst dual=" + fmt("%.2e", dual)};
}

Verdict infimum(std::uint64_t seed) {
  const SuiteReport r = verify_infimum(seed);
  double dev = 0.0;
  std::size_t samples = 0;
  for (const auto& c : r.checks) {
    if (c.name.rfind("infimum:", 0) == 0) dev = std::max(dev, c.worst);
    if (c.name.rfind("lower-bound:", 0) == 0) samples += c.checked;
  }
  return {r.passed(), "lower-bound samples=" + std::to_string(samples) + " max |probe-L|=" + fmt("%.2e", dev) +
                          " violations=" + std::to_string(r.violations())};
}

Verdict dynamics() {
  const ScalarField& r = get_field("rastrigin-1d");
  const ThetaVector x_star = r.known_bad_minima()[0].theta;
  OptimizerSpec gd;
  gd.kind = OptimizerKind::gd;
  gd.step_size = 1e-2;
  gd.max_steps = 100000;

  const Trajectory aug = run_optimizer(r, {x_star, 0.1, 0.0}, gd, AugConfig{});
  const OutcomeLabel& l = aug.outcome;
  const bool aug_ok = l.outcome == Outcome::minimum_at_infinity && l.b >= 20.0 && std::abs(l.u - 1.0) <= 0.1 &&
                      std::abs(l.a) <= 1e-2;

  const Trajectory plain = run_plain(r, x_star, gd);
  const bool plain_ok = plain.outcome.base_loss >= 0.5;

  const auto labels = testing_support::sweep_labels(get_field("violator-1d"));
  std::size_t finite = 0;
  for (const auto& v : labels) finite += v.outcome == Outcome::converged_finite ? 1 : 0;

  return {aug_ok && plain_ok && finite == 0,
          "augmented: " + std::string(to_string(l.outcome)) + " after " + std::to_string(aug.steps_taken) +
              " steps (b=" + fmt("%.3g", l.b) + ",u=" + fmt("%.3g", l.u) + ",a=" + fmt("%.3g", l.a) +
              "); plain final L=" + fmt("%.4g", plain.outcome.base_loss) + "; violator converged-finite=" +
              std::to_string(finite) + "/" + std::to_string(labels.size())};
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Every file under dir, keyed by relative path, with its bytes.
std::vector<std::pair<std::string, std::string>> snapshot(const fs::path& dir) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out.emplace_back(fs::relative(e.path(), dir).string(), read_file(e.path()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

Verdict reproducibility(const std::string& cli, const fs::path& scratch) {
  const std::vector<std::string> invocations{
      "eval --field rastrigin-2d --theta 0.3 -1.2 --a 0.4 --b 1.5",
      "contour --l-slice 1 --svg --out out",
      "contour --l-slice 0 --lambda 2 --resolution 31 --out out",
      "optimize --field rastrigin-2d --start seeded-random --seed 7 --optimizer adam --out out",
      "optimize --field rastrigin-1d --start bad-minimum --out out",
      "compare --field double-well-1d --theta 0.9 --optimizer momentum --step-size 1e-3 --out out",
      "verify --suite grad-check --seed 5 --points 50 --report out/report.json",
      "verify --suite critical-points --seed 5 --seeds 8 --report out/report.json",
  };
  std::size_t identical = 0;
  std::string first_mismatch;
  for (const auto& args : invocations) {
    std::vector<std::pair<std::string, std::string>> runs[2];
    std::string stdout_text[2];
    for (int k = 0; k < 2; ++k) {
      const fs::path dir = scratch / ("run" + std::to_string(k));
      fs::remove_all(dir);
      fs::create_directories(dir / "out");
      const auto r = testing_support::run("cd " + testing_support::quote(dir.string()) + " && " +
                                          testing_support::quote(cli) + " " + args + " 2>/dev/null");
      stdout_text[k] = r.out;
      runs[k] = snapshot(dir);
    }
    if (runs[0] == runs[1] && stdout_text[0] == stdout_text[1] && !stdout_text[0].empty()) {
      ++identical;
    } else if (first_mismatch.empty()) {
      first_mismatch = args;
    }
  }
  fs::remove_all(scratch);
  return {identical == invocations.size(),
          std::to_string(identical) + "/" + std::to_string(invocations.size()) + " invocations byte-identical" +
              (first_mismatch.empty() ? "" : "; first mismatch: " + first_mismatch)};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <minfinity-cli> [scratch-dir]\n", argv[0]);
    return 2;
  }
  const std::string cli = fs::absolute(argv[1]).string();
  const fs::path scratch = argc > 2 ? fs::path(argv[2]) : fs::temp_directory_path() / "minfinity-acceptance";
  const std::uint64_t seed = resolve_seed(std::nullopt);

  bool all = true;
  all &= run_criterion(1, "finite critical points are global minima", 60.0, [&] { return theorem(seed); });
  all &= run_criterion(2, "contour regimes at L=1 and L=0", 5.0, contours);
  all &= run_criterion(3, "gradient agreement with differences and dual numbers", 10.0,
                       [&] { return gradients(seed); });
  all &= run_criterion(4, "lower bound and infimum identity", 10.0, [&] { return infimum(seed); });
  all &= run_criterion(5, "bad minimum becomes a minimum at infinity", 30.0, dynamics);
  all &= run_criterion(6, "byte-identical CLI outputs for repeated invocations", 0.0,
                       [&] { return reproducibility(cli, scratch); });
  return all ? 0 : 1;
}
