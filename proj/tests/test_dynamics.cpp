#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "minfinity/analysis.hpp"
#include "minfinity/optimize.hpp"
#include "subprocess.hpp"
#include "sweep.hpp"

using namespace minfinity;

namespace {

OptimizerSpec gd(double step) {
  OptimizerSpec s;
  s.kind = OptimizerKind::gd;
  s.step_size = step;
  return s;
}

}  // namespace

TEST_CASE("augmented gd from the rastrigin-1d bad minimum") {
  const auto& r = get_field("rastrigin-1d");
  const Trajectory t = run_optimizer(r, {r.known_bad_minima()[0].theta, 0.1, 0.0}, gd(1e-2), AugConfig{});
  MESSAGE("final b = " << t.outcome.b << ", u = " << t.outcome.u << ", a = " << t.outcome.a
                       << ", label = " << to_string(t.outcome.outcome));
  CHECK(t.outcome.outcome == Outcome::minimum_at_infinity);
}

TEST_CASE("finite convergence certifies a global minimum on zero-minimum fields") {
  for (const ScalarField* f : shipped_fields()) {
    if (!f->satisfies_zero_minimum()) continue;
    CAPTURE(f->name());
    for (const auto& l : testing_support::sweep_labels(*f)) {
      if (l.outcome != Outcome::converged_finite) continue;
      CHECK(l.base_loss <= 1e-4);
      CHECK(std::abs(l.a) <= 1e-3);
    }
  }
}

TEST_CASE("the precondition violator never converges at a finite point") {
  const auto labels = testing_support::sweep_labels(get_field("violator-1d"));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    CAPTURE(i);
    CAPTURE(labels[i].b);
    CAPTURE(labels[i].grad_norm);
    CHECK(labels[i].outcome != Outcome::converged_finite);
  }
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

}  // namespace

TEST_CASE("cli: rastrigin-1d from bad minimum 0, augmented") {
  const std::filesystem::path dir = scratch("rastrigin");
  const auto r = testing_support::run(cli("optimize --field rastrigin-1d --start bad-minimum --bad-minimum-index 0 --out " +
                         testing_support::quote(dir.string())));
  REQUIRE(r.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  MESSAGE("label " << j["label"] << ", certificate " << j["certificate"].dump());
  CHECK(j["label"] == "minimum-at-infinity");
  std::filesystem::remove_all(dir);
}
