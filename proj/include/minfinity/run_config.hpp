#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "minfinity/augmentation.hpp"
#include "minfinity/optimize.hpp"

namespace minfinity {

enum class StartKind { explicit_point, seeded_random, bad_minimum };

/// Everything `optimize` and `compare` need. Read from a flat JSON object;
/// command-line flags override individual keys.
struct RunConfig {
  std::string field = "rastrigin-1d";
  double lambda = 1.0;
  double b_clamp = 700.0;
  bool augmented = true;
  OptimizerSpec optimizer;
  StartKind start = StartKind::bad_minimum;
  ThetaVector theta;
  double a = 0.1;
  double b = 0.0;
  std::size_t bad_minimum_index = 0;
  std::uint64_t seed = 0;
  std::string out = "out";
  std::vector<std::string> formats{"csv", "json"};

  AugConfig aug_config() const;
  bool wants(const std::string& format) const;
};

std::string_view to_string(StartKind k);

/// Applies the keys of `doc` on top of `base`. Throws UsageError on unknown
/// keys, wrong value types or invalid enum names.
RunConfig apply_run_config(const nlohmann::json& doc, RunConfig base = {});

nlohmann::json to_json(const RunConfig& cfg);

/// Starting point described by the config; seeded-random draws from `cfg.seed`.
AugPoint resolve_start(const RunConfig& cfg, const ScalarField& field);

/// Seed precedence: explicit value, then MINFINITY_SEED, then 0.
std::uint64_t resolve_seed(std::optional<std::uint64_t> explicit_seed);

}  // namespace minfinity
