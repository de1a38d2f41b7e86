#include "minfinity/run_config.hpp"

#include <cstdlib>
#include <set>

#include "minfinity/analysis.hpp"
#include "minfinity/errors.hpp"

namespace minfinity {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "field", "lambda",  "b_clamp", "augmented", "optimizer", "step_size", "momentum",
      "beta1", "beta2",   "epsilon", "max_steps", "grad_tol",  "start",     "theta",
      "a",     "b",       "bad_minimum_index",    "seed",      "out",       "formats"};
  return keys;
}

template <typename T>
T get_as(const nlohmann::json& doc, const std::string& key) {
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw UsageError("config key '" + key + "' has the wrong type");
  }
}

double get_number(const nlohmann::json& doc, const std::string& key) {
  if (!doc.at(key).is_number()) throw UsageError("config key '" + key + "' must be a number");
  return doc.at(key).get<double>();
}

std::size_t get_count(const nlohmann::json& doc, const std::string& key) {
  const auto& v = doc.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw UsageError("config key '" + key + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

StartKind start_from_string(const std::string& s) {
  for (StartKind k : {StartKind::explicit_point, StartKind::seeded_random, StartKind::bad_minimum}) {
    if (to_string(k) == s) return k;
  }
  throw UsageError("unknown start kind '" + s + "'");
}

}  // namespace

std::string_view to_string(StartKind k) {
  switch (k) {
    case StartKind::explicit_point: return "explicit";
    case StartKind::seeded_random: return "seeded-random";
    case StartKind::bad_minimum: return "bad-minimum";
  }
  return "explicit";
}

AugConfig RunConfig::aug_config() const {
  AugConfig cfg;
  cfg.lambda = lambda;
  cfg.b_clamp = b_clamp;
  cfg.saturation = SaturationPolicy::flag_and_saturate;
  return cfg;
}

bool RunConfig::wants(const std::string& format) const {
  for (const auto& f : formats) {
    if (f == format) return true;
  }
  return false;
}

RunConfig apply_run_config(const nlohmann::json& doc, RunConfig cfg) {
  if (!doc.is_object()) throw UsageError("config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!known_keys().contains(key)) throw UsageError("unknown config key '" + key + "'");
  }
  if (doc.contains("field")) cfg.field = get_as<std::string>(doc, "field");
  if (doc.contains("lambda")) cfg.lambda = get_number(doc, "lambda");
  if (doc.contains("b_clamp")) cfg.b_clamp = get_number(doc, "b_clamp");
  if (doc.contains("augmented")) cfg.augmented = get_as<bool>(doc, "augmented");
  if (doc.contains("optimizer")) {
    cfg.optimizer.kind = optimizer_kind_from_string(get_as<std::string>(doc, "optimizer"));
  }
  if (doc.contains("step_size")) cfg.optimizer.step_size = get_number(doc, "step_size");
  if (doc.contains("momentum")) cfg.optimizer.momentum = get_number(doc, "momentum");
  if (doc.contains("beta1")) cfg.optimizer.beta1 = get_number(doc, "beta1");
  if (doc.contains("beta2")) cfg.optimizer.beta2 = get_number(doc, "beta2");
  if (doc.contains("epsilon")) cfg.optimizer.epsilon = get_number(doc, "epsilon");
  if (doc.contains("max_steps")) cfg.optimizer.max_steps = get_count(doc, "max_steps");
  if (doc.contains("grad_tol")) cfg.optimizer.grad_tol = get_number(doc, "grad_tol");
  if (doc.contains("start")) cfg.start = start_from_string(get_as<std::string>(doc, "start"));
  if (doc.contains("theta")) cfg.theta = get_as<std::vector<double>>(doc, "theta");
  if (doc.contains("a")) cfg.a = get_number(doc, "a");
  if (doc.contains("b")) cfg.b = get_number(doc, "b");
  if (doc.contains("bad_minimum_index")) cfg.bad_minimum_index = get_count(doc, "bad_minimum_index");
  if (doc.contains("seed")) cfg.seed = get_count(doc, "seed");
  if (doc.contains("out")) cfg.out = get_as<std::string>(doc, "out");
  if (doc.contains("formats")) {
    cfg.formats = get_as<std::vector<std::string>>(doc, "formats");
    for (const auto& f : cfg.formats) {
      if (f != "csv" && f != "json") throw UsageError("unknown output format '" + f + "'");
    }
  }
  return cfg;
}

nlohmann::json to_json(const RunConfig& cfg) {
  return {{"field", cfg.field},
          {"lambda", cfg.lambda},
          {"b_clamp", cfg.b_clamp},
          {"augmented", cfg.augmented},
          {"optimizer", std::string(to_string(cfg.optimizer.kind))},
          {"step_size", cfg.optimizer.step_size},
          {"momentum", cfg.optimizer.momentum},
          {"beta1", cfg.optimizer.beta1},
          {"beta2", cfg.optimizer.beta2},
          {"epsilon", cfg.optimizer.epsilon},
          {"max_steps", cfg.optimizer.max_steps},
          {"grad_tol", cfg.optimizer.grad_tol},
          {"start", std::string(to_string(cfg.start))},
          {"theta", cfg.theta},
          {"a", cfg.a},
          {"b", cfg.b},
          {"bad_minimum_index", cfg.bad_minimum_index},
          {"seed", cfg.seed},
          {"out", cfg.out},
          {"formats", cfg.formats}};
}

AugPoint resolve_start(const RunConfig& cfg, const ScalarField& field) {
  switch (cfg.start) {
    case StartKind::explicit_point:
      if (cfg.theta.size() != field.dim()) {
        throw UsageError("explicit start needs theta of dimension " + std::to_string(field.dim()));
      }
      return AugPoint{cfg.theta, cfg.a, cfg.b};
    case StartKind::seeded_random:
      return finder_start(field, cfg.seed, 0);
    case StartKind::bad_minimum: {
      const auto minima = field.known_bad_minima();
      if (cfg.bad_minimum_index >= minima.size()) {
        throw UsageError("field '" + field.name() + "' has " + std::to_string(minima.size()) +
                         " registered bad minima");
      }
      return AugPoint{minima[cfg.bad_minimum_index].theta, cfg.a, cfg.b};
    }
  }
  throw UsageError("invalid start kind");
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> explicit_seed) {
  if (explicit_seed) return *explicit_seed;
  if (const char* env = std::getenv("MINFINITY_SEED"); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError("MINFINITY_SEED must be a non-negative integer");
  }
  return 0;
}

}  // namespace minfinity
