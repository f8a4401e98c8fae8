#pragma once

// Named, seeded experiments. Each one reads a flat JSON config (unknown keys
// rejected), computes outputs, and records pass/fail checks against frozen
// fixtures. Reports are plain JSON with sorted keys.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace qlab::experiments {

using json = nlohmann::json;

// Invalid configuration or unknown experiment: a usage error.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Context {
 public:
  Context(json params, std::uint64_t seed) : params_(std::move(params)), seed_(seed) {}

  template <class T>
  T get(const std::string& key) const { return params_.at(key).get<T>(); }
  const json& params() const noexcept { return params_; }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  json params_;
  std::uint64_t seed_;
};

struct Report {
  std::string experiment;
  json inputs = json::object();
  json outputs = json::object();
  json checks = json::object();
  double wall_time_s = 0.0;
  // CSV tables: file suffix -> contents
  std::vector<std::pair<std::string, std::string>> tables;

  void check(const std::string& name, bool pass, json observed, json expected);
  bool pass() const;
  json to_json(bool with_time = true) const;
};

struct Experiment {
  std::string name;
  std::string description;
  std::string criterion;  // acceptance criterion id, e.g. "AC3"; empty for extras
  json defaults;
  std::function<void(const Context&, Report&)> body;
};

// Sorted by name.
const std::vector<Experiment>& registry();
const Experiment& find(const std::string& name);

// Defaults overlaid with the user's keys; type-checked. The keys "experiment",
// "seed" and "out" are accepted and stripped.
json resolve_config(const Experiment& e, const json& user);

Report run(const std::string& name, const json& user_config, std::uint64_t seed);

// Writes <dir>/<name>.json and <dir>/<name>_<suffix>.csv for each table.
void write_report(const Report& r, const std::string& dir);

// Registration hooks, one per experiment family.
void register_torus(std::vector<Experiment>& out);
void register_sphere(std::vector<Experiment>& out);
void register_catmap(std::vector<Experiment>& out);
void register_dynamics(std::vector<Experiment>& out);

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace qlab::experiments
