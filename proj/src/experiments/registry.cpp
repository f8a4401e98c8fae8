#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>

#include "qlab/experiments.hpp"

namespace qlab::experiments {

void Report::check(const std::string& name, bool ok, json observed, json expected) {
  checks[name] = {{"pass", ok}, {"observed", std::move(observed)}, {"expected", std::move(expected)}};
}

bool Report::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const json& c) { return c.at("pass").get<bool>(); });
}

json Report::to_json(bool with_time) const {
  json j = {{"experiment", experiment}, {"inputs", inputs}, {"outputs", outputs}, {"checks", checks}, {"pass", pass()}};
  if (with_time) j["wall_time_s"] = wall_time_s;
  return j;
}

const std::vector<Experiment>& registry() {
  static const std::vector<Experiment> all = [] {
    std::vector<Experiment> v;
    register_torus(v);
    register_sphere(v);
    register_catmap(v);
    register_dynamics(v);
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
    return v;
  }();
  return all;
}

const Experiment& find(const std::string& name) {
  for (const auto& e : registry())
    if (e.name == name) return e;
  throw ConfigError("unknown experiment '" + name + "'");
}

Report run(const std::string& name, const json& user_config, std::uint64_t seed) {
  const Experiment& e = find(name);
  const json params = resolve_config(e, user_config);
  Report r;
  r.experiment = e.name;
  r.inputs = params;
  r.inputs["seed"] = seed;
  const auto start = std::chrono::steady_clock::now();
  e.body(Context(params, seed), r);
  r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

void write_report(const Report& r, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  std::ofstream(base / (r.experiment + ".json")) << r.to_json().dump(2) << '\n';
  for (const auto& [suffix, csv] : r.tables) std::ofstream(base / (r.experiment + "_" + suffix + ".csv")) << csv;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace qlab::experiments
