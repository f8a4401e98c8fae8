#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <sys/wait.h>

#include "qlab/experiments.hpp"

namespace ex = qlab::experiments;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qlab_test_" + std::to_string(::getpid())) / name;
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(QLAB_BINARY) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("registry covers every acceptance criterion") {
  std::set<std::string> covered;
  for (const auto& e : ex::registry())
    if (!e.criterion.empty()) covered.insert(e.criterion);
  for (int i = 1; i <= 12; ++i) CHECK(covered.count("AC" + std::to_string(i)) == 1);
}

TEST_CASE("registry is sorted and stable") {
  const auto& r = ex::registry();
  std::vector<std::string> names;
  for (const auto& e : r) names.push_back(e.name);
  CHECK(std::is_sorted(names.begin(), names.end()));
  CHECK(std::adjacent_find(names.begin(), names.end()) == names.end());
  for (const char* must : {"torus-variance-rate", "sphere-concentration", "torus-l4-sweep", "catmap-scar", "weyl-table"})
    CHECK(std::find(names.begin(), names.end(), must) != names.end());
  for (const auto& e : r) {
    CHECK_FALSE(e.description.empty());
    CHECK(e.defaults.is_object());
  }
}

TEST_CASE("config validation") {
  const auto& e = ex::find("weyl-table");
  CHECK(ex::resolve_config(e, nullptr) == e.defaults);
  const auto c = ex::resolve_config(e, {{"experiment", "weyl-table"}, {"lambda_max", 50}, {"seed", 3}, {"out", "x"}});
  CHECK(c["lambda_max"] == 50);
  CHECK_FALSE(c.contains("seed"));
  CHECK_THROWS_AS(ex::resolve_config(e, {{"lambda_maximum", 50.0}}), ex::ConfigError);
  CHECK_THROWS_AS(ex::resolve_config(e, {{"lambda_max", "big"}}), ex::ConfigError);
  CHECK_THROWS_AS(ex::resolve_config(e, {{"experiment", "torus-egorov"}}), ex::ConfigError);
  CHECK_THROWS_AS(ex::resolve_config(e, ex::json::array()), ex::ConfigError);
  CHECK_THROWS_AS(ex::resolve_config(ex::find("catmap-scar"), {{"n_values", {521.5}}}), ex::ConfigError);
  CHECK_THROWS_AS(ex::resolve_config(ex::find("catmap-scar"), {{"grid", 64.5}}), ex::ConfigError);
  CHECK_THROWS_AS(ex::find("no-such-experiment"), ex::ConfigError);
}

TEST_CASE("identical configs give identical reports") {
  for (const char* name : {"weyl-table", "torus-egorov", "dynamics-pressure", "lattice-jarnik"}) {
    const auto a = ex::run(name, nullptr, 17), b = ex::run(name, nullptr, 17);
    CHECK(a.to_json(false).dump() == b.to_json(false).dump());
    CHECK(a.tables == b.tables);
  }
  const ex::json small = {{"n_values", {21}}, {"period_n_max", 40}};
  CHECK(ex::run("catmap-egorov", small, 1).to_json(false) == ex::run("catmap-egorov", small, 1).to_json(false));
}

TEST_CASE("report layout") {
  const auto r = ex::run("weyl-table", nullptr, 0);
  const auto j = r.to_json();
  for (const char* key : {"experiment", "inputs", "outputs", "checks", "pass", "wall_time_s"}) CHECK(j.contains(key));
  CHECK(j["inputs"]["seed"] == 0);
  CHECK_FALSE(r.to_json(false).contains("wall_time_s"));

  const fs::path dir = scratch("layout");
  ex::write_report(r, dir.string());
  const auto parsed = ex::json::parse(slurp(dir / "weyl-table.json"));
  CHECK(parsed["experiment"] == "weyl-table");
  std::istringstream csv(slurp(dir / "weyl-table_torus-2.csv"));
  std::string header, row;
  std::getline(csv, header);
  CHECK(header == "lambda,count,leading_term");
  int rows = 0;
  while (std::getline(csv, row)) {
    CHECK(std::count(row.begin(), row.end(), ',') == 2);
    ++rows;
  }
  CHECK(rows == 200);
}

TEST_CASE("command line") {
  const fs::path dir = scratch("cli");
  const fs::path log = dir / "log.txt";

  CHECK(run_cli("list", log) == 0);
  const std::string listing = slurp(log);
  CHECK(listing.find("torus-variance-rate") != std::string::npos);
  CHECK(run_cli("list", dir / "log2.txt") == 0);
  CHECK(slurp(dir / "log2.txt") == listing);

  CHECK(run_cli("run --experiment weyl-table --seed 1 --out " + (dir / "w").string(), log) == 0);
  CHECK(fs::exists(dir / "w" / "weyl-table.json"));
  CHECK(fs::exists(dir / "w" / "weyl-table_sphere-2.csv"));

  // Config file naming the experiment, plus a fixture failure.
  std::ofstream(dir / "strict.json") << R"({"experiment": "weyl-table", "tol_ratio": 1e-9})";
  CHECK(run_cli("run --config " + (dir / "strict.json").string() + " --out " + (dir / "s").string(), log) == 2);

  std::ofstream(dir / "bad.json") << R"({"experiment": "weyl-table", "unknown": 1})";
  CHECK(run_cli("run --config " + (dir / "bad.json").string() + " --out " + (dir / "b").string(), log) == 1);
  CHECK(run_cli("run --experiment nope --out " + (dir / "n").string(), log) == 1);
  CHECK(run_cli("frobnicate", log) == 1);
  CHECK(run_cli("run", log) == 1);

  std::ofstream(dir / "scar.json") << R"({"experiment": "catmap-scar", "n_values": [101], "scan": false})";
  CHECK(run_cli("run --config " + (dir / "scar.json").string() + " --out " + (dir / "c").string(), log) == 3);
  CHECK(slurp(log).find("not-admissible") != std::string::npos);

  // Same config and seed from the CLI: byte-identical apart from wall time.
  CHECK(run_cli("run --experiment torus-egorov --seed 4 --out " + (dir / "d1").string(), log) == 0);
  CHECK(run_cli("run --experiment torus-egorov --seed 4 --out " + (dir / "d2").string(), log) == 0);
  auto j1 = ex::json::parse(slurp(dir / "d1" / "torus-egorov.json"));
  auto j2 = ex::json::parse(slurp(dir / "d2" / "torus-egorov.json"));
  j1.erase("wall_time_s");
  j2.erase("wall_time_s");
  CHECK(j1.dump() == j2.dump());

  fs::remove_all(dir.parent_path());
}
