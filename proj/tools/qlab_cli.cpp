#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "qlab/error.hpp"
#include "qlab/experiments.hpp"

namespace ex = qlab::experiments;

namespace {

enum Exit { Pass = 0, Usage = 1, FixtureFailure = 2, NumericalError = 3 };

int run(std::string name, const std::string& config_path, std::optional<std::uint64_t> seed,
        std::optional<std::string> out) {
  ex::json config = nullptr;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw ex::ConfigError("cannot open config '" + config_path + "'");
    try {
      config = ex::json::parse(in);
    } catch (const ex::json::parse_error& e) {
      throw ex::ConfigError("config is not valid JSON: " + std::string(e.what()));
    }
    if (!config.is_object()) throw ex::ConfigError("config must be a flat JSON object");
    if (name.empty() && config.contains("experiment") && config["experiment"].is_string())
      name = config["experiment"].get<std::string>();
    if (!seed && config.contains("seed")) {
      if (!config["seed"].is_number_unsigned()) throw ex::ConfigError("config key 'seed' must be a non-negative integer");
      seed = config["seed"].get<std::uint64_t>();
    }
    if (!out && config.contains("out")) {
      if (!config["out"].is_string()) throw ex::ConfigError("config key 'out' must be a string");
      out = config["out"].get<std::string>();
    }
  }
  if (name.empty()) throw ex::ConfigError("no experiment given (use --experiment or an \"experiment\" key)");

  const auto report = ex::run(name, config, seed.value_or(0));
  ex::write_report(report, out.value_or("out"));
  std::cout << report.experiment << ": " << (report.pass() ? "PASS" : "FAIL") << " (" << report.wall_time_s
            << " s)\n";
  for (const auto& [check, c] : report.checks.items())
    if (!c.at("pass").get<bool>()) std::cout << "  failed check " << check << ": observed " << c.at("observed").dump()
                                             << ", expected " << c.at("expected").dump() << '\n';
  return report.pass() ? Pass : FixtureFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qlab: seeded numerical experiments on tori, spheres and cat maps"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "list experiments, sorted by name");
  auto* run_cmd = app.add_subcommand("run", "run one experiment and write its report");
  std::string name, config_path;
  std::uint64_t seed_value = 0;
  std::string out_value;
  run_cmd->add_option("--experiment", name, "experiment name");
  run_cmd->add_option("--config", config_path, "flat JSON config file")->check(CLI::ExistingFile);
  auto* seed_opt = run_cmd->add_option("--seed", seed_value, "random seed (default 0)");
  auto* out_opt = run_cmd->add_option("--out", out_value, "output directory (default ./out)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? Pass : Usage;
  }

  if (*list) {
    for (const auto& e : ex::registry()) std::cout << e.name << '\t' << e.description << '\n';
    return Pass;
  }

  try {
    return run(name, config_path, *seed_opt ? std::optional(seed_value) : std::nullopt,
               *out_opt ? std::optional(out_value) : std::nullopt);
  } catch (const ex::ConfigError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return Usage;
  } catch (const qlab::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == qlab::ErrorKind::InvalidArgument ? Usage : NumericalError;
  } catch (const ex::json::exception& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return Usage;
  }
}
