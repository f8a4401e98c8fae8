// Acceptance suite: one PASS/FAIL line per criterion. Each criterion runs its
// experiment at the stated scale with tolerances pinned here, and must also
// finish inside its runtime budget.

#include <iomanip>
#include <sstream>
#include <iostream>

#include "qlab/error.hpp"
#include "qlab/experiments.hpp"

namespace ex = qlab::experiments;

namespace {

struct Criterion {
  const char* id;
  const char* experiment;
  double budget_s;
  ex::json config;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {"AC1", "torus-l4-sweep", 120.0, {{"m_max", 10000}, {"per_shell", 1000}, {"tol_bound", 1e-12}, {"quadrature_grid", 512}, {"tol_quadrature", 1e-6}}},
      {"AC2", "lattice-jarnik", 60.0, {{"m_max", 10000}, {"arc_radii", 20}, {"arc_centers", 10000}}},
      {"AC3", "torus-variance-rate", 300.0, {{"m_values", {25, 100, 400, 2500}}, {"min_slope", 0.9}}},
      {"AC4", "torus-egorov", 30.0, {{"trials", 100}, {"tol", 1e-12}}},
      {"AC5", "weyl-table", 30.0, {{"lambda_max", 200.0}, {"tol_ratio", 0.05}}},
      {"AC6", "sphere-concentration", 300.0, {{"kernel_l_max", 100}, {"moment_l_max", 200}, {"l_values", {20, 40, 80}}, {"trials", 200}}},
      {"AC7", "sphere-weinstein", 180.0, {{"matrices", 50}, {"L_max", 30}, {"band_l", 40}, {"hausdorff_l_values", {10, 20, 40, 80}}}},
      {"AC8", "catmap-egorov", 180.0, {{"n_values", {21, 55, 89, 144}}, {"m_max", 3}, {"tol", 1e-10}, {"period_n_max", 512}}},
      {"AC9", "catmap-scar", 300.0, {{"near_min", 0.3}, {"near_max", 0.7}, {"far_max", 0.15}, {"residual_max", 1e-6}, {"scan", false}}},
      {"AC10", "dynamics-entropy", 300.0, {{"samples", 100000}, {"epsilon", 0.05}, {"T", 12}, {"tol_uniform", 0.15}, {"tol_mixture", 0.20}, {"dirac_max", 0.05}}},
      {"AC11", "dynamics-pressure", 1.0, {{"tol_pressure", 1e-10}, {"tol_root", 1e-9}}},
      {"AC12", "catmap-partition-decay", 120.0, {{"N", 233}, {"cutoff", "smooth"}, {"tol_rate", 0.1}}},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string out = argc > 1 ? argv[1] : "";
  int failures = 0;
  for (const auto& c : criteria()) {
    std::ostringstream detail;
    bool pass = false;
    try {
      const auto report = ex::run(c.experiment, c.config, 0);
      if (!out.empty()) ex::write_report(report, out);
      const bool in_time = report.wall_time_s <= c.budget_s;
      pass = report.pass() && in_time;
      detail << std::fixed << std::setprecision(2) << report.wall_time_s << " s of " << c.budget_s << " s";
      for (const auto& [name, chk] : report.checks.items())
        if (!chk.at("pass").get<bool>())
          detail << "; " << name << " observed " << chk.at("observed").dump() << " expected " << chk.at("expected").dump();
      if (!in_time) detail << "; over runtime budget";
    } catch (const std::exception& e) {
      detail << "error: " << e.what();
    }
    if (!pass) ++failures;
    std::cout << c.id << ' ' << (pass ? "PASS" : "FAIL") << ' ' << c.experiment << " (" << detail.str() << ")"
              << std::endl;
  }
  std::cout << (criteria().size() - static_cast<std::size_t>(failures)) << '/' << criteria().size()
            << " criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
