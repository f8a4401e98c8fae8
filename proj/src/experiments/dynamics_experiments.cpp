#include <cmath>

#include "qlab/dynamics.hpp"
#include "qlab/experiments.hpp"
#include "qlab/random.hpp"

namespace qlab::experiments {

namespace {

using namespace qlab::dynamics;

void entropy(const Context& ctx, Report& r) {
  const CatMap A = CatMap::arnold();
  const double chi = lyapunov_exponent(A);
  const auto n = static_cast<std::size_t>(ctx.get<int>("samples"));
  const double eps = ctx.get<double>("epsilon");
  const int T = ctx.get<int>("T");
  Rng rng = make_rng(ctx.seed());

  const auto uniform = EmpiricalMeasure::uniform(n, rng);
  const auto dirac = EmpiricalMeasure::dirac({0.0, 0.0}, static_cast<std::size_t>(ctx.get<int>("dirac_copies")));
  const auto du = ks_entropy_diagnostics(uniform, A, eps, T);
  const auto dd = ks_entropy_diagnostics(dirac, A, eps, T);
  const double mixture = ks_entropy_estimate({{0.5, dirac}, {0.5, uniform}}, A, eps, T);

  // Diagonal (eps, T) schedule on a smaller sample, informational apart from
  // monotonicity in eps at fixed T.
  const auto sub = EmpiricalMeasure::uniform(static_cast<std::size_t>(ctx.get<int>("schedule_samples")), rng);
  json schedule = json::array();
  const auto eps_list = ctx.get<std::vector<double>>("schedule_epsilon");
  const auto T_list = ctx.get<std::vector<int>>("schedule_T");
  for (std::size_t i = 0; i < std::min(eps_list.size(), T_list.size()); ++i) {
    const auto d = ks_entropy_diagnostics(sub, A, eps_list[i], T_list[i]);
    schedule.push_back({{"epsilon", eps_list[i]}, {"T", T_list[i]}, {"estimate", d.estimate},
                        {"self_only_fraction", d.self_only_fraction}, {"sample_cap", std::log(static_cast<double>(sub.size())) / T_list[i]}});
  }
  std::vector<double> by_eps;
  bool monotone = true;
  for (double e : ctx.get<std::vector<double>>("monotone_epsilon")) {
    by_eps.push_back(ks_entropy_estimate(sub, A, e, T));
    if (by_eps.size() > 1) monotone = monotone && by_eps.back() <= by_eps[by_eps.size() - 2] + 1e-15;
  }
  r.tables.emplace_back("fixed_point_measure", dirac.to_csv());

  const double tol_u = ctx.get<double>("tol_uniform"), tol_m = ctx.get<double>("tol_mixture");
  const double dirac_max = ctx.get<double>("dirac_max");
  r.outputs = {{"chi", chi},
               {"uniform", {{"estimate", du.estimate}, {"self_only_fraction", du.self_only_fraction},
                            {"mean_ball_mass", du.mean_ball_mass},
                            {"sample_cap", std::log(static_cast<double>(n)) / T}}},
               {"fixed_point", {{"estimate", dd.estimate}, {"mean_ball_mass", dd.mean_ball_mass}}},
               {"mixture", mixture},
               {"schedule", schedule},
               {"monotone_epsilon_estimates", by_eps}};
  r.check("uniform_near_chi", std::abs(du.estimate / chi - 1.0) <= tol_u, du.estimate,
          json::array({(1.0 - tol_u) * chi, (1.0 + tol_u) * chi}));
  r.check("fixed_point_near_zero", dd.estimate <= dirac_max, dd.estimate, dirac_max);
  r.check("mixture_near_half_chi", std::abs(mixture / (chi / 2.0) - 1.0) <= tol_m, mixture,
          json::array({(1.0 - tol_m) * chi / 2.0, (1.0 + tol_m) * chi / 2.0}));
  r.check("non_increasing_in_epsilon", monotone, by_eps, ctx.get<std::vector<double>>("monotone_epsilon"));
}

void pressure(const Context& ctx, Report& r) {
  const CatMap A = CatMap::arnold();
  const double chi = lyapunov_exponent(A);
  const double tol_p = ctx.get<double>("tol_pressure"), tol_r = ctx.get<double>("tol_root");

  const auto fixed = periodic_orbit(A, {0, 0}, 1);
  const double p_half = pressure_periodic_orbit(fixed, 0.5);
  const double p_zero = pressure_periodic_orbit(fixed, 0.0);

  // Every periodic orbit of a linear map has the same exponent.
  double orbit_spread = 0.0;
  json orbits = json::array();
  for (std::int64_t q : {2, 3, 5, 7}) {
    const auto g = periodic_orbit(A, {1, 0}, q);
    const double p = pressure_periodic_orbit(g, 0.5);
    orbit_spread = std::max(orbit_spread, std::abs(p + chi / 2.0));
    orbits.push_back({{"denominator", q}, {"period", g.period()}, {"pressure_half", p}});
  }

  const double root_orbit = bowen_root([&](double s) { return pressure_periodic_orbit(fixed, s); });
  const double root_full = bowen_root([&](double s) { return chi - s * chi; });
  const double root_synth = bowen_root([](double s) { return 0.5 - s; });

  r.outputs = {{"chi", chi},
               {"pressure_fixed_point_half", p_half},
               {"pressure_fixed_point_zero", p_zero},
               {"orbits", orbits},
               {"root_single_orbit", root_orbit},
               {"root_full_system", root_full},
               {"root_synthetic", root_synth}};
  r.check("pressure_fixed_point", std::abs(p_half + chi / 2.0) <= tol_p, p_half, -chi / 2.0);
  r.check("pressure_at_zero", p_zero == 0.0, p_zero, 0.0);
  r.check("orbit_independent_pressure", orbit_spread <= tol_p, orbit_spread, tol_p);
  r.check("root_single_orbit", std::abs(root_orbit) <= tol_r, root_orbit, 0.0);
  r.check("root_full_system", std::abs(root_full - 1.0) <= tol_r, root_full, 1.0);
  r.check("root_synthetic", std::abs(root_synth - 0.5) <= tol_r, root_synth, 0.5);
}

}  // namespace

void register_dynamics(std::vector<Experiment>& out) {
  out.push_back({"dynamics-entropy", "Bowen-ball entropy estimates for Lebesgue, a fixed point and their mixture",
                 "AC10",
                 {{"samples", 100000},
                  {"epsilon", 0.05},
                  {"T", 12},
                  {"dirac_copies", 1000},
                  {"tol_uniform", 0.15},
                  {"tol_mixture", 0.20},
                  {"dirac_max", 0.05},
                  {"schedule_samples", 20000},
                  {"schedule_epsilon", {0.2, 0.1, 0.05}},
                  {"schedule_T", {4, 6, 8}},
                  {"monotone_epsilon", {0.05, 0.1, 0.2}}},
                 entropy});
  out.push_back({"dynamics-pressure", "periodic-orbit pressure and roots of the Bowen equation", "AC11",
                 {{"tol_pressure", 1e-10}, {"tol_root", 1e-9}}, pressure});
}

}  // namespace qlab::experiments
