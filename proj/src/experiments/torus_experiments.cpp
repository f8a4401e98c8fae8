#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qlab/error.hpp"
#include "qlab/experiments.hpp"
#include "qlab/lattice.hpp"
#include "qlab/random.hpp"
#include "qlab/spectra.hpp"
#include "qlab/torus.hpp"

namespace qlab::experiments {

namespace {

using lattice::IntVec;
using torus::TorusState;
using torus::TorusSymbol;
using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

// --- L^4 sweep --------------------------------------------------------------

void l4_sweep(const Context& ctx, Report& r) {
  const auto m_max = ctx.get<std::int64_t>("m_max");
  const auto per_shell = ctx.get<int>("per_shell");
  const double bound = 3.0 / (4.0 * kPi * kPi);
  Rng rng = make_rng(ctx.seed());

  double max_l4 = 0.0;
  std::int64_t argmax = 0, shells = 0, samples = 0;
  for (std::int64_t m = 1; m <= m_max; ++m) {
    const auto shell = lattice::enumerate_shell(m, 2);
    if (shell.empty()) continue;
    ++shells;
    const torus::ShellL4Evaluator l4(shell);
    Eigen::VectorXcd c(static_cast<Eigen::Index>(shell.size()));
    for (int s = 0; s < per_shell; ++s) {
      for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = complex_gaussian(rng);
      c /= c.norm() * 2.0 * kPi;
      const double v = l4(c);
      if (v > max_l4) {
        max_l4 = v;
        argmax = m;
      }
      ++samples;
    }
  }

  // Plancherel against grid quadrature on one seeded eigenfunction.
  const auto qshell = lattice::enumerate_shell(ctx.get<std::int64_t>("quadrature_shell"), 2);
  const auto psi = torus::random_eigenfunction(qshell, ctx.seed());
  const double exact = torus::exact_l4(psi);
  const double grid = torus::l4_quadrature(psi, ctx.get<int>("quadrature_grid"));
  const double rel = std::abs(exact - grid) / grid;
  const double plane = torus::exact_l4(TorusState::plane_wave({3, 4}));

  r.outputs = {{"shells", shells},
               {"eigenfunctions", samples},
               {"max_l4", max_l4},
               {"max_l4_shell", argmax},
               {"bound", bound},
               {"max_ratio_to_bound", max_l4 / bound},
               {"quadrature_exact", exact},
               {"quadrature_grid_value", grid},
               {"quadrature_relative_error", rel},
               {"plane_wave_l4", plane}};
  r.check("max_l4_below_bound", max_l4 <= bound + ctx.get<double>("tol_bound"), max_l4, bound);
  r.check("plancherel_matches_quadrature", rel <= ctx.get<double>("tol_quadrature"), rel,
          ctx.get<double>("tol_quadrature"));
  r.check("plane_wave_value", std::abs(plane - 1.0 / (4.0 * kPi * kPi)) <= 1e-15, plane, 1.0 / (4.0 * kPi * kPi));
}

// --- Jarnik -----------------------------------------------------------------

void jarnik(const Context& ctx, Report& r) {
  const auto m_max = ctx.get<std::int64_t>("m_max");
  std::size_t max_deg = 0;
  std::int64_t max_deg_shell = 0, shifts = 0;
  for (std::int64_t m = 1; m <= m_max; ++m) {
    const auto shell = lattice::enumerate_shell(m, 2);
    if (shell.empty()) continue;
    std::vector<IntVec> diffs;
    for (const auto& a : shell.vectors())
      for (const auto& b : shell.vectors())
        if (a != b) diffs.push_back({a[0] - b[0], a[1] - b[1]});
    std::sort(diffs.begin(), diffs.end());
    diffs.erase(std::unique(diffs.begin(), diffs.end()), diffs.end());
    for (const auto& p : diffs) {
      const auto d = lattice::pair_degeneracy(shell, p);
      ++shifts;
      if (d > max_deg) {
        max_deg = d;
        max_deg_shell = m;
      }
    }
  }

  // Arcs on the circles with the most lattice points among radius^2 <= arc_m_max.
  const auto arc_m_max = ctx.get<std::int64_t>("arc_m_max");
  const auto n_radii = ctx.get<int>("arc_radii");
  const auto centers = ctx.get<int>("arc_centers");
  std::vector<int> reps(static_cast<std::size_t>(arc_m_max + 1), 0);
  const auto R = lattice::isqrt(arc_m_max);
  for (std::int64_t x = -R; x <= R; ++x)
    for (std::int64_t y = -R; y <= R; ++y)
      if (x * x + y * y <= arc_m_max) ++reps[static_cast<std::size_t>(x * x + y * y)];
  std::vector<std::int64_t> ms;
  for (std::int64_t m = 1; m <= arc_m_max; ++m)
    if (reps[static_cast<std::size_t>(m)] > 0) ms.push_back(m);
  std::stable_sort(ms.begin(), ms.end(), [&](auto a, auto b) {
    return reps[static_cast<std::size_t>(a)] > reps[static_cast<std::size_t>(b)];
  });
  ms.resize(std::min<std::size_t>(ms.size(), static_cast<std::size_t>(n_radii)));

  std::size_t max_arc = 0;
  std::int64_t arcs = 0;
  json radii = json::array();
  for (auto m : ms) {
    const auto circle = lattice::enumerate_shell(m, 2);
    const double radius = std::sqrt(static_cast<double>(m));
    const double len = std::cbrt(2.0 * radius);
    const double half = len / (2.0 * radius);
    std::size_t local = 0;
    auto probe = [&](double angle) {
      const auto c = lattice::arc_lattice_count(circle, angle, len);
      local = std::max(local, c);
      ++arcs;
    };
    for (int c = 0; c < centers; ++c) probe(2.0 * kPi * c / centers);
    // Arcs anchored at each lattice point, the worst placements.
    for (const auto& k : circle.vectors()) {
      const double a = std::atan2(static_cast<double>(k[1]), static_cast<double>(k[0]));
      probe(a + half);
      probe(a - half);
    }
    max_arc = std::max(max_arc, local);
    radii.push_back({{"radius_squared", m}, {"points", circle.size()}, {"max_arc_count", local}});
  }

  const auto s25 = lattice::enumerate_shell(25, 2);
  const auto deg_68 = lattice::pair_degeneracy(s25, IntVec{6, 8});
  r.outputs = {{"shells_checked", m_max},
               {"shifts_checked", shifts},
               {"max_pair_degeneracy", max_deg},
               {"max_pair_degeneracy_shell", max_deg_shell},
               {"arcs_checked", arcs},
               {"max_arc_count", max_arc},
               {"arc_radii", radii},
               {"pair_degeneracy_25_6_8", deg_68}};
  r.check("pair_degeneracy_at_most_2", max_deg <= 2, max_deg, 2);
  r.check("arc_count_at_most_2", max_arc <= 2, max_arc, 2);
  r.check("pair_degeneracy_example", deg_68 == 1, deg_68, 1);
}

// --- quantum variance -------------------------------------------------------

struct NamedSymbol {
  std::string name;
  TorusSymbol symbol;
};

// Only shifts with |p|^2 even connect two points of one shell (|k+p| = |k|
// forces 2 k.p = -|p|^2), so symbols built from odd |p|^2 have variance 0.
std::vector<NamedSymbol> variance_symbols() {
  auto cos_mode = [](IntVec p, double amp) {
    IntVec q{-p[0], -p[1]};
    return std::vector<std::pair<IntVec, cplx>>{{p, 0.5 * amp}, {q, 0.5 * amp}};
  };
  auto sin_mode = [](IntVec p) {
    IntVec q{-p[0], -p[1]};
    return std::vector<std::pair<IntVec, cplx>>{{p, cplx(0, -0.5)}, {q, cplx(0, 0.5)}};
  };
  std::vector<NamedSymbol> out;
  out.push_back({"cos(x1+x2)/pi", TorusSymbol::trigonometric(2, cos_mode({1, 1}, 1.0 / kPi))});
  out.push_back({"cos(3x1+x2)", TorusSymbol::trigonometric(2, cos_mode({3, 1}, 1.0))});
  out.push_back({"cos(2x1)", TorusSymbol::trigonometric(2, cos_mode({2, 0}, 1.0))});
  out.push_back({"cos(x1)cos(x2)", TorusSymbol::trigonometric(2, {{{1, 1}, 0.25}, {{-1, -1}, 0.25}, {{1, -1}, 0.25}, {{-1, 1}, 0.25}})});
  out.push_back({"sin(x1-3x2)", TorusSymbol::trigonometric(2, sin_mode({1, -3}))});
  return out;
}

void variance_rate(const Context& ctx, Report& r) {
  const auto m_values = ctx.get<std::vector<std::int64_t>>("m_values");
  const double min_slope = ctx.get<double>("min_slope");
  const double max_ratio = ctx.get<double>("max_ratio");
  const auto symbols = variance_symbols();
  Rng rng = make_rng(ctx.seed());

  std::vector<std::vector<double>> V(symbols.size());
  std::vector<double> log_hbar;
  for (auto M : m_values) {
    std::vector<TorusState> basis;
    for (std::int64_t m = 1; m <= M; ++m) {
      const auto shell = lattice::enumerate_shell(m, 2);
      if (shell.empty()) continue;
      auto b = torus::random_shell_basis(shell, rng);
      basis.insert(basis.end(), std::make_move_iterator(b.begin()), std::make_move_iterator(b.end()));
    }
    log_hbar.push_back(-0.5 * std::log(static_cast<double>(M)));
    for (std::size_t s = 0; s < symbols.size(); ++s)
      V[s].push_back(torus::quantum_variance(basis, symbols[s].symbol, M));
  }

  json per_symbol = json::object();
  double worst_slope = std::numeric_limits<double>::infinity(), worst_ratio = 0.0;
  std::ostringstream csv;
  csv << "symbol,M,hbar,variance,variance_over_hbar\n";
  csv.precision(12);
  for (std::size_t s = 0; s < symbols.size(); ++s) {
    std::vector<double> logV;
    json ratios = json::array();
    for (std::size_t i = 0; i < V[s].size(); ++i) {
      logV.push_back(std::log(V[s][i]));
      const double hbar = std::exp(log_hbar[i]);
      ratios.push_back(V[s][i] / hbar);
      worst_ratio = std::max(worst_ratio, V[s][i] / hbar);
      csv << '"' << symbols[s].name << "\"," << m_values[i] << ',' << hbar << ',' << V[s][i] << ','
          << V[s][i] / hbar << '\n';
    }
    const double slope = fit_slope(log_hbar, logV);
    worst_slope = std::min(worst_slope, slope);
    per_symbol[symbols[s].name] = {{"variance", V[s]}, {"variance_over_hbar", ratios}, {"slope", slope}};
  }
  r.tables.emplace_back("variance", csv.str());
  r.outputs = {{"symbols", per_symbol}, {"min_slope_observed", worst_slope}, {"max_variance_over_hbar", worst_ratio}};
  r.check("slope_at_least_min", worst_slope >= min_slope, worst_slope, min_slope);
  r.check("variance_over_hbar_bounded", worst_ratio <= max_ratio, worst_ratio, max_ratio);
}

// --- Egorov -------------------------------------------------------------------

TorusSymbol egorov_test_symbol(const IntVec& p, double w1, double w2) {
  TorusSymbol a(2);
  a.add(p, [w1](std::span<const double> xi) { return cplx(std::cos(w1 * xi[0]) + 0.5 * xi[1] * xi[1], 0.3); },
        2.0);
  a.add({-p[0], -p[1]}, [w2](std::span<const double> xi) { return cplx(std::sin(w2 * xi[1]), xi[0]); }, 2.0);
  a.add_constant({0, 0}, 0.7);
  return a;
}

void torus_egorov(const Context& ctx, Report& r) {
  const auto trials = ctx.get<int>("trials");
  const double tol = ctx.get<double>("tol");
  Rng rng = make_rng(ctx.seed());
  std::uniform_int_distribution<int> small(-6, 6), shift(-3, 3);
  std::uniform_real_distribution<double> uhbar(0.02, 0.5), ut(-10.0, 10.0), uw(0.5, 3.0);

  double worst = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    IntVec p{0, 0};
    while (p[0] == 0 && p[1] == 0) p = {shift(rng), shift(rng)};
    std::vector<IntVec> modes;
    for (int i = 0; i < 8; ++i) {
      IntVec k{small(rng), small(rng)};
      modes.push_back(k);
      modes.push_back({k[0] + p[0], k[1] + p[1]});
    }
    std::sort(modes.begin(), modes.end());
    modes.erase(std::unique(modes.begin(), modes.end()), modes.end());
    Eigen::VectorXcd c(static_cast<Eigen::Index>(modes.size()));
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = complex_gaussian(rng);
    c /= c.norm() * 2.0 * kPi;
    const TorusState psi(2, modes, c, uhbar(rng));
    const double t = ut(rng);
    const auto a = egorov_test_symbol(p, uw(rng), uw(rng));
    const cplx lhs = torus::wigner(psi, torus::egorov_conjugate(a, t));
    const cplx rhs = torus::conjugated_matrix_element(psi, a, t);
    worst = std::max(worst, std::abs(lhs - rhs));
  }

  // Eigenfunctions: the classical average is invisible to Wigner for all t.
  double worst_inv = 0.0, worst_moment = 0.0;
  std::int64_t inv_trials = 0;
  for (std::int64_t m : {25, 65, 325, 1105, 5525}) {
    const auto shell = lattice::enumerate_shell(m, 2);
    std::uniform_int_distribution<std::size_t> pick(0, shell.size() - 1);
    for (int i = 0; i < 20; ++i) {
      const auto psi = torus::random_eigenfunction(shell, rng);
      const auto& k1 = shell.vectors()[pick(rng)];
      const auto& k2 = shell.vectors()[pick(rng)];
      IntVec p{k1[0] - k2[0], k1[1] - k2[1]};
      const auto a = egorov_test_symbol(p, uw(rng), uw(rng));
      const double t = ut(rng);
      worst_inv = std::max(worst_inv, std::abs(torus::wigner(psi, torus::egorov_conjugate(a, t)) - torus::wigner(psi, a)));
      const auto plain = TorusSymbol::trigonometric(2, {{p, 1.0}});
      worst_moment = std::max(worst_moment, std::abs(torus::wigner(psi, plain) -
                                                     4.0 * kPi * kPi * std::conj(torus::density_moment(psi, p))));
      ++inv_trials;
    }
  }

  r.outputs = {{"trials", trials},
               {"max_matrix_element_error", worst},
               {"eigenfunction_trials", inv_trials},
               {"max_eigenfunction_invariance_error", worst_inv},
               {"max_wigner_moment_error", worst_moment}};
  r.check("egorov_matrix_elements", worst <= tol, worst, tol);
  r.check("eigenfunction_invariance", worst_inv <= tol, worst_inv, tol);
  r.check("wigner_is_conjugate_moment", worst_moment <= tol, worst_moment, tol);
}

// --- Weyl table ---------------------------------------------------------------

std::int64_t brute_torus2(double lam) {
  const auto R = static_cast<std::int64_t>(std::floor(lam)) + 1;
  std::int64_t c = 0;
  for (std::int64_t x = -R; x <= R; ++x)
    for (std::int64_t y = -R; y <= R; ++y)
      if (static_cast<double>(x * x + y * y) <= lam * lam + 1e-9) ++c;
  return c;
}

std::int64_t brute_sphere(double lam) {
  std::int64_t c = 0;
  for (std::int64_t l = 0; static_cast<double>(l * (l + 1)) <= lam * lam + 1e-9; ++l) c += 2 * l + 1;
  return c;
}

void weyl(const Context& ctx, Report& r) {
  const double lam_max = ctx.get<double>("lambda_max");
  const double step = ctx.get<double>("step");
  const double tol = ctx.get<double>("tol_ratio");
  const std::vector<std::pair<spectra::SpectrumModel, double>> models = {
      {spectra::SpectrumModel::torus(2), ctx.get<double>("remainder_constant_torus")},
      {spectra::SpectrumModel::sphere(), ctx.get<double>("remainder_constant_sphere")}};

  json out = json::object();
  for (const auto& [model, C] : models) {
    const auto rows = spectra::weyl_table(model, lam_max, step);
    std::ostringstream csv;
    csv.precision(12);
    csv << "lambda,count,leading_term\n";
    double worst = 0.0;
    bool oracle_ok = true;
    for (const auto& row : rows) {
      csv << row.lambda << ',' << row.count << ',' << row.leading << '\n';
      worst = std::max(worst, std::abs(row.remainder) / row.lambda);
      const auto brute = model.kind == spectra::SpectrumModel::Torus ? brute_torus2(row.lambda) : brute_sphere(row.lambda);
      oracle_ok = oracle_ok && brute == row.count;
    }
    r.tables.emplace_back(model.tag(), csv.str());
    const auto c10 = spectra::counting_function(model, 10.0);
    const double ratio = static_cast<double>(spectra::counting_function(model, lam_max)) /
                         spectra::weyl_leading_term(model, lam_max);
    const std::int64_t expect10 = model.kind == spectra::SpectrumModel::Torus ? 317 : 100;
    out[model.tag()] = {{"count_at_10", c10},
                        {"leading_at_10", spectra::weyl_leading_term(model, 10.0)},
                        {"ratio_at_lambda_max", ratio},
                        {"max_remainder_over_lambda", worst},
                        {"rows", rows.size()}};
    r.check(model.tag() + "_count_at_10", c10 == expect10, c10, expect10);
    r.check(model.tag() + "_ratio", std::abs(ratio - 1.0) <= tol, ratio, json::array({1.0 - tol, 1.0 + tol}));
    r.check(model.tag() + "_remainder_regression", worst <= C, worst, C);
    r.check(model.tag() + "_counts_match_brute_force", oracle_ok, oracle_ok, true);
  }
  r.outputs = out;
}

// --- observability ----------------------------------------------------------

void observability(const Context& ctx, Report& r) {
  const auto m_max = ctx.get<std::int64_t>("m_max");
  const auto samples = ctx.get<int>("samples");
  const double side = ctx.get<double>("box_side");
  std::vector<lattice::LatticeShell> shells;
  for (std::int64_t m = 1; m <= m_max; ++m) {
    auto s = lattice::enumerate_shell(m, 2);
    if (!s.empty()) shells.push_back(std::move(s));
  }
  Rng rng = make_rng(ctx.seed());
  std::uniform_int_distribution<std::size_t> pick(0, shells.size() - 1);
  const torus::Box box{{0.0, 0.0}, {side, side}};
  const torus::Box full{{0.0, 0.0}, {2.0 * kPi, 2.0 * kPi}};
  double lo = std::numeric_limits<double>::infinity(), worst_full = 0.0;
  std::int64_t lo_shell = 0;
  for (int i = 0; i < samples; ++i) {
    const auto& shell = shells[pick(rng)];
    const auto psi = torus::random_eigenfunction(shell, rng);
    const double mass = torus::observability_mass(psi, box);
    if (mass < lo) {
      lo = mass;
      lo_shell = shell.radius_squared();
    }
    if (i < 100) worst_full = std::max(worst_full, std::abs(torus::observability_mass(psi, full) - 1.0));
  }
  r.outputs = {{"empirical_c_omega", lo},
               {"minimizing_shell", lo_shell},
               {"box_volume_fraction", side * side / (4.0 * kPi * kPi)},
               {"full_torus_error", worst_full}};
  r.check("mass_positive", lo > 0.0, lo, "> 0");
  r.check("full_torus_mass_one", worst_full <= 1e-12, worst_full, 1e-12);
}

}  // namespace

void register_torus(std::vector<Experiment>& out) {
  out.push_back({"torus-l4-sweep", "L^4 norms of random 2D torus eigenfunctions against 3/(2pi)^2", "AC1",
                 {{"m_max", 10000}, {"per_shell", 1000}, {"tol_bound", 1e-12}, {"quadrature_shell", 25},
                  {"quadrature_grid", 512}, {"tol_quadrature", 1e-6}},
                 l4_sweep});
  out.push_back({"lattice-jarnik", "pair degeneracies and short-arc lattice counts on circles", "AC2",
                 {{"m_max", 10000}, {"arc_radii", 20}, {"arc_centers", 10000}, {"arc_m_max", 1000000}},
                 jarnik});
  out.push_back({"torus-variance-rate", "quantum variance decay rate for random per-shell bases", "AC3",
                 {{"m_values", {25, 100, 400, 2500}}, {"min_slope", 0.9}, {"max_ratio", 0.05}},
                 variance_rate});
  out.push_back({"torus-egorov", "exact Egorov identity and Wigner invariance on the torus", "AC4",
                 {{"trials", 100}, {"tol", 1e-12}}, torus_egorov});
  out.push_back({"weyl-table", "eigenvalue counting against the Weyl leading term", "AC5",
                 {{"lambda_max", 200.0}, {"step", 1.0}, {"tol_ratio", 0.05},
                  {"remainder_constant_torus", 2.0}, {"remainder_constant_sphere", 3.0}},
                 weyl});
  out.push_back({"torus-observability", "mass of random eigenfunctions on a fixed box", "",
                 {{"m_max", 10000}, {"samples", 10000}, {"box_side", kPi / 4.0}}, observability});
}

}  // namespace qlab::experiments
