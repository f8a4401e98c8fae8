#include <cmath>
#include <numbers>

#include "qlab/experiments.hpp"
#include "qlab/random.hpp"
#include "qlab/sphere.hpp"

namespace qlab::experiments {

namespace {

constexpr double kPi = std::numbers::pi;

// int cos^2(theta) |psi_l^hw|^2 dVol by Gauss-Legendre in cos(theta), using
// the harmonic evaluator rather than the moment recurrence.
double equator_moment_quadrature(int l) {
  std::vector<double> x, w;
  sphere::gauss_legendre(l + 3, x, w);
  const auto hw = sphere::highest_weight_state(l);
  double sum = 0.0;
  for (std::size_t q = 0; q < x.size(); ++q)
    sum += w[q] * x[q] * x[q] * std::norm(sphere::evaluate_state(hw, std::acos(x[q]), 0.0));
  return 2.0 * kPi * sum;
}

void concentration(const Context& ctx, Report& r) {
  const auto kernel_l = ctx.get<int>("kernel_l_max");
  const auto moment_l = ctx.get<int>("moment_l_max");
  const auto degrees = ctx.get<std::vector<int>>("l_values");
  const auto trials = ctx.get<int>("trials");

  double kernel_err = 0.0;
  for (int l = 0; l <= kernel_l; ++l) {
    const double k = sphere::reproducing_kernel_diag(l, ctx.seed() + static_cast<std::uint64_t>(l));
    kernel_err = std::max(kernel_err, std::abs(k - (2.0 * l + 1.0) / (4.0 * kPi)));
  }

  double moment_err = 0.0, quad_err = 0.0;
  for (int l = 0; l <= moment_l; ++l) {
    const double exact = 1.0 / (2.0 * l + 3.0);
    moment_err = std::max(moment_err, std::abs(sphere::equator_concentration(l, {0.0, 0.0, 1.0}) - exact));
    quad_err = std::max(quad_err, std::abs(equator_moment_quadrature(l) - exact));
  }

  // a = cos^2 theta - 1/3, one seed stream shared by all degrees.
  const std::vector<double> a{-1.0 / 3.0, 0.0, 1.0};
  json per_l = json::array();
  std::vector<double> medians, exceed;
  for (int l : degrees) {
    const auto s = sphere::concentration_experiment(l, a, trials, ctx.seed());
    medians.push_back(s.median);
    exceed.push_back(s.exceedance_fraction);
    per_l.push_back({{"l", l}, {"median_sup_deviation", s.median}, {"threshold", s.threshold},
                     {"exceedance_fraction", s.exceedance_fraction}});
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < medians.size(); ++i) decreasing = decreasing && medians[i] < medians[i - 1];

  r.outputs = {{"kernel_max_error", kernel_err},
               {"equator_moment_max_error", moment_err},
               {"equator_moment_quadrature_max_error", quad_err},
               {"concentration", per_l}};
  r.check("kernel_constant", kernel_err <= 1e-8, kernel_err, 1e-8);
  r.check("equator_moment", moment_err <= 1e-10, moment_err, 1e-10);
  r.check("equator_moment_quadrature", quad_err <= 1e-10, quad_err, 1e-10);
  r.check("median_strictly_decreasing", decreasing, medians, "strictly decreasing");
  r.check("exceedance_not_increasing", exceed.back() <= exceed.front(), exceed, "last <= first");
}

void weinstein(const Context& ctx, Report& r) {
  const auto n_mats = ctx.get<int>("matrices");
  const auto L_max = ctx.get<int>("L_max");
  const auto l_band = ctx.get<int>("band_l");
  const auto l_values = ctx.get<std::vector<int>>("hausdorff_l_values");
  Rng rng = make_rng(ctx.seed());

  double idem = 0.0, comm = 0.0;
  for (int i = 0; i < n_mats; ++i) {
    const int L = 1 + i % L_max;
    const Eigen::Index dim = static_cast<Eigen::Index>(L + 1) * (L + 1);
    Eigen::MatrixXcd B(dim, dim);
    for (Eigen::Index c = 0; c < dim; ++c)
      for (Eigen::Index rr = 0; rr < dim; ++rr) B(rr, c) = complex_gaussian(rng);
    const Eigen::MatrixXcd A = sphere::quantum_average(B, L);
    const Eigen::MatrixXcd D = sphere::laplacian_blocks(L);
    idem = std::max(idem, (sphere::quantum_average(A, L) - A).cwiseAbs().maxCoeff());
    comm = std::max(comm, (A * D - D * A).cwiseAbs().maxCoeff());
  }

  const auto V = sphere::SphericalFunction::z_squared();
  const auto band = sphere::band_spectrum_vs_radon(V, l_band);
  const double delta = 3.0 / l_band;
  const double emin = band.eigenvalues.front(), emax = band.eigenvalues.back();
  const bool in_window = emin >= band.radon_min - delta && emax <= band.radon_max + delta;

  json haus = json::array();
  std::vector<double> hd;
  for (int l : l_values) {
    const auto b = sphere::band_spectrum_vs_radon(V, l);
    hd.push_back(b.hausdorff);
    haus.push_back({{"l", l}, {"hausdorff", b.hausdorff}, {"min_eigenvalue", b.eigenvalues.front()},
                    {"max_eigenvalue", b.eigenvalues.back()}});
  }
  bool monotone = true;
  for (std::size_t i = 1; i < hd.size(); ++i) monotone = monotone && hd[i] < hd[i - 1];

  r.outputs = {{"idempotence_error", idem},
               {"commutator_error", comm},
               {"band_l", l_band},
               {"band_min", emin},
               {"band_max", emax},
               {"radon_min", band.radon_min},
               {"radon_max", band.radon_max},
               {"hausdorff", haus}};
  r.check("quantum_average_idempotent", idem == 0.0, idem, 0.0);
  r.check("quantum_average_commutes", comm == 0.0, comm, 0.0);
  r.check("radon_range_z2", std::abs(band.radon_min) <= 1e-12 && std::abs(band.radon_max - 0.5) <= 1e-12,
          json::array({band.radon_min, band.radon_max}), json::array({0.0, 0.5}));
  r.check("band_within_radon_window", in_window, json::array({emin, emax}),
          json::array({band.radon_min - delta, band.radon_max + delta}));
  r.check("hausdorff_decreasing", monotone, hd, "strictly decreasing");
}

}  // namespace

void register_sphere(std::vector<Experiment>& out) {
  out.push_back({"sphere-concentration", "kernel identity, equator concentration and Haar-basis concentration", "AC6",
                 {{"kernel_l_max", 100}, {"moment_l_max", 200}, {"l_values", {20, 40, 80}}, {"trials", 200}},
                 concentration});
  out.push_back({"sphere-weinstein", "quantum averaging and band spectra against the Radon range", "AC7",
                 {{"matrices", 50}, {"L_max", 30}, {"band_l", 40}, {"hausdorff_l_values", {10, 20, 40, 80}}},
                 weinstein});
}

}  // namespace qlab::experiments
