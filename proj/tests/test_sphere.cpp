#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qlab/error.hpp"
#include "qlab/sphere.hpp"

using namespace qlab::sphere;
constexpr double kPi = std::numbers::pi;

namespace {

Eigen::Vector3d random_unit(qlab::Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Vector3d v(n(rng), n(rng), n(rng));
  return v.normalized();
}

}  // namespace

TEST_CASE("harmonics: closed forms and orthonormality") {
  const double th = 0.7, ph = 1.3;
  CHECK(std::abs(ylm(0, 0, th, ph) - 1.0 / std::sqrt(4.0 * kPi)) <= 1e-15);
  CHECK(std::abs(ylm(1, 0, th, ph) - std::sqrt(3.0 / (4.0 * kPi)) * std::cos(th)) <= 1e-15);
  CHECK(std::abs(ylm(1, 1, th, ph) + std::sqrt(3.0 / (8.0 * kPi)) * std::sin(th) * std::polar(1.0, ph)) <= 1e-15);
  CHECK(std::abs(ylm(2, -1, th, ph) - std::sqrt(15.0 / (8.0 * kPi)) * std::sin(th) * std::cos(th) * std::polar(1.0, -ph)) <= 1e-14);

  const int L = 6, nodes = 2 * L + 2;
  std::vector<double> x, w;
  gauss_legendre(L + 2, x, w);
  const Eigen::Index dim = (L + 1) * (L + 1);
  Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t q = 0; q < x.size(); ++q)
    for (int k = 0; k < nodes; ++k) {
      const Eigen::VectorXcd y = ylm_all(L, std::acos(x[q]), 2.0 * kPi * k / nodes);
      gram += (w[q] * 2.0 * kPi / nodes) * y.conjugate() * y.transpose();
    }
  CHECK((gram - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("state evaluation") {
  const SphericalState s0(0, Eigen::VectorXcd::Ones(1));
  CHECK(std::abs(evaluate_state(s0, 1.1, 2.2) - 1.0 / std::sqrt(4.0 * kPi)) <= 1e-15);
  Eigen::VectorXcd e(3);
  e << 0.0, 1.0, 0.0;
  CHECK(std::abs(evaluate_state(SphericalState(1, e), kPi / 2.0, 0.4)) <= 1e-16);

  const auto hw = highest_weight_state(5);
  CHECK(std::abs(evaluate_state(hw, kPi / 2.0, 0.0) - highest_weight_constant(5)) <= 1e-14);
  std::vector<double> x, w;
  gauss_legendre(12, x, w);
  double norm = 0.0;
  for (std::size_t q = 0; q < x.size(); ++q) norm += w[q] * std::norm(evaluate_state(hw, std::acos(x[q]), 0.0));
  CHECK(std::abs(2.0 * kPi * norm - 1.0) <= 1e-13);
}

TEST_CASE("highest-weight constant") {
  CHECK(highest_weight_constant(0) == doctest::Approx(1.0 / std::sqrt(4.0 * kPi)).epsilon(1e-15));
  CHECK(highest_weight_constant(1) == doctest::Approx(std::sqrt(3.0 / (8.0 * kPi))).epsilon(1e-15));
  // c_l^2 = Gamma(l + 3/2) / (2 pi^{3/2} Gamma(l + 1)), so c_l l^{-1/4} -> pi^{-3/4} / sqrt(2).
  const double limit = std::pow(kPi, -0.75) / std::sqrt(2.0);
  double prev = 1e9;
  for (int l : {16, 64, 256}) {
    const double c = highest_weight_constant(l);
    const double closed = std::exp(0.5 * (std::lgamma(l + 1.5) - std::lgamma(l + 1.0)) - 0.75 * std::log(kPi)) / std::sqrt(2.0);
    CHECK(std::abs(c / closed - 1.0) <= 1e-12);
    const double ratio = c * std::pow(l, -0.25);
    CHECK(std::abs(ratio / limit - 1.0) <= 0.02);
    CHECK(ratio < prev);
    prev = ratio;
  }
}

TEST_CASE("equator concentration") {
  CHECK(equator_concentration(7, {1.0}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(equator_concentration(1, {0.0, 0.0, 1.0}) == doctest::Approx(0.2).epsilon(1e-14));
  double prev = 1.0;
  for (int l = 0; l <= 200; ++l) {
    const double v = equator_concentration(l, {0.0, 0.0, 1.0});
    CHECK(std::abs(v - 1.0 / (2.0 * l + 3.0)) <= 1e-10);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("reproducing kernel") {
  CHECK(reproducing_kernel_diag(0) == doctest::Approx(1.0 / (4.0 * kPi)).epsilon(1e-12));
  CHECK(reproducing_kernel_diag(1) == doctest::Approx(3.0 / (4.0 * kPi)).epsilon(1e-12));
  CHECK(std::abs(reproducing_kernel_diag(50, 9) - 101.0 / (4.0 * kPi)) <= 1e-8);
}

TEST_CASE("random orthonormal bases") {
  const auto b = random_onb(4, 1);
  REQUIRE(b.size() == 9);
  Eigen::MatrixXcd V(9, 9);
  for (int i = 0; i < 9; ++i) V.col(i) = b[static_cast<std::size_t>(i)].amplitudes;
  CHECK((V.adjoint() * V - Eigen::MatrixXcd::Identity(9, 9)).cwiseAbs().maxCoeff() <= 1e-10);

  const auto r1 = random_onb(1, 3), r2 = random_onb(1, 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(r1[i].amplitudes == r2[i].amplitudes);

  // |<e_0, fixed>|^2 is Beta(1, 2l): moments 1/3 and 1/6 for l = 1.
  const int seeds = 10000;
  double m1 = 0.0, m2 = 0.0;
  for (int s = 0; s < seeds; ++s) {
    const double x = std::norm(random_onb(1, static_cast<std::uint64_t>(s) + 100)[0].amplitudes(1));
    m1 += x / seeds;
    m2 += x * x / seeds;
  }
  CHECK(std::abs(m1 - 1.0 / 3.0) <= 3.0 * std::sqrt(1.0 / 18.0 / seeds));
  CHECK(std::abs(m2 - 1.0 / 6.0) <= 3.0 * std::sqrt((1.0 / 15.0 - 1.0 / 36.0) / seeds));
}

TEST_CASE("concentration experiment") {
  const auto zero = concentration_experiment(10, {0.0}, 20, 1);
  for (double d : zero.sup_deviation) CHECK(d == 0.0);
  const auto s = concentration_experiment(10, {-1.0 / 3.0, 0.0, 1.0}, 20, 1);
  CHECK(s.sup_deviation.size() == 20);
  CHECK(s.median > 0.0);
  CHECK(s.threshold == doctest::Approx(std::pow(10.0, -0.125)));
  CHECK(s.exceedance_fraction >= 0.0);
  CHECK(s.exceedance_fraction <= 1.0);
}

TEST_CASE("Radon transform") {
  qlab::Rng rng = qlab::make_rng(8);
  const auto one = SphericalFunction::constant(1.0);
  const auto z = SphericalFunction::coordinate_z();
  const auto z2 = SphericalFunction::z_squared();
  for (int i = 0; i < 100; ++i) {
    const GeodesicPoint g(random_unit(rng));
    CHECK(std::abs(radon_transform(one, g) - 1.0) <= 1e-13);
    CHECK(std::abs(radon_transform(z, g)) <= 1e-14);
    const double exact = (1.0 - g.u(2) * g.u(2)) / 2.0;
    CHECK(std::abs(radon_transform(z2, g) - exact) <= 1e-13);
    CHECK(std::abs(radon_closed_form(z2, g) - exact) <= 1e-13);
  }

  // Odd harmonics are annihilated; the transform is linear.
  const int L = 7;
  Eigen::VectorXcd odd = Eigen::VectorXcd::Zero((L + 1) * (L + 1)), any((L + 1) * (L + 1));
  for (int l = 0; l <= L; ++l)
    for (int m = -l; m <= l; ++m) {
      const cplx c = qlab::complex_gaussian(rng);
      any(flat_index(l, m)) = c;
      if (l % 2 == 1) odd(flat_index(l, m)) = c;
    }
  // Real-valued functions: c_{l,-m} = (-1)^m conj(c_{lm}).
  for (auto* v : {&odd, &any})
    for (int l = 0; l <= L; ++l) {
      (*v)(flat_index(l, 0)) = (*v)(flat_index(l, 0)).real();
      for (int m = 1; m <= l; ++m) (*v)(flat_index(l, -m)) = (m % 2 ? -1.0 : 1.0) * std::conj((*v)(flat_index(l, m)));
    }
  const SphericalFunction Vodd(L, odd), Vany(L, any), Vsum(L, odd + any);
  for (int i = 0; i < 20; ++i) {
    const GeodesicPoint g(random_unit(rng));
    CHECK(std::abs(radon_transform(Vodd, g)) <= 1e-12);
    CHECK(std::abs(radon_transform(Vsum, g) - radon_transform(Vany, g) - radon_transform(Vodd, g)) <= 1e-12);
    CHECK(std::abs(radon_transform(Vany, g) - radon_closed_form(Vany, g)) <= 1e-12);
  }
}

TEST_CASE("Radon flow") {
  const auto z2 = SphericalFunction::z_squared();
  const GeodesicPoint g0(Eigen::Vector3d(0.3, -0.5, 0.6));
  CHECK((radon_flow(z2, g0, 0.0).u - g0.u).norm() <= 1e-15);
  const double u3 = g0.u(2), rho = std::hypot(g0.u(0), g0.u(1)), phi0 = std::atan2(g0.u(1), g0.u(0));
  for (double t : {0.5, 1.0, 2.0}) {
    const auto g = radon_flow(z2, g0, t);
    const Eigen::Vector3d exact(rho * std::cos(phi0 - u3 * t), rho * std::sin(phi0 - u3 * t), u3);
    CHECK((g.u - exact).norm() <= 1e-6);
  }

  // A non-zonal potential: energy and the sphere constraint are conserved.
  const int L = 3;
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(16);
  c(flat_index(2, 0)) = 0.7;
  c(flat_index(2, 1)) = cplx(0.2, 0.1);
  c(flat_index(2, -1)) = -std::conj(c(flat_index(2, 1)));
  c(flat_index(3, 2)) = cplx(0.0, 0.3);
  c(flat_index(3, -2)) = std::conj(c(flat_index(3, 2)));
  const SphericalFunction V(L, c);
  const auto R = radon_coefficients(V);
  const double e0 = R.at(g0.u).real();
  for (double t : {0.5, 1.0, 3.0}) {
    const auto g = radon_flow(V, g0, t);
    CHECK(std::abs(g.u.norm() - 1.0) <= 1e-8);
    CHECK(std::abs(R.at(g.u).real() - e0) <= 1e-8);
  }
}

TEST_CASE("quantum average") {
  qlab::Rng rng = qlab::make_rng(2);
  const int L = 4;
  const Eigen::Index dim = (L + 1) * (L + 1);
  Eigen::MatrixXcd B(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) B(i, j) = qlab::complex_gaussian(rng);
  const Eigen::MatrixXcd A = quantum_average(B, L);
  CHECK(quantum_average(A, L) == A);
  const Eigen::MatrixXcd off = B - A;
  CHECK(quantum_average(off, L).cwiseAbs().maxCoeff() == 0.0);
  const Eigen::MatrixXcd D = laplacian_blocks(L);
  CHECK((A * D - D * A).cwiseAbs().maxCoeff() == 0.0);
  CHECK(D(flat_index(3, -2), flat_index(3, -2)) == cplx(12.0));
  try {
    quantum_average(Eigen::MatrixXcd::Zero(5, 5), 1);
    FAIL("expected shape-mismatch");
  } catch (const qlab::Error& e) {
    CHECK(e.kind() == qlab::ErrorKind::ShapeMismatch);
  }
}

TEST_CASE("band spectra against the Radon range") {
  const auto c = band_spectrum_vs_radon(SphericalFunction::constant(0.25), 12);
  for (double e : c.eigenvalues) CHECK(std::abs(e - 0.25) <= 1e-12);
  CHECK(std::abs(c.radon_min - 0.25) <= 1e-12);
  CHECK(std::abs(c.radon_max - 0.25) <= 1e-12);

  const auto z2 = SphericalFunction::z_squared();
  const auto b40 = band_spectrum_vs_radon(z2, 40);
  CHECK(b40.eigenvalues.size() == 81);
  CHECK(std::abs(b40.radon_min) <= 1e-12);
  CHECK(std::abs(b40.radon_max - 0.5) <= 1e-12);
  CHECK(b40.eigenvalues.front() >= -3.0 / 40.0);
  CHECK(b40.eigenvalues.back() <= 0.5 + 3.0 / 40.0);

  // z^2 on E_l is diagonal with <lm|z^2|lm> = (2 l^2 + 2 l - 2 m^2 - 1) / ((2l - 1)(2l + 3)).
  const int l = 10;
  const Eigen::MatrixXcd C = band_compression(z2, l);
  for (int m = -l; m <= l; ++m)
    CHECK(std::abs(C(m + l, m + l).real() - (2.0 * l * l + 2.0 * l - 2.0 * m * m - 1.0) / ((2.0 * l - 1.0) * (2.0 * l + 3.0))) <= 1e-12);
  CHECK((C - Eigen::MatrixXcd(C.diagonal().asDiagonal())).cwiseAbs().maxCoeff() <= 1e-12);

  double prev = 1e9;
  for (int ll : {10, 20, 40}) {
    const double h = band_spectrum_vs_radon(z2, ll).hausdorff;
    CHECK(h < prev);
    prev = h;
  }
  CHECK(hausdorff_to_interval({0.0, 0.5}, 0.0, 0.5) == doctest::Approx(0.25));
  CHECK(hausdorff_to_interval({0.0, 0.25, 0.5}, 0.0, 0.5) == doctest::Approx(0.125));
  CHECK(hausdorff_to_interval({0.1, 0.2}, 0.0, 0.5) == doctest::Approx(0.3));
}
