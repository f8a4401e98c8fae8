#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "qlab/dynamics.hpp"
#include "qlab/error.hpp"

using namespace qlab::dynamics;
using qlab::torus::TorusSymbol;
constexpr double kPi = std::numbers::pi;

namespace {

qlab::ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const qlab::Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return qlab::ErrorKind::Unsupported;
}

CatMap power(const CatMap& A, int k) {
  std::int64_t a = 1, b = 0, c = 0, d = 1;
  for (int i = 0; i < k; ++i) {
    const std::int64_t na = a * A.a + b * A.c, nb = a * A.b + b * A.d, nc = c * A.a + d * A.c, nd = c * A.b + d * A.d;
    a = na, b = nb, c = nc, d = nd;
  }
  return {a, b, c, d};
}

}  // namespace

TEST_CASE("Birkhoff averages on the torus") {
  const std::vector<double> x{0.4, 1.9};
  CHECK(std::abs(birkhoff_average_torus(TorusSymbol::one(2), x, {0.6, 0.8}, 3.0) - 1.0) <= 1e-15);

  const auto cos2 = TorusSymbol::trigonometric(2, {{{0, 1}, 0.5}, {{0, -1}, 0.5}});
  for (double T : {0.1, 1.0, 17.0, 1e4})
    CHECK(std::abs(birkhoff_average_torus(cos2, x, {1.0, 0.0}, T) - std::cos(x[1])) <= 1e-14);

  const auto cos11 = TorusSymbol::trigonometric(2, {{{1, 1}, 0.5}, {{-1, -1}, 0.5}});
  const double n = std::sqrt(3.0);
  const std::vector<double> xi{1.0 / n, std::sqrt(2.0) / n};
  const double pxi = xi[0] + xi[1];
  for (double T : {1e2, 1e3, 1e4}) CHECK(std::abs(birkhoff_average_torus(cos11, x, xi, T)) <= 2.0 / (pxi * T));

  // Mode-explicit O(1/T) rate against the closed form.
  const double T = 50.0;
  const cplx exact = std::cos(x[0] + x[1] + pxi * T / 2.0) * std::sin(pxi * T / 2.0) / (pxi * T / 2.0);
  CHECK(std::abs(birkhoff_average_torus(cos11, x, xi, T) - exact) <= 1e-13);
  // Small-T limit is the point value.
  CHECK(std::abs(birkhoff_average_torus(cos11, x, xi, 1e-9) - std::cos(x[0] + x[1])) <= 1e-9);
}

TEST_CASE("direction rank") {
  CHECK(direction_rank(Direction::rational({1, 0})) == 1);
  CHECK(direction_rank(Direction::rational({1, 1, 1})) == 2);
  CHECK(direction_rank(Direction::flagged_irrational(2)) == 0);
  CHECK(kind_of([] { direction_rank(Direction::flagged_irrational(3)); }) == qlab::ErrorKind::Unsupported);
}

TEST_CASE("Lyapunov exponents") {
  const CatMap A = CatMap::arnold();
  const double chi = lyapunov_exponent(A);
  CHECK(chi == doctest::Approx(std::log((3.0 + std::sqrt(5.0)) / 2.0)).epsilon(1e-15));
  CHECK(std::abs(chi - 2.0 * std::log(std::numbers::phi)) <= 1e-15);
  for (int k = 1; k <= 5; ++k) CHECK(std::abs(lyapunov_exponent(power(A, k)) - k * chi) <= 1e-12 * k);

  // Finite time: (1/t) ln|A^t v| = chi + ln|cos angle(v, E^u)| / t + O(lambda^{-2t}),
  // and the one-step increment at t = 40 is chi to far below 1e-3.
  qlab::Rng rng = qlab::make_rng(1);
  std::normal_distribution<double> g(0.0, 1.0);
  const double eu0 = 1.0, eu1 = std::numbers::phi - 1.0, eun = std::hypot(eu0, eu1);
  for (int trial = 0; trial < 10; ++trial) {
    double v0 = g(rng), v1 = g(rng);
    const double cos_u = std::abs(v0 * eu0 + v1 * eu1) / (eun * std::hypot(v0, v1));
    double lognorm = 0.0, last = 0.0;
    for (int t = 0; t < 40; ++t) {
      const double a = 2 * v0 + v1, b = v0 + v1, s = std::hypot(a, b);
      last = std::log(s / std::hypot(v0, v1));
      lognorm += last;
      v0 = a / s, v1 = b / s;
    }
    CHECK(std::abs(last - chi) <= 1e-3);
    CHECK(std::abs(lognorm / 40.0 - (chi + std::log(cos_u) / 40.0)) <= 1e-3);
  }
  CHECK(kind_of([] { lyapunov_exponent(CatMap(1, 3, 0, 1)); }) == qlab::ErrorKind::NonHyperbolic);
}

TEST_CASE("map and metric") {
  const CatMap A = CatMap::arnold();
  const Point z = step(A, {0.3, 0.6});
  CHECK(z[0] == doctest::Approx(0.2));
  CHECK(z[1] == doctest::Approx(0.9));
  CHECK(torus_metric({0.95, 0.0}, {0.05, 0.0}) == doctest::Approx(0.1));
  CHECK(torus_metric({0.0, 0.0}, {0.5, 0.5}) == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("empirical measures") {
  qlab::Rng rng = qlab::make_rng(2);
  const auto u = EmpiricalMeasure::uniform(2000, rng);
  CHECK(u.size() == 2000);
  for (const auto& p : u.points()) {
    CHECK(p[0] >= 0.0);
    CHECK(p[0] < 1.0);
  }
  const auto d = EmpiricalMeasure::dirac({1.25, -0.5}, 3);
  CHECK(d.points()[0][0] == doctest::Approx(0.25));
  CHECK(d.points()[0][1] == doctest::Approx(0.5));
  std::istringstream csv(d.to_csv());
  std::string header;
  std::getline(csv, header);
  CHECK(header == "x1,x2,weight");
  int rows = 0;
  for (std::string line; std::getline(csv, line);) ++rows;
  CHECK(rows == 3);
  CHECK_THROWS_AS(EmpiricalMeasure({{0.1, 0.1}}, {0.5}), qlab::Error);
  CHECK_THROWS_AS(EmpiricalMeasure({{0.1, 0.1}, {0.2, 0.2}}, {1.5, -0.5}), qlab::Error);
}

TEST_CASE("entropy estimates") {
  const CatMap A = CatMap::arnold();
  const auto fixed = EmpiricalMeasure::dirac({0.0, 0.0}, 1000);
  for (double eps : {0.01, 0.05, 0.2})
    for (int T : {2, 5, 12}) CHECK(ks_entropy_estimate(fixed, A, eps, T) == 0.0);

  // Larger balls hold more mass.
  qlab::Rng rng = qlab::make_rng(3);
  const auto u = EmpiricalMeasure::uniform(5000, rng);
  double prev = 1e9;
  for (double eps : {0.02, 0.05, 0.1, 0.2}) {
    const double h = ks_entropy_estimate(u, A, eps, 6);
    CHECK(h <= prev);
    CHECK(h >= 0.0);
    prev = h;
  }
  // Never above the sample-size cap ln(n) / T.
  const auto diag = ks_entropy_diagnostics(u, A, 0.02, 6);
  CHECK(diag.estimate <= std::log(5000.0) / 6.0 + 1e-12);
  CHECK(diag.self_only_fraction >= 0.0);
  CHECK(diag.self_only_fraction <= 1.0);

  // Affinity recipe over components.
  const double mix = ks_entropy_estimate({{0.25, fixed}, {0.75, u}}, A, 0.1, 6);
  CHECK(mix == doctest::Approx(0.75 * ks_entropy_estimate(u, A, 0.1, 6)).epsilon(1e-14));

  CHECK(kind_of([&] { ks_entropy_estimate(EmpiricalMeasure::dirac({0.0, 0.0}, 999), A, 0.05, 4); }) ==
        qlab::ErrorKind::InsufficientSamples);
  CHECK(kind_of([&] { ks_entropy_estimate(u, A, 0.25, 4); }) == qlab::ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { ks_entropy_estimate(u, A, 0.05, 1); }) == qlab::ErrorKind::InvalidArgument);
}

TEST_CASE("periodic orbits and pressure") {
  const CatMap A = CatMap::arnold();
  const double chi = lyapunov_exponent(A);
  const auto fixed = periodic_orbit(A, {0, 0}, 1);
  CHECK(fixed.period() == 1);
  CHECK(fixed.verify());
  CHECK(pressure_periodic_orbit(fixed, 0.0) == 0.0);
  CHECK(std::abs(pressure_periodic_orbit(fixed, 0.5) + chi / 2.0) <= 1e-10);

  // (1,2) -> (4,3) -> (1,2) mod 5.
  const auto orbit5 = periodic_orbit(A, {1, 2}, 5);
  CHECK(orbit5.verify());
  CHECK(orbit5.period() == 2);
  double prev = 1.0;
  for (double s = 0.0; s <= 1.0; s += 0.125) {
    const double p = pressure_periodic_orbit(orbit5, s);
    CHECK(std::abs(p + s * chi) <= 1e-12);
    CHECK(p < prev);
    prev = p;
  }

  PeriodicOrbit broken = orbit5;
  broken.points.pop_back();
  CHECK(kind_of([&] { pressure_periodic_orbit(broken, 0.5); }) == qlab::ErrorKind::NonPeriodic);
  CHECK(kind_of([&] { pressure_periodic_orbit(fixed, 1.5); }) == qlab::ErrorKind::InvalidArgument);
}

TEST_CASE("Bowen equation") {
  const CatMap A = CatMap::arnold();
  const double chi = lyapunov_exponent(A);
  const auto fixed = periodic_orbit(A, {0, 0}, 1);
  CHECK(bowen_root([&](double s) { return pressure_periodic_orbit(fixed, s); }) == 0.0);
  CHECK(std::abs(bowen_root([&](double s) { return chi - s * chi; }) - 1.0) <= 1e-9);
  CHECK(std::abs(bowen_root([](double s) { return 0.5 - s; }) - 0.5) <= 1e-9);
  CHECK(std::abs(bowen_root([](double s) { return std::exp(-4.0 * s) - 0.3; }) - std::log(1.0 / 0.3) / 4.0) <= 1e-9);
  CHECK(kind_of([] { bowen_root([](double s) { return 1.0 + s; }); }) == qlab::ErrorKind::NoSignChange);
}
