#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qlab/lattice.hpp"
#include "qlab/spectra.hpp"

using namespace qlab::spectra;
constexpr double kPi = std::numbers::pi;

TEST_CASE("counting function examples") {
  CHECK(counting_function(SpectrumModel::torus(2), 10.0) == 317);
  CHECK(counting_function(SpectrumModel::sphere(), 10.0) == 100);
  CHECK(counting_function(SpectrumModel::torus(2), 0.0) == 1);
  CHECK(counting_function(SpectrumModel::torus(3), 0.0) == 1);
  CHECK(counting_function(SpectrumModel::sphere(), 0.0) == 1);
  CHECK(counting_function(SpectrumModel::torus(3), 10.0) == qlab::lattice::count_in_ball(10.0, 3));
}

TEST_CASE("leading term examples") {
  CHECK(weyl_leading_term(SpectrumModel::torus(2), 10.0) == doctest::Approx(100.0 * kPi).epsilon(1e-14));
  CHECK(weyl_leading_term(SpectrumModel::sphere(), 10.0) == doctest::Approx(100.0).epsilon(1e-14));
  CHECK(weyl_leading_term(SpectrumModel::torus(3), 10.0) == doctest::Approx(4.0 / 3.0 * kPi * 1000.0).epsilon(1e-14));
  for (auto model : {SpectrumModel::torus(2), SpectrumModel::sphere()})
    CHECK(std::abs(counting_function(model, 200.0) / weyl_leading_term(model, 200.0) - 1.0) <= 0.05);
}

TEST_CASE("sphere count at eigenvalue boundaries") {
  for (int l = 0; l <= 300; ++l) {
    const double lam = std::sqrt(static_cast<double>(l) * (l + 1));
    CHECK(counting_function(SpectrumModel::sphere(), lam) == static_cast<std::int64_t>(l + 1) * (l + 1));
    if (l > 0) CHECK(counting_function(SpectrumModel::sphere(), std::nextafter(lam, 0.0) * (1 - 1e-12)) == static_cast<std::int64_t>(l) * l);
  }
}

TEST_CASE("non-decreasing and right-continuous") {
  for (auto model : {SpectrumModel::torus(2), SpectrumModel::sphere()}) {
    std::int64_t prev = 0;
    for (double lam = 0.0; lam <= 60.0; lam += 0.01) {
      const auto c = counting_function(model, lam);
      CHECK(c >= prev);
      prev = c;
    }
  }
  // Jump at the shell |k|^2 = 25 happens at lambda = 5 itself.
  const auto t2 = SpectrumModel::torus(2);
  CHECK(counting_function(t2, 5.0) - counting_function(t2, 5.0 - 1e-9) == 12);
}

TEST_CASE("remainder regression up to lambda 500") {
  // Frozen after a sweep: |N - leading| <= C lambda^{n-1}.
  const double C_torus = 2.0, C_sphere = 3.0;
  double worst_t = 0.0, worst_s = 0.0;
  for (double lam = 1.0; lam <= 500.0; lam += 0.5) {
    const auto t2 = SpectrumModel::torus(2), s2 = SpectrumModel::sphere();
    worst_t = std::max(worst_t, std::abs(counting_function(t2, lam) - weyl_leading_term(t2, lam)) / lam);
    worst_s = std::max(worst_s, std::abs(counting_function(s2, lam) - weyl_leading_term(s2, lam)) / lam);
  }
  CHECK(worst_t <= C_torus);
  CHECK(worst_s <= C_sphere);
}

TEST_CASE("table rows") {
  const auto rows = weyl_table(SpectrumModel::torus(2), 10.0, 1.0);
  REQUIRE(rows.size() == 10);
  CHECK(rows.back().lambda == 10.0);
  CHECK(rows.back().count == 317);
  CHECK(rows.back().remainder == doctest::Approx(317.0 - 100.0 * kPi));
  CHECK(SpectrumModel::torus(2).tag() == "torus-2");
  CHECK(SpectrumModel::sphere().tag() == "sphere-2");
}
