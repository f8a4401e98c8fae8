#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qlab/error.hpp"
#include "qlab/lattice.hpp"

using namespace qlab::lattice;
constexpr double kPi = std::numbers::pi;

namespace {

std::int64_t brute_shell_size(std::int64_t m, int n) {
  const std::int64_t r = isqrt(m) + 1;
  std::int64_t count = 0;
  std::vector<std::int64_t> k(static_cast<std::size_t>(n), -r);
  while (true) {
    if (norm_squared(k) == m) ++count;
    std::size_t i = 0;
    while (i < k.size() && k[i] == r) k[i++] = -r;
    if (i == k.size()) break;
    ++k[i];
  }
  return count;
}

}  // namespace

TEST_CASE("shell examples") {
  const auto origin = enumerate_shell(0, 2);
  REQUIRE(origin.size() == 1);
  CHECK(origin.vectors()[0] == IntVec{0, 0});
  CHECK(enumerate_shell(3, 2).empty());

  const auto s = enumerate_shell(25, 2);
  CHECK(s.size() == 12);
  for (IntVec v : {IntVec{5, 0}, IntVec{-5, 0}, IntVec{0, 5}, IntVec{0, -5}, IntVec{3, 4}, IntVec{-3, 4},
                   IntVec{3, -4}, IntVec{-3, -4}, IntVec{4, 3}, IntVec{-4, 3}, IntVec{4, -3}, IntVec{-4, -3}})
    CHECK(s.contains(v));
  CHECK(std::is_sorted(s.vectors().begin(), s.vectors().end()));
}

TEST_CASE("shell size matches brute force") {
  for (int n = 1; n <= 3; ++n)
    for (std::int64_t m = 0; m <= 60; ++m) CHECK(static_cast<std::int64_t>(enumerate_shell(m, n).size()) == brute_shell_size(m, n));
}

TEST_CASE("ball counts") {
  CHECK(count_in_ball(0.0, 2) == 1);
  CHECK(count_in_ball(10.0, 2) == 317);
  const auto c3 = count_in_ball(10.0, 3);
  CHECK(c3 == 4169);
  const double vol = 4.0 / 3.0 * kPi * 1000.0;
  CHECK(c3 > 0.8 * vol);
  CHECK(c3 < 1.2 * vol);
  // Boundary points on |k| = 5 are counted even when R^2 rounds.
  CHECK(count_in_ball(std::sqrt(25.0), 2) - count_in_ball(std::nextafter(5.0, 0.0) - 1e-9, 2) == 12);
}

TEST_CASE("ball count remainder regression") {
  // |N(R) - pi R^2| <= C R for R <= 200, C frozen from a full sweep.
  const double C = 2.5;
  double worst = 0.0;
  for (double R = 1.0; R <= 200.0; R += 0.25)
    worst = std::max(worst, std::abs(static_cast<double>(count_in_ball(R, 2)) - kPi * R * R) / R);
  CHECK(worst <= C);
}

TEST_CASE("pair degeneracy") {
  const auto s = enumerate_shell(25, 2);
  CHECK(pair_degeneracy(s, IntVec{0, 0}) == s.size());
  CHECK(pair_degeneracy(s, IntVec{6, 8}) == 1);
  CHECK(pair_degeneracy(s, IntVec{1, 0}) == 0);
  CHECK_THROWS_AS(pair_degeneracy(s, IntVec{1, 0, 0}), qlab::Error);
}

TEST_CASE("Jarnik: pair degeneracy at most two on 2D shells") {
  std::size_t worst = 0;
  for (std::int64_t m = 1; m <= 2000; ++m) {
    const auto s = enumerate_shell(m, 2);
    for (const auto& k : s.vectors())
      for (const auto& l : s.vectors()) {
        if (k == l) continue;
        worst = std::max(worst, pair_degeneracy(s, IntVec{k[0] - l[0], k[1] - l[1]}));
      }
  }
  CHECK(worst <= 2);
}

TEST_CASE("arc counts") {
  CHECK(arc_lattice_count(5.0, 0.3, 2.0 * kPi * 5.0) == 12);
  const double L = std::cbrt(10.0);
  std::size_t worst = 0;
  for (int i = 0; i < 10000; ++i) worst = std::max(worst, arc_lattice_count(5.0, 2.0 * kPi * i / 10000.0, L));
  CHECK(worst <= 2);
  CHECK(arc_lattice_count(std::sqrt(3.0), 0.0, 1.0) == 0);
  CHECK(arc_lattice_count(std::sqrt(2.0), 0.0, 2.0 * kPi * std::sqrt(2.0)) == 4);
  // Endpoints are included: the quarter arc from (5,0) to (0,5) holds (5,0), (4,3), (3,4), (0,5).
  CHECK(arc_lattice_count(5.0, kPi / 4.0, kPi / 2.0 * 5.0) == 4);
}

TEST_CASE("arc count on sampled large radii") {
  std::size_t worst = 0;
  for (std::int64_t m : {1105LL, 5525LL, 27625LL, 160225LL, 801125LL, 1000000LL}) {
    const auto s = enumerate_shell(m, 2);
    const double r = std::sqrt(static_cast<double>(m));
    for (int i = 0; i < 2000; ++i) worst = std::max(worst, arc_lattice_count(s, 2.0 * kPi * i / 2000.0, std::cbrt(2.0 * r)));
  }
  CHECK(worst <= 2);
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(enumerate_shell(-1, 2), qlab::Error);
  CHECK_THROWS_AS(enumerate_shell(4, 0), qlab::Error);
  try {
    arc_lattice_count(5.0, 0.0, 0.0);
    FAIL("expected invalid-arc");
  } catch (const qlab::Error& e) {
    CHECK(e.kind() == qlab::ErrorKind::InvalidArc);
  }
  CHECK(exact_square(std::sqrt(2.0)) == 2);
  CHECK_FALSE(exact_square(1.5).has_value());
}
