#include "qlab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qlab/error.hpp"

namespace qlab::lattice {

std::int64_t norm_squared(std::span<const std::int64_t> v) {
  std::int64_t s = 0;
  for (auto x : v) s += x * x;
  return s;
}

std::int64_t isqrt(std::int64_t m) {
  if (m < 0) throw Error(ErrorKind::InvalidArgument, "isqrt of negative value");
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(m)));
  while (r * r > m) --r;
  while ((r + 1) * (r + 1) <= m) ++r;
  return r;
}

std::optional<std::int64_t> exact_square(double r) {
  const double r2 = r * r;
  const auto m = static_cast<std::int64_t>(std::llround(r2));
  // A squared square root lands a few ulps off the integer.
  if (std::abs(r2 - static_cast<double>(m)) <= 1e-13 * std::max(1.0, r2)) return m;
  return std::nullopt;
}

LatticeShell::LatticeShell(int dimension, std::int64_t radius_squared, std::vector<IntVec> vectors)
    : dimension_(dimension), radius_squared_(radius_squared), vectors_(std::move(vectors)) {
  std::sort(vectors_.begin(), vectors_.end());
}

std::optional<std::size_t> LatticeShell::index_of(std::span<const std::int64_t> k) const {
  if (static_cast<int>(k.size()) != dimension_) return std::nullopt;
  auto it = std::lower_bound(vectors_.begin(), vectors_.end(), k,
                             [](const IntVec& a, std::span<const std::int64_t> b) {
                               return std::lexicographical_compare(a.begin(), a.end(), b.begin(),
                                                                   b.end());
                             });
  if (it != vectors_.end() && std::equal(it->begin(), it->end(), k.begin(), k.end()))
    return static_cast<std::size_t>(it - vectors_.begin());
  return std::nullopt;
}

namespace {

// Nested loops over the bounding cube; the last coordinate is solved exactly.
void enumerate_rec(std::int64_t remaining, int depth, IntVec& current, std::vector<IntVec>& out) {
  const int n = static_cast<int>(current.size());
  if (depth == n - 1) {
    const std::int64_t r = isqrt(remaining);
    if (r * r != remaining) return;
    current[depth] = -r;
    out.push_back(current);
    if (r != 0) {
      current[depth] = r;
      out.push_back(current);
    }
    return;
  }
  const std::int64_t bound = isqrt(remaining);
  for (std::int64_t x = -bound; x <= bound; ++x) {
    current[depth] = x;
    enumerate_rec(remaining - x * x, depth + 1, current, out);
  }
}

std::int64_t count_rec(std::int64_t remaining, int dims) {
  if (dims == 1) return 2 * isqrt(remaining) + 1;
  const std::int64_t bound = isqrt(remaining);
  std::int64_t total = 0;
  for (std::int64_t x = -bound; x <= bound; ++x) total += count_rec(remaining - x * x, dims - 1);
  return total;
}

}  // namespace

LatticeShell enumerate_shell(std::int64_t m, int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "dimension must be positive");
  if (m < 0) throw Error(ErrorKind::InvalidArgument, "radius squared must be non-negative");
  std::vector<IntVec> out;
  IntVec current(static_cast<std::size_t>(n), 0);
  enumerate_rec(m, 0, current, out);
  return LatticeShell(n, m, std::move(out));
}

std::int64_t count_in_ball_squared(std::int64_t radius_squared, int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "dimension must be positive");
  if (radius_squared < 0) return 0;
  return count_rec(radius_squared, n);
}

std::int64_t count_in_ball(double R, int n) {
  if (!(R >= 0.0)) throw Error(ErrorKind::InvalidArgument, "radius must be non-negative");
  if (auto m = exact_square(R)) return count_in_ball_squared(*m, n);
  return count_in_ball_squared(static_cast<std::int64_t>(std::floor(R * R)), n);
}

std::size_t pair_degeneracy(const LatticeShell& shell, std::span<const std::int64_t> p) {
  if (static_cast<int>(p.size()) != shell.dimension())
    throw Error(ErrorKind::InvalidArgument, "shift has wrong dimension");
  std::size_t count = 0;
  IntVec shifted(p.size());
  for (const auto& k : shell.vectors()) {
    for (std::size_t i = 0; i < p.size(); ++i) shifted[i] = k[i] - p[i];
    if (shell.contains(shifted)) ++count;
  }
  return count;
}

std::size_t arc_lattice_count(const LatticeShell& circle, double center_angle, double arc_length) {
  if (circle.dimension() != 2)
    throw Error(ErrorKind::UnsupportedDimension, "arc counting needs a 2D shell");
  if (!(arc_length > 0.0)) throw Error(ErrorKind::InvalidArc, "arc length must be positive");
  if (circle.empty()) return 0;
  const double radius = std::sqrt(static_cast<double>(circle.radius_squared()));
  const double half_angle = arc_length / (2.0 * radius);
  if (half_angle >= std::numbers::pi) return circle.size();
  // k lies in the closed arc iff its angle to the centre direction is at most
  // half_angle, i.e. k.c >= |k| cos(half_angle).
  const double cx = std::cos(center_angle);
  const double cy = std::sin(center_angle);
  const double threshold = radius * std::cos(half_angle);
  const double slack = 1e-12 * radius;
  std::size_t count = 0;
  for (const auto& k : circle.vectors()) {
    const double dot = static_cast<double>(k[0]) * cx + static_cast<double>(k[1]) * cy;
    if (dot >= threshold - slack) ++count;
  }
  return count;
}

std::size_t arc_lattice_count(double radius, double center_angle, double arc_length) {
  if (!(radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "radius must be positive");
  if (!(arc_length > 0.0)) throw Error(ErrorKind::InvalidArc, "arc length must be positive");
  const auto m = exact_square(radius);
  if (!m) return 0;
  return arc_lattice_count(enumerate_shell(*m, 2), center_angle, arc_length);
}

}  // namespace qlab::lattice
