#pragma once

// Exact integer lattice arithmetic: shells {k in Z^n : |k|^2 = m}, ball
// counts, pair degeneracies and lattice points on circular arcs.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace qlab::lattice {

using IntVec = std::vector<std::int64_t>;

std::int64_t norm_squared(std::span<const std::int64_t> v);
std::int64_t isqrt(std::int64_t m);

// If r^2 is an integer up to rounding, return it.
std::optional<std::int64_t> exact_square(double r);

class LatticeShell {
 public:
  LatticeShell(int dimension, std::int64_t radius_squared, std::vector<IntVec> vectors);

  int dimension() const noexcept { return dimension_; }
  std::int64_t radius_squared() const noexcept { return radius_squared_; }
  const std::vector<IntVec>& vectors() const noexcept { return vectors_; }
  std::size_t size() const noexcept { return vectors_.size(); }
  bool empty() const noexcept { return vectors_.empty(); }

  // Position of k in the lexicographically sorted vector list.
  std::optional<std::size_t> index_of(std::span<const std::int64_t> k) const;
  bool contains(std::span<const std::int64_t> k) const { return index_of(k).has_value(); }

 private:
  int dimension_;
  std::int64_t radius_squared_;
  std::vector<IntVec> vectors_;
};

/// All k in Z^n with |k|^2 = m, sorted lexicographically.
LatticeShell enumerate_shell(std::int64_t m, int n);

/// Exact number of k in Z^n with |k|^2 <= radius_squared.
std::int64_t count_in_ball_squared(std::int64_t radius_squared, int n);

/// Exact number of k in Z^n with |k| <= R. R^2 within rounding of an integer
/// is treated as that integer so boundary points are counted.
std::int64_t count_in_ball(double R, int n);

/// |{k in shell : k - p in shell}|.
std::size_t pair_degeneracy(const LatticeShell& shell, std::span<const std::int64_t> p);

/// Integer points on the circle of the given radius lying in the closed arc
/// of the given length centred at center_angle. Zero when radius^2 is not an
/// integer.
std::size_t arc_lattice_count(double radius, double center_angle, double arc_length);

/// Same count against a precomputed 2D shell (the circle of radius sqrt(m)).
std::size_t arc_lattice_count(const LatticeShell& circle, double center_angle, double arc_length);

}  // namespace qlab::lattice
