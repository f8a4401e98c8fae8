#pragma once

// Classical side: geodesic flow on the flat torus, cat-map orbits, Bowen-ball
// entropy estimates and pressure on periodic orbits.

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qlab/catmap.hpp"
#include "qlab/random.hpp"
#include "qlab/torus.hpp"

namespace qlab::dynamics {

using catmap::CatMap;
using cplx = std::complex<double>;

// (1/T) int_0^T a(x + t xi) dt for a position-only symbol, mode by mode.
cplx birkhoff_average_torus(const torus::TorusSymbol& a, const std::vector<double>& x,
                            const std::vector<double>& xi, double T);

struct Direction {
  std::vector<std::int64_t> integer;  // used when rational
  int dimension = 2;
  bool irrational = false;

  static Direction rational(std::vector<std::int64_t> v);
  static Direction flagged_irrational(int dimension);
};

// Rank of {k in Z^n : k . xi = 0}.
int direction_rank(const Direction& xi);

double lyapunov_exponent(const CatMap& A);

using Point = std::array<double, 2>;

// Cat-map action on R^2 / Z^2.
Point step(const CatMap& A, const Point& z);
double torus_metric(const Point& a, const Point& b);

class EmpiricalMeasure {
 public:
  EmpiricalMeasure(std::vector<Point> points, std::vector<double> weights);

  static EmpiricalMeasure uniform(std::size_t n, Rng& rng);
  static EmpiricalMeasure dirac(const Point& z, std::size_t copies = 1);

  const std::vector<Point>& points() const noexcept { return points_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return points_.size(); }

  std::string to_csv() const;

 private:
  std::vector<Point> points_;
  std::vector<double> weights_;
};

struct EntropyDiagnostics {
  double estimate = 0.0;
  // Fraction of base points whose Bowen ball holds no other sample: there the
  // estimate is capped at ln(1/w)/T by the sample size, not by the dynamics.
  double self_only_fraction = 0.0;
  double mean_ball_mass = 0.0;
};

// Weighted average of -(1/T) ln mu(B(x; eps, T)) with the Bowen metric
// max_{0<=t<=T} d(A^t x, A^t y).
double ks_entropy_estimate(const EmpiricalMeasure& mu, const CatMap& A, double epsilon, int T);
EntropyDiagnostics ks_entropy_diagnostics(const EmpiricalMeasure& mu, const CatMap& A, double epsilon, int T);

// Ergodic-decomposition recipe: sum_i w_i ks_entropy_estimate(mu_i).
double ks_entropy_estimate(const std::vector<std::pair<double, EmpiricalMeasure>>& components,
                           const CatMap& A, double epsilon, int T);

// Orbit of a rational point (numerators / denominator) under A, exact.
struct PeriodicOrbit {
  CatMap map;
  std::int64_t denominator;
  std::vector<std::array<std::int64_t, 2>> points;

  long period() const noexcept { return static_cast<long>(points.size()); }
  bool verify() const;
};

PeriodicOrbit periodic_orbit(const CatMap& A, std::array<std::int64_t, 2> numerators, std::int64_t denominator);

// s * log|det dA^{-T}|_{E^u}| / T = -s chi for a linear map.
double pressure_periodic_orbit(const PeriodicOrbit& gamma, double s);

// Root of a monotone pressure function on [0, 1] by bisection to 1e-9.
double bowen_root(const std::function<double(double)>& pressure);

}  // namespace qlab::dynamics
