#include "qlab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qlab/error.hpp"

namespace qlab::dynamics {

cplx birkhoff_average_torus(const torus::TorusSymbol& a, const std::vector<double>& x,
                            const std::vector<double>& xi, double T) {
  if (!(T > 0.0)) throw Error(ErrorKind::InvalidArgument, "T must be positive");
  if (!a.position_only()) throw Error(ErrorKind::InvalidArgument, "symbol must depend on x only");
  const auto n = static_cast<std::size_t>(a.dimension());
  if (x.size() != n || xi.size() != n) throw Error(ErrorKind::InvalidArgument, "dimension mismatch");
  cplx sum{};
  for (const auto& term : a.terms()) {
    double px = 0.0, pxi = 0.0;
    for (std::size_t d = 0; d < n; ++d) {
      px += static_cast<double>(term.frequency[d]) * x[d];
      pxi += static_cast<double>(term.frequency[d]) * xi[d];
    }
    // (e^{iy} - 1) / (iy), y = p.xi T; flow-invariant modes keep weight 1.
    const double y = pxi * T;
    cplx factor = 1.0;
    if (std::abs(pxi) > 1e-15) {
      if (std::abs(y) < 1e-4) factor = cplx(1.0 - y * y / 6.0, y / 2.0);
      else factor = (std::polar(1.0, y) - 1.0) / cplx(0.0, y);
    }
    sum += *term.constant * std::polar(1.0, px) * factor;
  }
  return sum;
}

Direction Direction::rational(std::vector<std::int64_t> v) {
  Direction d;
  d.dimension = static_cast<int>(v.size());
  d.integer = std::move(v);
  return d;
}

Direction Direction::flagged_irrational(int dimension) {
  Direction d;
  d.dimension = dimension;
  d.irrational = true;
  return d;
}

int direction_rank(const Direction& xi) {
  if (xi.dimension < 1) throw Error(ErrorKind::InvalidArgument, "dimension must be positive");
  if (xi.irrational) {
    if (xi.dimension == 2) return 0;
    throw Error(ErrorKind::Unsupported, "irrational directions in n >= 3 have no closed-form rank");
  }
  if (static_cast<int>(xi.integer.size()) != xi.dimension)
    throw Error(ErrorKind::InvalidArgument, "direction has wrong length");
  if (std::all_of(xi.integer.begin(), xi.integer.end(), [](auto v) { return v == 0; }))
    throw Error(ErrorKind::InvalidArgument, "zero direction");
  // The kernel of a non-zero integer linear form on Z^n is a lattice of rank n-1.
  return xi.dimension - 1;
}

double lyapunov_exponent(const CatMap& A) { return catmap::lyapunov(A); }

namespace {

double wrap(double v) {
  v -= std::floor(v);
  return v >= 1.0 ? 0.0 : v;
}

}  // namespace

Point step(const CatMap& A, const Point& z) {
  return {wrap(static_cast<double>(A.a) * z[0] + static_cast<double>(A.b) * z[1]),
          wrap(static_cast<double>(A.c) * z[0] + static_cast<double>(A.d) * z[1])};
}

double torus_metric(const Point& a, const Point& b) {
  return std::hypot(catmap::torus_distance(a[0], b[0]), catmap::torus_distance(a[1], b[1]));
}

EmpiricalMeasure::EmpiricalMeasure(std::vector<Point> points, std::vector<double> weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
  if (points_.size() != weights_.size() || points_.empty())
    throw Error(ErrorKind::InvalidArgument, "need one weight per point");
  double total = 0.0;
  for (double w : weights_) {
    if (w < 0.0) throw Error(ErrorKind::InvalidArgument, "negative weight");
    total += w;
  }
  // Rounding in a sum of n equal weights grows like n * 1e-16.
  if (std::abs(total - 1.0) > 1e-9) throw Error(ErrorKind::InvalidArgument, "weights must sum to 1");
  for (auto& p : points_) p = {wrap(p[0]), wrap(p[1])};
}

EmpiricalMeasure EmpiricalMeasure::uniform(std::size_t n, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> pts(n);
  for (auto& p : pts) {
    p[0] = u(rng);
    p[1] = u(rng);
  }
  return EmpiricalMeasure(std::move(pts), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

EmpiricalMeasure EmpiricalMeasure::dirac(const Point& z, std::size_t copies) {
  return EmpiricalMeasure(std::vector<Point>(copies, z), std::vector<double>(copies, 1.0 / static_cast<double>(copies)));
}

std::string EmpiricalMeasure::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "x1,x2,weight\n";
  for (std::size_t i = 0; i < points_.size(); ++i)
    out << points_[i][0] << ',' << points_[i][1] << ',' << weights_[i] << '\n';
  return out.str();
}

EntropyDiagnostics ks_entropy_diagnostics(const EmpiricalMeasure& mu, const CatMap& A, double epsilon, int T) {
  if (mu.size() < 1000) throw Error(ErrorKind::InsufficientSamples, "need at least 1000 sample points");
  if (!(epsilon > 0.0 && epsilon < 0.25)) throw Error(ErrorKind::InvalidArgument, "epsilon must lie in (0, 1/4)");
  if (T < 2) throw Error(ErrorKind::InvalidArgument, "T must be at least 2");
  const std::size_t n = mu.size();
  const auto& w = mu.weights();

  // orbits[t * n + i] = A^t x_i
  std::vector<Point> orbits(n * static_cast<std::size_t>(T + 1));
  for (std::size_t i = 0; i < n; ++i) {
    Point z = mu.points()[i];
    for (int t = 0; t <= T; ++t) {
      orbits[static_cast<std::size_t>(t) * n + i] = z;
      z = step(A, z);
    }
  }

  // Bucket the t = 0 positions on a grid of cell size >= epsilon.
  const int cells = std::max(1, static_cast<int>(std::floor(1.0 / epsilon)));
  auto cell_of = [&](double v) { return std::min(cells - 1, static_cast<int>(v * cells)); };
  std::vector<std::vector<std::size_t>> grid(static_cast<std::size_t>(cells * cells));
  for (std::size_t i = 0; i < n; ++i)
    grid[static_cast<std::size_t>(cell_of(orbits[i][0]) * cells + cell_of(orbits[i][1]))].push_back(i);

  EntropyDiagnostics out;
  double empty_weight_count = 0.0, self_only = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const int cx = cell_of(orbits[i][0]), cy = cell_of(orbits[i][1]);
    std::vector<int> neighbours;
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -1; dy <= 1; ++dy) {
        const int gx = ((cx + dx) % cells + cells) % cells, gy = ((cy + dy) % cells + cells) % cells;
        neighbours.push_back(gx * cells + gy);
      }
    std::sort(neighbours.begin(), neighbours.end());
    neighbours.erase(std::unique(neighbours.begin(), neighbours.end()), neighbours.end());

    double mass = 0.0;
    std::size_t members = 0;
    for (int c : neighbours)
      for (std::size_t j : grid[static_cast<std::size_t>(c)]) {
        bool inside = true;
        for (int t = 0; t <= T && inside; ++t) {
          const std::size_t off = static_cast<std::size_t>(t) * n;
          inside = torus_metric(orbits[off + i], orbits[off + j]) < epsilon;
        }
        if (inside) {
          mass += w[j];
          ++members;
        }
      }
    if (mass <= 0.0) {
      empty_weight_count += 1.0;
      continue;
    }
    if (members == 1) self_only += w[i];
    out.estimate += w[i] * (-std::log(std::min(mass, 1.0)) / T);
    out.mean_ball_mass += w[i] * mass;
  }
  if (empty_weight_count > 0.05 * static_cast<double>(n))
    throw Error(ErrorKind::InsufficientSamples, "too many empty Bowen balls");
  out.self_only_fraction = self_only;
  return out;
}

double ks_entropy_estimate(const EmpiricalMeasure& mu, const CatMap& A, double epsilon, int T) {
  return ks_entropy_diagnostics(mu, A, epsilon, T).estimate;
}

double ks_entropy_estimate(const std::vector<std::pair<double, EmpiricalMeasure>>& components,
                           const CatMap& A, double epsilon, int T) {
  double total_weight = 0.0, value = 0.0;
  for (const auto& [wgt, mu] : components) {
    if (wgt < 0.0) throw Error(ErrorKind::InvalidArgument, "negative component weight");
    total_weight += wgt;
    value += wgt * ks_entropy_estimate(mu, A, epsilon, T);
  }
  if (std::abs(total_weight - 1.0) > 1e-12) throw Error(ErrorKind::InvalidArgument, "component weights must sum to 1");
  return value;
}

// --- periodic orbits and pressure ------------------------------------------

namespace {

std::array<std::int64_t, 2> step_mod(const CatMap& A, std::array<std::int64_t, 2> z, std::int64_t q) {
  auto m = [q](std::int64_t v) { return ((v % q) + q) % q; };
  return {m(A.a * z[0] + A.b * z[1]), m(A.c * z[0] + A.d * z[1])};
}

}  // namespace

bool PeriodicOrbit::verify() const {
  if (points.empty() || denominator < 1) return false;
  for (std::size_t i = 0; i < points.size(); ++i)
    if (step_mod(map, points[i], denominator) != points[(i + 1) % points.size()]) return false;
  return true;
}

PeriodicOrbit periodic_orbit(const CatMap& A, std::array<std::int64_t, 2> numerators, std::int64_t denominator) {
  if (denominator < 1) throw Error(ErrorKind::InvalidArgument, "denominator must be positive");
  PeriodicOrbit orbit{A, denominator, {}};
  auto m = [denominator](std::int64_t v) { return ((v % denominator) + denominator) % denominator; };
  const std::array<std::int64_t, 2> start{m(numerators[0]), m(numerators[1])};
  auto z = start;
  const std::int64_t cap = denominator * denominator + 1;
  for (std::int64_t t = 0; t < cap; ++t) {
    orbit.points.push_back(z);
    z = step_mod(A, z, denominator);
    if (z == start) return orbit;
  }
  throw Error(ErrorKind::NonPeriodic, "orbit did not close");
}

double pressure_periodic_orbit(const PeriodicOrbit& gamma, double s) {
  if (!gamma.verify()) throw Error(ErrorKind::NonPeriodic, "orbit does not close under the map");
  if (!(s >= 0.0 && s <= 1.0)) throw Error(ErrorKind::InvalidArgument, "s must lie in [0, 1]");
  // Linear map: the unstable expansion along any orbit is the leading eigenvalue.
  const double chi_gamma = catmap::lyapunov(gamma.map);
  return -s * chi_gamma;
}

double bowen_root(const std::function<double(double)>& pressure) {
  const double p0 = pressure(0.0), p1 = pressure(1.0);
  if (!(p0 >= 0.0 && p1 <= 0.0)) throw Error(ErrorKind::NoSignChange, "need P(0) >= 0 >= P(1)");
  if (p0 == 0.0) return 0.0;
  if (p1 == 0.0) return 1.0;
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (pressure(mid) > 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace qlab::dynamics
