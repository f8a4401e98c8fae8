#include "qlab/sphere.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <boost/numeric/odeint.hpp>

#include "qlab/error.hpp"

namespace qlab::sphere {

namespace {

constexpr double kPi = std::numbers::pi;

int degree_of(Eigen::Index flat) {
  int l = static_cast<int>(std::sqrt(static_cast<double>(flat)));
  while (static_cast<Eigen::Index>(l) * l > flat) --l;
  while (static_cast<Eigen::Index>(l + 1) * (l + 1) <= flat) ++l;
  return l;
}

double polynomial(const std::vector<double>& coeffs, double x) {
  double v = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * x + *it;
  return v;
}

std::pair<double, double> angles(const Eigen::Vector3d& u) {
  const double z = std::clamp(u.z() / u.norm(), -1.0, 1.0);
  return {std::acos(z), std::atan2(u.y(), u.x())};
}

// Orthonormal pair spanning the plane orthogonal to u.
std::pair<Eigen::Vector3d, Eigen::Vector3d> plane_basis(const Eigen::Vector3d& u) {
  Eigen::Vector3d helper = Eigen::Vector3d::UnitX();
  if (std::abs(u.x()) > std::abs(u.y())) helper = Eigen::Vector3d::UnitY();
  if (std::abs(u.z()) < std::min(std::abs(u.x()), std::abs(u.y()))) helper = Eigen::Vector3d::UnitZ();
  Eigen::Vector3d e1 = u.cross(helper).normalized();
  Eigen::Vector3d e2 = u.cross(e1);
  return {e1, e2};
}

double legendre_at_zero(int l) {
  if (l % 2) return 0.0;
  double p = 1.0;
  for (int k = 2; k <= l; k += 2) p *= -static_cast<double>(k - 1) / k;
  return p;
}

}  // namespace

// --- harmonics -------------------------------------------------------------

LegendreTable::LegendreTable(int L, double x) {
  if (L < 0) throw Error(ErrorKind::InvalidArgument, "negative degree");
  values_.assign(static_cast<std::size_t>((L + 1) * (L + 2) / 2), 0.0);
  auto at = [&](int l, int m) -> double& { return values_[static_cast<std::size_t>(l * (l + 1) / 2 + m)]; };
  const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
  at(0, 0) = 1.0 / std::sqrt(4.0 * kPi);
  for (int m = 1; m <= L; ++m) at(m, m) = -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s * at(m - 1, m - 1);
  for (int m = 0; m < L; ++m) at(m + 1, m) = std::sqrt(2.0 * m + 3.0) * x * at(m, m);
  for (int m = 0; m <= L; ++m)
    for (int l = m + 2; l <= L; ++l) {
      const double ll = l, mm = m;
      const double a = std::sqrt((4.0 * ll * ll - 1.0) / (ll * ll - mm * mm));
      const double b = std::sqrt(((ll - 1.0) * (ll - 1.0) - mm * mm) / (4.0 * (ll - 1.0) * (ll - 1.0) - 1.0));
      at(l, m) = a * (x * at(l - 1, m) - b * at(l - 2, m));
    }
}

cplx ylm(int l, int m, double theta, double phi) {
  if (l < 0 || std::abs(m) > l) throw Error(ErrorKind::InvalidArgument, "need |m| <= l");
  LegendreTable P(l, std::cos(theta));
  const int am = std::abs(m);
  const cplx y = P(l, am) * std::polar(1.0, am * phi);
  if (m >= 0) return y;
  return (am % 2 ? -1.0 : 1.0) * std::conj(y);
}

Eigen::VectorXcd ylm_all(int L, double theta, double phi) {
  LegendreTable P(L, std::cos(theta));
  Eigen::VectorXcd out(static_cast<Eigen::Index>(L + 1) * (L + 1));
  for (int l = 0; l <= L; ++l)
    for (int m = 0; m <= l; ++m) {
      const cplx y = P(l, m) * std::polar(1.0, m * phi);
      out(flat_index(l, m)) = y;
      if (m > 0) out(flat_index(l, -m)) = (m % 2 ? -1.0 : 1.0) * std::conj(y);
    }
  return out;
}

Eigen::VectorXcd ylm_degree(int l, double theta, double phi) {
  LegendreTable P(l, std::cos(theta));
  Eigen::VectorXcd out(2 * l + 1);
  for (int m = 0; m <= l; ++m) {
    const cplx y = P(l, m) * std::polar(1.0, m * phi);
    out(l + m) = y;
    if (m > 0) out(l - m) = (m % 2 ? -1.0 : 1.0) * std::conj(y);
  }
  return out;
}

SphericalState::SphericalState(int degree, Eigen::VectorXcd amps) : l(degree), amplitudes(std::move(amps)) {
  if (degree < 0 || amplitudes.size() != 2 * degree + 1)
    throw Error(ErrorKind::InvalidArgument, "state needs 2l+1 amplitudes");
  const double n = amplitudes.norm();
  if (std::abs(n - 1.0) > 1e-12) {
    if (n == 0.0) throw Error(ErrorKind::InvalidArgument, "zero state");
    amplitudes /= n;
  }
}

GeodesicPoint::GeodesicPoint(const Eigen::Vector3d& v) : u(v) {
  const double n = v.norm();
  if (!(n > 0.0)) throw Error(ErrorKind::InvalidArgument, "zero normal vector");
  u /= n;
}

SphericalFunction::SphericalFunction(int bandwidth)
    : L(bandwidth), coefficients(Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(bandwidth + 1) * (bandwidth + 1))) {
  if (bandwidth < 0) throw Error(ErrorKind::InvalidArgument, "negative bandwidth");
}

SphericalFunction::SphericalFunction(int bandwidth, Eigen::VectorXcd coeffs)
    : L(bandwidth), coefficients(std::move(coeffs)) {
  if (bandwidth < 0 || coefficients.size() != static_cast<Eigen::Index>(bandwidth + 1) * (bandwidth + 1))
    throw Error(ErrorKind::InvalidArgument, "coefficient vector must have (L+1)^2 entries");
}

SphericalFunction SphericalFunction::constant(double c) {
  SphericalFunction f(0);
  f.coefficients(0) = c * std::sqrt(4.0 * kPi);
  return f;
}

SphericalFunction SphericalFunction::zonal_polynomial(const std::vector<double>& coeffs) {
  const int L = std::max<int>(0, static_cast<int>(coeffs.size()) - 1);
  SphericalFunction f(L);
  std::vector<double> x, w;
  gauss_legendre(L + 1, x, w);
  for (std::size_t q = 0; q < x.size(); ++q) {
    LegendreTable P(L, x[q]);
    const double a = polynomial(coeffs, x[q]);
    for (int l = 0; l <= L; ++l) f.coefficients(flat_index(l, 0)) += 2.0 * kPi * w[q] * a * P(l, 0);
  }
  return f;
}

SphericalFunction SphericalFunction::coordinate_z() { return zonal_polynomial({0.0, 1.0}); }
SphericalFunction SphericalFunction::z_squared() { return zonal_polynomial({0.0, 0.0, 1.0}); }

cplx SphericalFunction::operator()(double theta, double phi) const {
  return (ylm_all(L, theta, phi).array() * coefficients.array()).sum();
}

cplx SphericalFunction::at(const Eigen::Vector3d& u) const {
  const auto [theta, phi] = angles(u);
  return (*this)(theta, phi);
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "need at least one node");
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[static_cast<std::size_t>(i)] = -x;
    nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
}

cplx evaluate_state(const SphericalState& s, double theta, double phi) {
  if (theta < 0.0 || theta > kPi) throw Error(ErrorKind::InvalidArgument, "theta outside [0, pi]");
  return (ylm_degree(s.l, theta, phi).array() * s.amplitudes.array()).sum();
}

double highest_weight_constant(int l) {
  if (l < 0) throw Error(ErrorKind::InvalidArgument, "negative degree");
  // I_l = int_0^pi sin^{2l+1} = I_{l-1} 2l/(2l+1), I_0 = 2.
  double I = 2.0;
  for (int k = 1; k <= l; ++k) I *= 2.0 * k / (2.0 * k + 1.0);
  return 1.0 / std::sqrt(2.0 * kPi * I);
}

SphericalState highest_weight_state(int l) {
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(2 * l + 1);
  a(2 * l) = (l % 2) ? -1.0 : 1.0;  // Y_ll = (-1)^l c_l e^{il phi} sin^l
  return SphericalState(l, a);
}

double equator_concentration(int l, const std::vector<double>& poly) {
  if (l < 0) throw Error(ErrorKind::InvalidArgument, "negative degree");
  // E[cos^{2k}] = prod_{i<k} (2i+1)/(2i+2l+3); odd moments vanish.
  double total = 0.0, moment = 1.0;
  for (std::size_t k = 0; k < poly.size(); ++k) {
    if (k % 2 == 0) {
      if (k > 0) {
        const double i = static_cast<double>(k / 2 - 1);
        moment *= (2.0 * i + 1.0) / (2.0 * i + 2.0 * l + 3.0);
      }
      total += poly[k] * moment;
    }
  }
  return total;
}

double reproducing_kernel_diag(int l, std::uint64_t seed, int points) {
  if (l < 0) throw Error(ErrorKind::InvalidArgument, "negative degree");
  Rng rng = make_rng(seed);
  std::normal_distribution<double> normal;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0.0;
  for (int i = 0; i < points; ++i) {
    const Eigen::Vector3d u(normal(rng), normal(rng), normal(rng));
    const auto [theta, phi] = angles(u);
    const double k = ylm_degree(l, theta, phi).squaredNorm();
    lo = std::min(lo, k);
    hi = std::max(hi, k);
    sum += k;
  }
  if (hi - lo > 1e-8)
    throw Error(ErrorKind::KernelNotConstant, "kernel spread " + std::to_string(hi - lo));
  return sum / points;
}

std::vector<SphericalState> random_onb(int l, Rng& rng) {
  if (l < 0) throw Error(ErrorKind::InvalidArgument, "negative degree");
  const Eigen::MatrixXcd U = haar_unitary(2 * l + 1, rng);
  std::vector<SphericalState> basis;
  basis.reserve(static_cast<std::size_t>(2 * l + 1));
  for (int j = 0; j < 2 * l + 1; ++j) basis.emplace_back(l, U.col(j));
  return basis;
}

std::vector<SphericalState> random_onb(int l, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return random_onb(l, rng);
}

Eigen::VectorXd zonal_diagonal(int l, const std::vector<double>& poly) {
  const int deg = static_cast<int>(poly.size());
  std::vector<double> x, w;
  gauss_legendre(l + deg / 2 + 2, x, w);
  Eigen::VectorXd d = Eigen::VectorXd::Zero(2 * l + 1);
  for (std::size_t q = 0; q < x.size(); ++q) {
    LegendreTable P(l, x[q]);
    const double a = polynomial(poly, x[q]);
    for (int m = 0; m <= l; ++m) {
      const double v = 2.0 * kPi * w[q] * a * P(l, m) * P(l, m);
      d(l + m) += v;
      if (m > 0) d(l - m) += v;
    }
  }
  return d;
}

ConcentrationSummary concentration_experiment(int l, const std::vector<double>& poly, int trials,
                                              std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorKind::InvalidArgument, "need at least one trial");
  if (l < 1) throw Error(ErrorKind::InvalidArgument, "need l >= 1");
  double mean = 0.0;  // int a dVol / 4 pi = (1/2) int_{-1}^1 a
  for (std::size_t k = 0; k < poly.size(); k += 2) mean += poly[k] / static_cast<double>(k + 1);
  const Eigen::VectorXd d = zonal_diagonal(l, poly);

  ConcentrationSummary out;
  out.l = l;
  out.threshold = std::pow(static_cast<double>(l), -0.125);
  Rng rng = make_rng(seed);
  int exceed = 0;
  for (int t = 0; t < trials; ++t) {
    const Eigen::MatrixXcd U = haar_unitary(2 * l + 1, rng);
    const Eigen::VectorXd values = U.cwiseAbs2().transpose() * d;
    const double sup = (values.array() - mean).abs().maxCoeff();
    out.sup_deviation.push_back(sup);
    if (sup >= out.threshold) ++exceed;
  }
  std::vector<double> sorted = out.sup_deviation;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  out.median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  out.exceedance_fraction = static_cast<double>(exceed) / trials;
  return out;
}

// --- Radon transform and its flow ------------------------------------------

double radon_transform(const SphericalFunction& V, const GeodesicPoint& gamma) {
  const auto [e1, e2] = plane_basis(gamma.u);
  const int n = 4 * V.L + 8;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s = 2.0 * kPi * i / n;
    sum += V.at(std::cos(s) * e1 + std::sin(s) * e2).real();
  }
  return sum / n;
}

SphericalFunction radon_coefficients(const SphericalFunction& V) {
  SphericalFunction R = V;
  for (int l = 0; l <= V.L; ++l) {
    const double p = legendre_at_zero(l);
    for (int m = -l; m <= l; ++m) R.coefficients(flat_index(l, m)) *= p;
  }
  return R;
}

double radon_closed_form(const SphericalFunction& V, const GeodesicPoint& gamma) {
  return radon_coefficients(V).at(gamma.u).real();
}

GeodesicPoint radon_flow(const SphericalFunction& V, const GeodesicPoint& gamma0, double t) {
  if (t == 0.0) return gamma0;
  const SphericalFunction H = radon_coefficients(V);
  // Angular momentum components applied to H; the flow is w = grad H x u = -i (L H)(u).
  SphericalFunction Lx(H.L), Ly(H.L), Lz(H.L);
  const cplx I(0.0, 1.0);
  for (int l = 0; l <= H.L; ++l)
    for (int m = -l; m <= l; ++m) {
      const cplx h = H.coefficients(flat_index(l, m));
      if (h == cplx{}) continue;
      Lz.coefficients(flat_index(l, m)) += static_cast<double>(m) * h;
      if (m < l) {
        const cplx up = std::sqrt(static_cast<double>((l - m) * (l + m + 1))) * h;
        Lx.coefficients(flat_index(l, m + 1)) += 0.5 * up;
        Ly.coefficients(flat_index(l, m + 1)) += up / (2.0 * I);
      }
      if (m > -l) {
        const cplx down = std::sqrt(static_cast<double>((l + m) * (l - m + 1))) * h;
        Lx.coefficients(flat_index(l, m - 1)) += 0.5 * down;
        Ly.coefficients(flat_index(l, m - 1)) -= down / (2.0 * I);
      }
    }

  using State = std::array<double, 3>;
  auto field = [&](const State& x, State& dx, double) {
    const Eigen::Vector3d u(x[0], x[1], x[2]);
    const auto [theta, phi] = angles(u);
    const Eigen::VectorXcd Y = ylm_all(H.L, theta, phi);
    dx[0] = (-I * (Y.array() * Lx.coefficients.array()).sum()).real();
    dx[1] = (-I * (Y.array() * Ly.coefficients.array()).sum()).real();
    dx[2] = (-I * (Y.array() * Lz.coefficients.array()).sum()).real();
  };

  namespace odeint = boost::numeric::odeint;
  State x{gamma0.u.x(), gamma0.u.y(), gamma0.u.z()};
  try {
    auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(1e-12, 1e-12);
    const double dt = t > 0 ? 1e-3 : -1e-3;
    odeint::integrate_adaptive(stepper, field, x, 0.0, t, dt);
  } catch (const std::exception& e) {
    throw Error(ErrorKind::StepFailure, e.what());
  }
  const Eigen::Vector3d u(x[0], x[1], x[2]);
  if (!u.allFinite() || std::abs(u.norm() - 1.0) > 1e-6)
    throw Error(ErrorKind::StepFailure, "integrator left the sphere");
  return GeodesicPoint(u);
}

// --- Weinstein averaging ---------------------------------------------------

Eigen::MatrixXcd quantum_average(const Eigen::MatrixXcd& B, int L) {
  const Eigen::Index dim = static_cast<Eigen::Index>(L + 1) * (L + 1);
  if (L < 0 || B.rows() != dim || B.cols() != dim)
    throw Error(ErrorKind::ShapeMismatch, "matrix must be (L+1)^2 square");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (int l = 0; l <= L; ++l) {
    const Eigen::Index start = static_cast<Eigen::Index>(l) * l;
    out.block(start, start, 2 * l + 1, 2 * l + 1) = B.block(start, start, 2 * l + 1, 2 * l + 1);
  }
  return out;
}

Eigen::MatrixXcd laplacian_blocks(int L) {
  const Eigen::Index dim = static_cast<Eigen::Index>(L + 1) * (L + 1);
  Eigen::VectorXcd d(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double l = degree_of(i);
    d(i) = l * (l + 1.0);
  }
  return d.asDiagonal();
}

Eigen::MatrixXcd band_compression(const SphericalFunction& V, int l, int extra_nodes) {
  const int nx = l + (V.L + 1) / 2 + 1 + extra_nodes;
  const int nphi = 2 * l + V.L + 1 + 2 * extra_nodes;
  std::vector<double> x, w;
  gauss_legendre(nx, x, w);
  const int dim = 2 * l + 1;
  Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::VectorXcd vhat(4 * l + 1);  // q = m - m' in [-2l, 2l]
  std::vector<cplx> vrow(static_cast<std::size_t>(nphi));
  for (int q = 0; q < nx; ++q) {
    const double theta = std::acos(x[static_cast<std::size_t>(q)]);
    for (int j = 0; j < nphi; ++j) vrow[static_cast<std::size_t>(j)] = V(theta, 2.0 * kPi * j / nphi);
    for (int f = -2 * l; f <= 2 * l; ++f) {
      cplx s{};
      for (int j = 0; j < nphi; ++j) s += vrow[static_cast<std::size_t>(j)] * std::polar(1.0, -2.0 * kPi * f * j / nphi);
      vhat(f + 2 * l) = s * (2.0 * kPi / nphi);
    }
    LegendreTable P(l, x[static_cast<std::size_t>(q)]);
    Eigen::VectorXd p(dim);
    for (int m = -l; m <= l; ++m) p(m + l) = (m < 0 && (-m) % 2 ? -1.0 : 1.0) * P(l, std::abs(m));
    for (int m = -l; m <= l; ++m)
      for (int mp = -l; mp <= l; ++mp)
        B(m + l, mp + l) += w[static_cast<std::size_t>(q)] * p(m + l) * p(mp + l) * vhat(m - mp + 2 * l);
  }
  return B;
}

double hausdorff_to_interval(const std::vector<double>& points, double a, double b) {
  if (points.empty()) throw Error(ErrorKind::InvalidArgument, "empty point set");
  std::vector<double> s = points;
  std::sort(s.begin(), s.end());
  double d = 0.0;
  for (double v : s) d = std::max(d, std::max({a - v, v - b, 0.0}));
  auto gap = [&](double y) {
    double best = std::numeric_limits<double>::infinity();
    for (double v : s) best = std::min(best, std::abs(y - v));
    return best;
  };
  d = std::max({d, gap(a), gap(b)});
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const double mid = 0.5 * (s[i] + s[i + 1]);
    if (mid >= a && mid <= b) d = std::max(d, gap(mid));
  }
  return d;
}

BandSpectrum band_spectrum_vs_radon(const SphericalFunction& V, int l, int radon_grid) {
  if (l < 1) throw Error(ErrorKind::InvalidArgument, "need l >= 1");
  const Eigen::MatrixXcd B = band_compression(V, l, 0);
  const Eigen::MatrixXcd B2 = band_compression(V, l, 4);
  const double change = (B - B2).cwiseAbs().maxCoeff();
  if (change > 1e-9)
    throw Error(ErrorKind::QuadratureUnderresolved, "grid refinement changed entries by " + std::to_string(change));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(0.5 * (B + B.adjoint()), Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw Error(ErrorKind::DiagonalizationFailure, "band eigenvalues");

  BandSpectrum out;
  out.l = l;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) out.eigenvalues.push_back(eig.eigenvalues()(i));
  out.radon_min = std::numeric_limits<double>::infinity();
  out.radon_max = -out.radon_min;
  for (int i = 0; i <= radon_grid; ++i) {
    const double theta = kPi * i / radon_grid;
    const int nphi = (i == 0 || i == radon_grid) ? 1 : 2 * radon_grid;
    for (int j = 0; j < nphi; ++j) {
      const double phi = 2.0 * kPi * j / (2 * radon_grid);
      const Eigen::Vector3d u(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta));
      const double r = radon_transform(V, GeodesicPoint(u));
      out.radon_min = std::min(out.radon_min, r);
      out.radon_max = std::max(out.radon_max, r);
    }
  }
  out.hausdorff = hausdorff_to_interval(out.eigenvalues, out.radon_min, out.radon_max);
  return out;
}

}  // namespace qlab::sphere
