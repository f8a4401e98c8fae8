#pragma once

// Round S^2 with orthonormal Condon-Shortley harmonics:
//   int conj(Y_lm) Y_l'm' dVol = delta delta,  Vol(S^2) = 4 pi.
// Coefficient vectors over all degrees l <= L use the flat index l^2 + l + m.

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "qlab/random.hpp"

namespace qlab::sphere {

using cplx = std::complex<double>;

inline Eigen::Index flat_index(int l, int m) { return static_cast<Eigen::Index>(l) * l + l + m; }

// Normalized associated Legendre values Pbar_l^m(x) for 0 <= m <= l <= L, so
// that Y_lm(theta, phi) = Pbar_l^m(cos theta) e^{i m phi} for m >= 0.
class LegendreTable {
 public:
  LegendreTable(int L, double x);
  double operator()(int l, int m) const { return values_[static_cast<std::size_t>(l * (l + 1) / 2 + m)]; }

 private:
  std::vector<double> values_;
};

cplx ylm(int l, int m, double theta, double phi);
// All Y_lm with l <= L at one point, flat-indexed.
Eigen::VectorXcd ylm_all(int L, double theta, double phi);
// Y_lm for one degree, index m + l.
Eigen::VectorXcd ylm_degree(int l, double theta, double phi);

struct SphericalState {
  int l = 0;
  Eigen::VectorXcd amplitudes;  // index m + l

  SphericalState(int degree, Eigen::VectorXcd amps);
};

struct GeodesicPoint {
  Eigen::Vector3d u;
  explicit GeodesicPoint(const Eigen::Vector3d& v);
};

// Band-limited function sum_{l<=L} c_lm Y_lm.
struct SphericalFunction {
  int L = 0;
  Eigen::VectorXcd coefficients;  // flat index

  explicit SphericalFunction(int bandwidth);
  SphericalFunction(int bandwidth, Eigen::VectorXcd coeffs);

  static SphericalFunction constant(double c);
  // Polynomial in z = cos theta, coefficients in increasing degree.
  static SphericalFunction zonal_polynomial(const std::vector<double>& coeffs);
  static SphericalFunction coordinate_z();
  static SphericalFunction z_squared();

  cplx operator()(double theta, double phi) const;
  cplx at(const Eigen::Vector3d& u) const;
};

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

cplx evaluate_state(const SphericalState& s, double theta, double phi);

double highest_weight_constant(int l);
// c_l e^{i l phi} sin^l theta as a degree-l state.
SphericalState highest_weight_state(int l);

// int a(cos theta) |psi_l^hw|^2 dVol for a polynomial a in cos theta.
double equator_concentration(int l, const std::vector<double>& poly);

// sum_m |Y_lm(x)|^2 at `points` random points; throws kernel-not-constant when
// the spread exceeds 1e-8.
double reproducing_kernel_diag(int l, std::uint64_t seed = 0, int points = 20);

std::vector<SphericalState> random_onb(int l, std::uint64_t seed);
std::vector<SphericalState> random_onb(int l, Rng& rng);

// Diagonal of the zonal multiplication operator <Y_lm, a Y_lm>, index m + l.
Eigen::VectorXd zonal_diagonal(int l, const std::vector<double>& poly);

struct ConcentrationSummary {
  int l = 0;
  double threshold = 0.0;  // l^{-1/8}
  std::vector<double> sup_deviation;
  double median = 0.0;
  double exceedance_fraction = 0.0;
};

ConcentrationSummary concentration_experiment(int l, const std::vector<double>& poly, int trials,
                                              std::uint64_t seed);

// Great-circle average with 4L + 8 equispaced nodes.
double radon_transform(const SphericalFunction& V, const GeodesicPoint& gamma);
// Funk-Hecke closed form sum_lm c_lm P_l(0) Y_lm(u).
double radon_closed_form(const SphericalFunction& V, const GeodesicPoint& gamma);
// Coefficients of R(V): c_lm P_l(0).
SphericalFunction radon_coefficients(const SphericalFunction& V);

// Hamiltonian flow of R(V) on G(S^2) = S^2 with the area form.
GeodesicPoint radon_flow(const SphericalFunction& V, const GeodesicPoint& gamma0, double t);

// Block-diagonal projection on (+)_{l<=L} E_l, dimension (L+1)^2.
Eigen::MatrixXcd quantum_average(const Eigen::MatrixXcd& B, int L);
// Laplacian diagonal l(l+1) on the same space.
Eigen::MatrixXcd laplacian_blocks(int L);

struct BandSpectrum {
  int l = 0;
  std::vector<double> eigenvalues;  // ascending
  double radon_min = 0.0;
  double radon_max = 0.0;
  double hausdorff = 0.0;
};

// Compression of V to E_l (product Gauss quadrature) against the range of R(V).
BandSpectrum band_spectrum_vs_radon(const SphericalFunction& V, int l, int radon_grid = 96);
Eigen::MatrixXcd band_compression(const SphericalFunction& V, int l, int extra_nodes = 0);

double hausdorff_to_interval(const std::vector<double>& points, double a, double b);

}  // namespace qlab::sphere
