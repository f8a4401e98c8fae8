#pragma once

// Quantized hyperbolic automorphisms of T^2 = R^2 / Z^2 on H_N = C^N, with
// position states j/N, j = 0..N-1. Conventions:
//   (T(m) psi)(j) = e^{i pi m1 m2 / N} e^{2 pi i m1 j / N} psi(j - m2)
//   U^* T(m) U = theta(m) T(A m),  |theta(m)| = 1.
// U is assembled from a factorization of A into the two generators
//   F = [[0, 1], [-1, 0]]  (unitary DFT,  (F psi)(j) = N^{-1/2} sum_k e^{-2 pi i jk/N} psi(k))
//   Q(k) = [[1, -k], [0, 1]]  (diagonal chirp e^{i pi k j^2 / N})
// with a half-integer shift of the chirp when kN is odd, which makes the
// chirp N-periodic; the price is a translation in the classical map.

#include <array>
#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qlab/random.hpp"

namespace qlab::catmap {

using cplx = std::complex<double>;
using Mat2 = std::array<std::array<std::int64_t, 2>, 2>;

struct CatMap {
  std::int64_t a, b, c, d;

  CatMap(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d);
  static CatMap arnold() { return {2, 1, 1, 1}; }

  std::int64_t trace() const noexcept { return a + d; }
  bool hyperbolic() const noexcept { return trace() > 2 || trace() < -2; }
  Mat2 matrix() const noexcept { return {{{a, b}, {c, d}}}; }
  std::array<std::int64_t, 2> apply(std::array<std::int64_t, 2> m) const noexcept {
    return {a * m[0] + b * m[1], c * m[0] + d * m[1]};
  }
};

Eigen::MatrixXcd translation_operator(int N, std::array<std::int64_t, 2> m);
Eigen::VectorXcd apply_translation(int N, std::array<std::int64_t, 2> m, const Eigen::VectorXcd& psi);

struct Generator {
  enum Kind { Fourier, Chirp } kind;
  std::int64_t k = 0;  // chirp strength
};

// A = G_1 G_2 ... G_s in SL_2(Z).
std::vector<Generator> factorize(const CatMap& A);

class QuantizedCatMap {
 public:
  QuantizedCatMap(const CatMap& A, int N);
  ~QuantizedCatMap();
  QuantizedCatMap(const QuantizedCatMap&) = delete;
  QuantizedCatMap& operator=(const QuantizedCatMap&) = delete;
  QuantizedCatMap(QuantizedCatMap&&) noexcept;

  int N() const noexcept { return N_; }
  const CatMap& map() const noexcept { return A_; }
  const std::vector<Generator>& generators() const noexcept { return gens_; }

  // U^steps psi; negative steps apply U^{-1}.
  Eigen::VectorXcd apply(const Eigen::VectorXcd& psi, long steps = 1) const;
  Eigen::MatrixXcd matrix() const;

  // The classical map the propagator quantizes, z -> M z + t (mod 1), and its
  // fixed point; the translation is non-zero only when a chirp needed the
  // half-integer shift.
  const Eigen::Matrix2d& classical_linear() const noexcept { return M_; }
  const Eigen::Vector2d& classical_shift() const noexcept { return t_; }
  Eigen::Vector2d fixed_point() const;

 private:
  struct Fft;
  CatMap A_;
  int N_;
  std::vector<Generator> gens_;
  std::vector<Eigen::VectorXcd> chirps_;
  std::unique_ptr<Fft> fft_;
  Eigen::Matrix2d M_;
  Eigen::Vector2d t_;
};

std::int64_t classical_period_mod(const CatMap& A, std::int64_t N);

struct QuantumPeriod {
  long period;
  cplx phase;
};

// Smallest t <= 4 classical_period_mod(A, 2N) with U^t = phase I.
QuantumPeriod quantum_period(const QuantizedCatMap& Q);

double lyapunov(const CatMap& A);

// Periodized Gaussian centred at (x0, xi0) in [0,1)^2.
Eigen::VectorXcd coherent_state(int N, double x0, double xi0, double squeeze = 1.0);

struct ScarredState {
  Eigen::VectorXcd state;
  long period;
  cplx period_phase;
  double eigenphase;  // U psi = e^{i eigenphase} psi
  Eigen::Vector2d center;
  double residual;
};

// sum over one quantum period of e^{-i theta k} U^k |coherent at the fixed point>.
// Admissible when the period is at most admissibility * ln N / chi.
ScarredState scarred_state(const QuantizedCatMap& Q, double admissibility = 4.0);

// H(a/G, b/G) with rows indexed by position a, normalized so sum H / G^2 = 1.
Eigen::MatrixXd husimi(const Eigen::VectorXcd& psi, int G, double squeeze = 1.0);
double torus_distance(double a, double b);
double husimi_ball_mass(const Eigen::MatrixXd& H, Eigen::Vector2d center, double radius);
std::string husimi_csv(const Eigen::MatrixXd& H, int N, double squeeze);

struct Eigenpair {
  double phase;
  Eigen::VectorXcd vector;
};

// Full diagonalization, eigenphases in (-pi, pi] ascending. Inside a cluster
// of gap < 1e-8 the basis diagonalizes the position cutoff 1_{j/N < 1/2},
// ordered by its expectation.
std::vector<Eigenpair> eigensystem(const QuantizedCatMap& Q);

// || pi_{w_{M-1}} U ... U pi_{w_1} U pi_{w_0} ||_2 with diagonal cutoffs.
double partition_product_norm(const QuantizedCatMap& Q, const std::vector<Eigen::VectorXd>& partition,
                              const std::vector<int>& word);
// Same product with a precomputed propagator matrix, no period check.
double partition_product_norm(const Eigen::MatrixXcd& U, const std::vector<Eigen::VectorXd>& partition,
                              const std::vector<int>& word);

}  // namespace qlab::catmap
