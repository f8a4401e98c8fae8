#pragma once

// Flat torus T^n = R^n / (2 pi Z)^n. States are finite Fourier sums
//   psi(x) = sum_k c_k e^{i k.x},   <f,g> = int_{[0,2pi]^n} conj(f) g dx,
// so ||psi||^2 = (2pi)^n sum |c_k|^2, and density_moment(p) is the p-th
// coefficient of |psi|^2 = sum_p density_moment(p) e^{i p.x}.

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qlab/lattice.hpp"
#include "qlab/random.hpp"

namespace qlab::torus {

using lattice::IntVec;
using lattice::LatticeShell;
using cplx = std::complex<double>;

// Finite Fourier sum at a fixed semiclassical parameter hbar. Modes are kept
// sorted so lookups are binary searches. When every mode lies on one shell
// this is a Laplace eigenfunction with hbar = |k|^{-1}.
class TorusState {
 public:
  TorusState(int dimension, std::vector<IntVec> modes, Eigen::VectorXcd amplitudes, double hbar);

  // Eigenfunction supported on a shell; amplitudes are in shell order.
  static TorusState on_shell(const LatticeShell& shell, Eigen::VectorXcd amplitudes);
  // e^{i k.x} / (2pi)^{n/2}
  static TorusState plane_wave(const IntVec& k);

  int dimension() const noexcept { return dimension_; }
  double hbar() const noexcept { return hbar_; }
  const std::vector<IntVec>& modes() const noexcept { return modes_; }
  const Eigen::VectorXcd& amplitudes() const noexcept { return amplitudes_; }
  std::size_t size() const noexcept { return modes_.size(); }

  std::optional<std::size_t> index_of(std::span<const std::int64_t> k) const;
  cplx coefficient(std::span<const std::int64_t> k) const;

  // (2pi)^n sum |c_k|^2
  double norm_squared() const;
  // |k|^2 when all modes share one shell.
  std::optional<std::int64_t> shell_radius_squared() const;

  cplx operator()(std::span<const double> x) const;

 private:
  int dimension_;
  std::vector<IntVec> modes_;
  Eigen::VectorXcd amplitudes_;
  double hbar_;
};

using TorusEigenfunction = TorusState;

// a(x, xi) = sum_p e^{i p.x} f_p(xi)
class TorusSymbol {
 public:
  using Profile = std::function<cplx(std::span<const double>)>;
  struct Term {
    IntVec frequency;
    Profile profile;
    double sup_norm;
    // Set when f_p is a constant, so the symbol depends on x only.
    std::optional<cplx> constant;
  };

  TorusSymbol() = default;
  explicit TorusSymbol(int dimension) : dimension_(dimension) {}

  static TorusSymbol one(int dimension);
  // sum_p a_p e^{i p.x}
  static TorusSymbol trigonometric(int dimension,
                                   const std::vector<std::pair<IntVec, cplx>>& coefficients);
  // f(xi) with frequency 0
  static TorusSymbol momentum(int dimension, Profile f, double sup_norm);

  TorusSymbol& add(IntVec p, Profile f, double sup_norm);
  TorusSymbol& add_constant(IntVec p, cplx value);

  int dimension() const noexcept { return dimension_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  bool position_only() const;
  // Fourier coefficient a_p of a position-only symbol (0 when absent).
  cplx coefficient(std::span<const std::int64_t> p) const;

 private:
  int dimension_ = 2;
  std::vector<Term> terms_;
};

TorusState random_eigenfunction(const LatticeShell& shell, std::uint64_t seed);
TorusState random_eigenfunction(const LatticeShell& shell, Rng& rng);

// Columns of a Haar unitary on the shell, each normalized as an eigenfunction.
std::vector<TorusState> random_shell_basis(const LatticeShell& shell, Rng& rng);
std::vector<TorusState> exponential_shell_basis(const LatticeShell& shell);

// sum_k c_k conj(c_{k-p})
cplx density_moment(const TorusState& psi, std::span<const std::int64_t> p);

// Precomputed difference buckets for one 2D shell: every p = k - k' and the
// index pairs that realize it. Makes repeated L^4 evaluation cheap.
class ShellL4Evaluator {
 public:
  explicit ShellL4Evaluator(const LatticeShell& shell);
  double operator()(const Eigen::VectorXcd& amplitudes) const;
  std::size_t shell_size() const noexcept { return size_; }

 private:
  std::size_t size_;
  std::vector<std::pair<int, int>> pairs_;
  std::vector<std::size_t> offsets_;
};

// int |psi|^4 = (2pi)^2 sum_p |density_moment(p)|^2, n = 2 only.
double exact_l4(const TorusState& psi);

// Grid cross-check: (2pi/G)^2 sum |psi|^4 on a G x G grid.
double l4_quadrature(const TorusState& psi, int grid);

// <psi, Op(a) psi> with Op(e^{ipx} f) e_k = f(hbar (k + p/2)) e_{k+p}.
cplx wigner(const TorusState& psi, const TorusSymbol& a);

// a o phi^t with phi^t(x, xi) = (x + t xi, xi).
TorusSymbol egorov_conjugate(const TorusSymbol& a, double t);

// <psi, U(t)^* Op(a) U(t) psi> with U(t) e_k = e^{-i t hbar |k|^2 / 2} e_k,
// evaluated mode by mode; independent of egorov_conjugate.
cplx conjugated_matrix_element(const TorusState& psi, const TorusSymbol& a, double t);

// N^{-1} sum_j |int a|psi_j|^2 - mean(a)|^2 over a basis of all shells
// 1 <= m <= M, hbar = M^{-1/2}.
double quantum_variance(const std::vector<TorusState>& basis, const TorusSymbol& a, std::int64_t M);

struct Box {
  std::vector<double> lower;
  std::vector<double> upper;
  double volume() const;
};

// int_omega |psi|^2 in closed form.
double observability_mass(const TorusState& psi, const Box& omega);

enum class Cutoff { Sharp, Smooth };

double cutoff_profile(Cutoff kind, double s);

struct FilterResult {
  TorusState state;
  std::size_t surviving;
};

// c_k -> chi(k.xi0_perp / R) c_k. Direction given by integers is rational by
// construction; real directions are tested for rationality.
FilterResult directional_filter(const TorusState& psi, const IntVec& xi0, double R, Cutoff cutoff);
FilterResult directional_filter(const TorusState& psi, std::span<const double> xi0, double R,
                                Cutoff cutoff);

// Primitive integer vector parallel to xi (n = 2), or nullopt.
std::optional<IntVec> rational_direction(std::span<const double> xi, std::int64_t max_height = 1000000);

// Average of wigner(e_k, a) over 1 <= |k|^2 <= M, each at hbar = |k|^{-1}.
cplx microlocal_weyl_average(std::int64_t M, const TorusSymbol& a);

}  // namespace qlab::torus
