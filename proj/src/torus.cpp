#include "qlab/torus.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

#include "qlab/error.hpp"

namespace qlab::torus {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double torus_volume_factor(int n) { return std::pow(kTwoPi, n); }

IntVec shifted(std::span<const std::int64_t> k, std::span<const std::int64_t> p, int sign) {
  IntVec out(k.begin(), k.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += sign * p[i];
  return out;
}

void check_dimension(std::span<const std::int64_t> p, int n) {
  if (static_cast<int>(p.size()) != n)
    throw Error(ErrorKind::InvalidArgument, "frequency vector has wrong dimension");
}

}  // namespace

// --- TorusState ------------------------------------------------------------

TorusState::TorusState(int dimension, std::vector<IntVec> modes, Eigen::VectorXcd amplitudes,
                       double hbar)
    : dimension_(dimension), hbar_(hbar) {
  if (dimension < 1) throw Error(ErrorKind::InvalidArgument, "dimension must be positive");
  if (static_cast<Eigen::Index>(modes.size()) != amplitudes.size())
    throw Error(ErrorKind::InvalidArgument, "modes and amplitudes differ in length");
  std::vector<std::size_t> order(modes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return modes[a] < modes[b]; });
  modes_.reserve(modes.size());
  amplitudes_.resize(amplitudes.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (static_cast<int>(modes[order[i]].size()) != dimension)
      throw Error(ErrorKind::InvalidArgument, "mode has wrong dimension");
    if (i > 0 && modes[order[i]] == modes[order[i - 1]])
      throw Error(ErrorKind::InvalidArgument, "duplicate mode");
    modes_.push_back(modes[order[i]]);
    amplitudes_(static_cast<Eigen::Index>(i)) = amplitudes(static_cast<Eigen::Index>(order[i]));
  }
}

TorusState TorusState::on_shell(const LatticeShell& shell, Eigen::VectorXcd amplitudes) {
  if (shell.empty()) throw Error(ErrorKind::EmptyShell, "shell has no vectors");
  if (shell.radius_squared() == 0)
    throw Error(ErrorKind::InvalidArgument, "the zero shell carries no semiclassical parameter");
  const double hbar = 1.0 / std::sqrt(static_cast<double>(shell.radius_squared()));
  return TorusState(shell.dimension(), shell.vectors(), std::move(amplitudes), hbar);
}

TorusState TorusState::plane_wave(const IntVec& k) {
  const int n = static_cast<int>(k.size());
  Eigen::VectorXcd c(1);
  c(0) = 1.0 / std::sqrt(torus_volume_factor(n));
  const auto m = lattice::norm_squared(k);
  const double hbar = m == 0 ? 1.0 : 1.0 / std::sqrt(static_cast<double>(m));
  return TorusState(n, {k}, c, hbar);
}

std::optional<std::size_t> TorusState::index_of(std::span<const std::int64_t> k) const {
  auto it = std::lower_bound(modes_.begin(), modes_.end(), k,
                             [](const IntVec& a, std::span<const std::int64_t> b) {
                               return std::lexicographical_compare(a.begin(), a.end(), b.begin(),
                                                                   b.end());
                             });
  if (it != modes_.end() && std::equal(it->begin(), it->end(), k.begin(), k.end()))
    return static_cast<std::size_t>(it - modes_.begin());
  return std::nullopt;
}

cplx TorusState::coefficient(std::span<const std::int64_t> k) const {
  auto i = index_of(k);
  return i ? amplitudes_(static_cast<Eigen::Index>(*i)) : cplx{};
}

double TorusState::norm_squared() const {
  return torus_volume_factor(dimension_) * amplitudes_.squaredNorm();
}

std::optional<std::int64_t> TorusState::shell_radius_squared() const {
  if (modes_.empty()) return std::nullopt;
  const auto m = lattice::norm_squared(modes_.front());
  for (const auto& k : modes_)
    if (lattice::norm_squared(k) != m) return std::nullopt;
  return m;
}

cplx TorusState::operator()(std::span<const double> x) const {
  cplx sum{};
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    double phase = 0.0;
    for (int d = 0; d < dimension_; ++d) phase += static_cast<double>(modes_[i][d]) * x[d];
    sum += amplitudes_(static_cast<Eigen::Index>(i)) * std::polar(1.0, phase);
  }
  return sum;
}

// --- TorusSymbol -----------------------------------------------------------

TorusSymbol TorusSymbol::one(int dimension) {
  TorusSymbol a(dimension);
  a.add_constant(IntVec(static_cast<std::size_t>(dimension), 0), 1.0);
  return a;
}

TorusSymbol TorusSymbol::trigonometric(int dimension,
                                       const std::vector<std::pair<IntVec, cplx>>& coefficients) {
  TorusSymbol a(dimension);
  for (const auto& [p, v] : coefficients) a.add_constant(p, v);
  return a;
}

TorusSymbol TorusSymbol::momentum(int dimension, Profile f, double sup_norm) {
  TorusSymbol a(dimension);
  a.add(IntVec(static_cast<std::size_t>(dimension), 0), std::move(f), sup_norm);
  return a;
}

TorusSymbol& TorusSymbol::add(IntVec p, Profile f, double sup_norm) {
  check_dimension(p, dimension_);
  terms_.push_back({std::move(p), std::move(f), sup_norm, std::nullopt});
  return *this;
}

TorusSymbol& TorusSymbol::add_constant(IntVec p, cplx value) {
  check_dimension(p, dimension_);
  terms_.push_back({std::move(p), [value](std::span<const double>) { return value; },
                    std::abs(value), value});
  return *this;
}

bool TorusSymbol::position_only() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.constant.has_value(); });
}

cplx TorusSymbol::coefficient(std::span<const std::int64_t> p) const {
  cplx sum{};
  for (const auto& t : terms_) {
    if (!t.constant) throw Error(ErrorKind::InvalidArgument, "symbol depends on momentum");
    if (std::equal(t.frequency.begin(), t.frequency.end(), p.begin(), p.end())) sum += *t.constant;
  }
  return sum;
}

// --- sampling --------------------------------------------------------------

TorusState random_eigenfunction(const LatticeShell& shell, Rng& rng) {
  if (shell.empty()) throw Error(ErrorKind::EmptyShell, "cannot sample on an empty shell");
  Eigen::VectorXcd c(static_cast<Eigen::Index>(shell.size()));
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = complex_gaussian(rng);
  c /= c.norm() * std::sqrt(torus_volume_factor(shell.dimension()));
  return TorusState::on_shell(shell, std::move(c));
}

TorusState random_eigenfunction(const LatticeShell& shell, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return random_eigenfunction(shell, rng);
}

std::vector<TorusState> random_shell_basis(const LatticeShell& shell, Rng& rng) {
  if (shell.empty()) throw Error(ErrorKind::EmptyShell, "cannot sample on an empty shell");
  const auto s = static_cast<Eigen::Index>(shell.size());
  const Eigen::MatrixXcd q = haar_unitary(s, rng) / std::sqrt(torus_volume_factor(shell.dimension()));
  std::vector<TorusState> basis;
  basis.reserve(shell.size());
  for (Eigen::Index j = 0; j < s; ++j) basis.push_back(TorusState::on_shell(shell, q.col(j)));
  return basis;
}

std::vector<TorusState> exponential_shell_basis(const LatticeShell& shell) {
  std::vector<TorusState> basis;
  for (const auto& k : shell.vectors()) basis.push_back(TorusState::plane_wave(k));
  return basis;
}

// --- moments and L^4 -------------------------------------------------------

cplx density_moment(const TorusState& psi, std::span<const std::int64_t> p) {
  check_dimension(p, psi.dimension());
  cplx sum{};
  const auto& modes = psi.modes();
  const auto& c = psi.amplitudes();
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (auto j = psi.index_of(shifted(modes[i], p, -1)))
      sum += c(static_cast<Eigen::Index>(i)) * std::conj(c(static_cast<Eigen::Index>(*j)));
  }
  return sum;
}

namespace {

// Buckets of index pairs (i, j) with k_i - k_j = p, keyed by p.
std::map<IntVec, std::vector<std::pair<int, int>>> difference_buckets(const std::vector<IntVec>& modes) {
  std::map<IntVec, std::vector<std::pair<int, int>>> buckets;
  for (std::size_t i = 0; i < modes.size(); ++i)
    for (std::size_t j = 0; j < modes.size(); ++j)
      buckets[shifted(modes[i], modes[j], -1)].emplace_back(static_cast<int>(i), static_cast<int>(j));
  return buckets;
}

}  // namespace

ShellL4Evaluator::ShellL4Evaluator(const LatticeShell& shell) : size_(shell.size()) {
  if (shell.dimension() != 2) throw Error(ErrorKind::UnsupportedDimension, "L4 needs n = 2");
  offsets_.push_back(0);
  for (auto& [p, pairs] : difference_buckets(shell.vectors())) {
    pairs_.insert(pairs_.end(), pairs.begin(), pairs.end());
    offsets_.push_back(pairs_.size());
  }
}

double ShellL4Evaluator::operator()(const Eigen::VectorXcd& c) const {
  double total = 0.0;
  for (std::size_t b = 0; b + 1 < offsets_.size(); ++b) {
    cplx moment{};
    for (std::size_t q = offsets_[b]; q < offsets_[b + 1]; ++q)
      moment += c(pairs_[q].first) * std::conj(c(pairs_[q].second));
    total += std::norm(moment);
  }
  return kTwoPi * kTwoPi * total;
}

double exact_l4(const TorusState& psi) {
  if (psi.dimension() != 2) throw Error(ErrorKind::UnsupportedDimension, "L4 needs n = 2");
  const auto& c = psi.amplitudes();
  double total = 0.0;
  for (const auto& [p, pairs] : difference_buckets(psi.modes())) {
    cplx moment{};
    for (auto [i, j] : pairs) moment += c(i) * std::conj(c(j));
    total += std::norm(moment);
  }
  return kTwoPi * kTwoPi * total;
}

double l4_quadrature(const TorusState& psi, int grid) {
  if (psi.dimension() != 2) throw Error(ErrorKind::UnsupportedDimension, "L4 needs n = 2");
  const double h = kTwoPi / grid;
  // Separable evaluation: psi(x) = sum_k c_k e^{i k1 x1} e^{i k2 x2}.
  const auto& modes = psi.modes();
  const auto s = static_cast<Eigen::Index>(modes.size());
  Eigen::MatrixXcd e1(grid, s), e2(grid, s);
  for (int g = 0; g < grid; ++g)
    for (Eigen::Index i = 0; i < s; ++i) {
      e1(g, i) = std::polar(1.0, static_cast<double>(modes[i][0]) * g * h);
      e2(g, i) = std::polar(1.0, static_cast<double>(modes[i][1]) * g * h);
    }
  const Eigen::MatrixXcd values = e1 * psi.amplitudes().asDiagonal() * e2.transpose();
  return h * h * values.cwiseAbs2().cwiseAbs2().sum();
}

// --- Weyl quantization and Egorov -----------------------------------------

cplx wigner(const TorusState& psi, const TorusSymbol& a) {
  const int n = psi.dimension();
  if (a.dimension() != n) throw Error(ErrorKind::InvalidArgument, "symbol dimension mismatch");
  const auto& modes = psi.modes();
  const auto& c = psi.amplitudes();
  std::vector<double> xi(static_cast<std::size_t>(n));
  cplx sum{};
  for (const auto& term : a.terms()) {
    for (std::size_t i = 0; i < modes.size(); ++i) {
      auto j = psi.index_of(shifted(modes[i], term.frequency, +1));
      if (!j) continue;
      for (int d = 0; d < n; ++d)
        xi[d] = psi.hbar() * (static_cast<double>(modes[i][d]) + 0.5 * static_cast<double>(term.frequency[d]));
      sum += std::conj(c(static_cast<Eigen::Index>(*j))) * c(static_cast<Eigen::Index>(i)) * term.profile(xi);
    }
  }
  return torus_volume_factor(n) * sum;
}

TorusSymbol egorov_conjugate(const TorusSymbol& a, double t) {
  TorusSymbol out(a.dimension());
  for (const auto& term : a.terms()) {
    if (t == 0.0) {
      out.add(term.frequency, term.profile, term.sup_norm);
      continue;
    }
    auto p = term.frequency;
    auto f = term.profile;
    out.add(p,
            [p, f, t](std::span<const double> xi) {
              double phase = 0.0;
              for (std::size_t d = 0; d < p.size(); ++d) phase += static_cast<double>(p[d]) * xi[d];
              return f(xi) * std::polar(1.0, phase * t);
            },
            term.sup_norm);
  }
  return out;
}

cplx conjugated_matrix_element(const TorusState& psi, const TorusSymbol& a, double t) {
  const int n = psi.dimension();
  const auto& modes = psi.modes();
  const auto& c = psi.amplitudes();
  const double hbar = psi.hbar();
  auto propagator_phase = [&](std::span<const std::int64_t> k) {
    return std::polar(1.0, -0.5 * t * hbar * static_cast<double>(lattice::norm_squared(k)));
  };
  std::vector<double> xi(static_cast<std::size_t>(n));
  cplx sum{};
  for (const auto& term : a.terms()) {
    for (std::size_t i = 0; i < modes.size(); ++i) {
      const auto target = shifted(modes[i], term.frequency, +1);
      auto j = psi.index_of(target);
      if (!j) continue;
      for (int d = 0; d < n; ++d)
        xi[d] = hbar * (static_cast<double>(modes[i][d]) + 0.5 * static_cast<double>(term.frequency[d]));
      // <e_{k+p}, U^* Op U e_k> = conj(u_{k+p}) u_k f
      const cplx element = std::conj(propagator_phase(target)) * propagator_phase(modes[i]) * term.profile(xi);
      sum += std::conj(c(static_cast<Eigen::Index>(*j))) * c(static_cast<Eigen::Index>(i)) * element;
    }
  }
  return torus_volume_factor(n) * sum;
}

// --- quantum variance ------------------------------------------------------

double quantum_variance(const std::vector<TorusState>& basis, const TorusSymbol& a, std::int64_t M) {
  if (!a.position_only())
    throw Error(ErrorKind::InvalidArgument, "variance needs a position-only symbol");
  if (M < 1) throw Error(ErrorKind::InvalidArgument, "shell cap must be at least 1");
  const int n = a.dimension();
  const double vol = torus_volume_factor(n);

  std::map<std::int64_t, std::vector<const TorusState*>> by_shell;
  for (const auto& psi : basis) {
    if (psi.dimension() != n) throw Error(ErrorKind::InvalidArgument, "basis dimension mismatch");
    auto m = psi.shell_radius_squared();
    if (!m || *m < 1 || *m > M)
      throw Error(ErrorKind::InvalidArgument, "basis element is not an eigenfunction with 1 <= m <= M");
    by_shell[*m].push_back(&psi);
  }

  for (std::int64_t m = 1; m <= M; ++m) {
    const auto shell = lattice::enumerate_shell(m, n);
    const auto it = by_shell.find(m);
    const std::size_t have = it == by_shell.end() ? 0 : it->second.size();
    if (have != shell.size())
      throw Error(ErrorKind::NonOrthonormalBasis,
                  "shell " + std::to_string(m) + " has " + std::to_string(have) + " of " +
                      std::to_string(shell.size()) + " basis vectors");
    if (have == 0) continue;
    const auto s = static_cast<Eigen::Index>(shell.size());
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(s, s);
    for (Eigen::Index j = 0; j < s; ++j) {
      const auto* psi = it->second[static_cast<std::size_t>(j)];
      for (std::size_t i = 0; i < psi->size(); ++i)
        C(static_cast<Eigen::Index>(*shell.index_of(psi->modes()[i])), j) =
            psi->amplitudes()(static_cast<Eigen::Index>(i));
    }
    const Eigen::MatrixXcd gram = vol * C.adjoint() * C;
    const double dev = (gram - Eigen::MatrixXcd::Identity(s, s)).cwiseAbs().maxCoeff();
    if (dev > 1e-8)
      throw Error(ErrorKind::NonOrthonormalBasis,
                  "Gram deviation " + std::to_string(dev) + " on shell " + std::to_string(m));
  }

  const cplx mean = a.coefficient(IntVec(static_cast<std::size_t>(n), 0));
  const auto count = lattice::count_in_ball_squared(M, n) - 1;
  double total = 0.0;
  for (const auto& psi : basis) total += std::norm(wigner(psi, a) - mean);
  return total / static_cast<double>(count);
}

// --- observability ---------------------------------------------------------

double Box::volume() const {
  double v = 1.0;
  for (std::size_t d = 0; d < lower.size(); ++d) v *= upper[d] - lower[d];
  return v;
}

double observability_mass(const TorusState& psi, const Box& omega) {
  const int n = psi.dimension();
  if (static_cast<int>(omega.lower.size()) != n || static_cast<int>(omega.upper.size()) != n)
    throw Error(ErrorKind::InvalidArgument, "box dimension mismatch");
  for (int d = 0; d < n; ++d) {
    const double w = omega.upper[d] - omega.lower[d];
    if (!(w > 0.0)) throw Error(ErrorKind::EmptyRegion, "box has non-positive width");
    if (w > kTwoPi + 1e-12) throw Error(ErrorKind::InvalidArgument, "box wider than the torus");
  }
  auto box_integral = [&](std::span<const std::int64_t> p) {
    cplx value = 1.0;
    for (int d = 0; d < n; ++d) {
      const double lo = omega.lower[d], hi = omega.upper[d];
      if (p[d] == 0) {
        value *= hi - lo;
      } else {
        const double q = static_cast<double>(p[d]);
        value *= (std::polar(1.0, q * hi) - std::polar(1.0, q * lo)) / cplx(0.0, q);
      }
    }
    return value;
  };
  const auto& modes = psi.modes();
  const auto& c = psi.amplitudes();
  cplx total{};
  for (std::size_t i = 0; i < modes.size(); ++i)
    for (std::size_t j = 0; j < modes.size(); ++j)
      total += c(static_cast<Eigen::Index>(i)) * std::conj(c(static_cast<Eigen::Index>(j))) *
               box_integral(shifted(modes[i], modes[j], -1));
  return total.real();
}

// --- directional filter ----------------------------------------------------

double cutoff_profile(Cutoff kind, double s) {
  const double a = std::abs(s);
  if (kind == Cutoff::Sharp) return a <= 1.0 + 1e-12 ? 1.0 : 0.0;
  if (a >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - a * a));
}

std::optional<IntVec> rational_direction(std::span<const double> xi, std::int64_t max_height) {
  if (xi.size() != 2) throw Error(ErrorKind::UnsupportedDimension, "direction must be 2D");
  const double x = xi[0], y = xi[1];
  if (x == 0.0 && y == 0.0) throw Error(ErrorKind::InvalidArgument, "zero direction");
  const bool swap = std::abs(y) > std::abs(x);
  const double big = swap ? y : x;
  const double r = (swap ? x : y) / big;  // |r| <= 1
  // Continued-fraction convergents of r.
  std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double rem = r;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(rem);
    const auto ai = static_cast<std::int64_t>(a);
    const std::int64_t h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > max_height) break;
    h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    if (std::abs(r - static_cast<double>(h1) / static_cast<double>(k1)) <= 1e-14) {
      const std::int64_t sign = big > 0 ? 1 : -1;
      IntVec v = swap ? IntVec{sign * h1, sign * k1} : IntVec{sign * k1, sign * h1};
      return v;
    }
    const double frac = rem - a;
    if (frac == 0.0) break;
    rem = 1.0 / frac;
  }
  return std::nullopt;
}

FilterResult directional_filter(const TorusState& psi, const IntVec& xi0, double R, Cutoff cutoff) {
  if (psi.dimension() != 2 || xi0.size() != 2)
    throw Error(ErrorKind::UnsupportedDimension, "directional filter needs n = 2");
  if (xi0[0] == 0 && xi0[1] == 0) throw Error(ErrorKind::InvalidArgument, "zero direction");
  if (!(R > 0.0)) throw Error(ErrorKind::InvalidArgument, "R must be positive");
  const double len = std::sqrt(static_cast<double>(lattice::norm_squared(xi0)));
  std::vector<IntVec> modes;
  std::vector<cplx> amps;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const auto& k = psi.modes()[i];
    // k . xi0_perp with xi0_perp = (-xi0_2, xi0_1) / |xi0|; the numerator is exact.
    const auto cross = -k[0] * xi0[1] + k[1] * xi0[0];
    const double chi = cutoff_profile(cutoff, static_cast<double>(cross) / (len * R));
    if (chi == 0.0) continue;
    modes.push_back(k);
    amps.push_back(chi * psi.amplitudes()(static_cast<Eigen::Index>(i)));
  }
  Eigen::VectorXcd c = Eigen::Map<Eigen::VectorXcd>(amps.data(), static_cast<Eigen::Index>(amps.size()));
  const std::size_t surviving = modes.size();
  return {TorusState(2, std::move(modes), std::move(c), psi.hbar()), surviving};
}

FilterResult directional_filter(const TorusState& psi, std::span<const double> xi0, double R,
                                Cutoff cutoff) {
  auto v = rational_direction(xi0);
  if (!v) throw Error(ErrorKind::IrrationalDirection, "direction is not rational");
  return directional_filter(psi, *v, R, cutoff);
}

cplx microlocal_weyl_average(std::int64_t M, const TorusSymbol& a) {
  if (a.dimension() != 2) throw Error(ErrorKind::UnsupportedDimension, "Weyl average needs n = 2");
  if (M < 1) throw Error(ErrorKind::InvalidArgument, "shell cap must be at least 1");
  const auto R = lattice::isqrt(M);
  cplx sum{};
  std::int64_t count = 0;
  for (std::int64_t x = -R; x <= R; ++x)
    for (std::int64_t y = -R; y <= R; ++y) {
      const auto m = x * x + y * y;
      if (m < 1 || m > M) continue;
      sum += wigner(TorusState::plane_wave({x, y}), a);
      ++count;
    }
  return sum / static_cast<double>(count);
}

}  // namespace qlab::torus
