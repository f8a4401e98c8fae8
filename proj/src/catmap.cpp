#include "qlab/catmap.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include <fftw3.h>

#include "qlab/error.hpp"

namespace qlab::catmap {

namespace {

constexpr double kPi = std::numbers::pi;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t mod(std::int64_t a, std::int64_t n) {
  const std::int64_t r = a % n;
  return r < 0 ? r + n : r;
}

Mat2 mul(const Mat2& x, const Mat2& y) {
  Mat2 r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
  return r;
}

Mat2 generator_matrix(const Generator& g) {
  if (g.kind == Generator::Fourier) return {{{0, 1}, {-1, 0}}};
  return {{{1, -g.k}, {0, 1}}};
}

}  // namespace

CatMap::CatMap(std::int64_t a_, std::int64_t b_, std::int64_t c_, std::int64_t d_) : a(a_), b(b_), c(c_), d(d_) {
  if (a * d - b * c != 1) throw Error(ErrorKind::InvalidArgument, "matrix must have determinant 1");
}

// --- translations ----------------------------------------------------------

Eigen::VectorXcd apply_translation(int N, std::array<std::int64_t, 2> m, const Eigen::VectorXcd& psi) {
  if (N < 1 || psi.size() != N) throw Error(ErrorKind::InvalidArgument, "state size must equal N");
  Eigen::VectorXcd out(N);
  const std::int64_t twoN = 2 * static_cast<std::int64_t>(N);
  // e^{i pi m1 m2 / N} e^{2 pi i m1 j / N} = e^{i pi (m1 m2 + 2 m1 j) / N}, reduced mod 2N
  for (std::int64_t j = 0; j < N; ++j) {
    const std::int64_t e = mod(mod(m[0], twoN) * mod(m[1] + 2 * j, twoN), twoN);
    out(j) = std::polar(1.0, kPi * static_cast<double>(e) / N) * psi(mod(j - m[1], N));
  }
  return out;
}

Eigen::MatrixXcd translation_operator(int N, std::array<std::int64_t, 2> m) {
  if (N < 1) throw Error(ErrorKind::InvalidArgument, "N must be positive");
  Eigen::MatrixXcd T(N, N);
  for (int j = 0; j < N; ++j) T.col(j) = apply_translation(N, m, Eigen::VectorXcd::Unit(N, j));
  return T;
}

// --- factorization and propagator ------------------------------------------

std::vector<Generator> factorize(const CatMap& A) {
  Mat2 M = A.matrix();
  std::vector<Generator> gens;
  // Euclid on the first column: left-multiply by Q(q) and F^{-1} until it is
  // upper triangular, recording the inverses.
  while (M[1][0] != 0) {
    const std::int64_t q = floor_div(M[0][0], M[1][0]);
    M = mul({{{1, -q}, {0, 1}}}, M);
    gens.push_back({Generator::Chirp, -q});
    M = mul({{{0, -1}, {1, 0}}}, M);
    gens.push_back({Generator::Fourier, 0});
  }
  const std::int64_t s = M[0][0];
  const std::int64_t t = M[0][1] * s;
  if (s == -1) {
    gens.push_back({Generator::Fourier, 0});
    gens.push_back({Generator::Fourier, 0});
  }
  gens.push_back({Generator::Chirp, -t});

  Mat2 check{{{1, 0}, {0, 1}}};
  for (const auto& g : gens) check = mul(check, generator_matrix(g));
  if (check != A.matrix()) throw Error(ErrorKind::InvalidArgument, "factorization failed");
  return gens;
}

struct QuantizedCatMap::Fft {
  int n;
  fftw_complex* buffer;
  fftw_plan forward;
  fftw_plan backward;

  explicit Fft(int size) : n(size) {
    buffer = fftw_alloc_complex(static_cast<std::size_t>(size));
    forward = fftw_plan_dft_1d(size, buffer, buffer, FFTW_FORWARD, FFTW_ESTIMATE);
    backward = fftw_plan_dft_1d(size, buffer, buffer, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Fft() {
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
    fftw_free(buffer);
  }
  void run(Eigen::VectorXcd& v, bool inverse) {
    std::copy(v.data(), v.data() + n, reinterpret_cast<cplx*>(buffer));
    fftw_execute(inverse ? backward : forward);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    const auto* out = reinterpret_cast<const cplx*>(buffer);
    for (int i = 0; i < n; ++i) v(i) = out[i] * scale;
  }
};

QuantizedCatMap::QuantizedCatMap(const CatMap& A, int N) : A_(A), N_(N) {
  if (!A.hyperbolic()) throw Error(ErrorKind::NonHyperbolic, "|trace| must exceed 2");
  if (N < 1) throw Error(ErrorKind::InvalidArgument, "N must be positive");
  gens_ = factorize(A);
  fft_ = std::make_unique<Fft>(N);

  const std::int64_t twoN = 2 * static_cast<std::int64_t>(N);
  Eigen::Matrix2d D;
  D << 1, 0, 0, -1;
  M_.setIdentity();
  t_.setZero();
  for (const auto& g : gens_) {
    Eigen::Vector2d shift = Eigen::Vector2d::Zero();
    if (g.kind == Generator::Chirp) {
      const bool odd = mod(g.k, 2) * (N % 2) == 1;
      Eigen::VectorXcd ph(N);
      for (std::int64_t j = 0; j < N; ++j) {
        // e^{i pi k j^2 / N}, or e^{i pi k j (j + N) / N} when kN is odd
        const std::int64_t q = odd ? mod(j * (j + N), twoN) : mod(j * j, twoN);
        ph(j) = std::polar(1.0, kPi * static_cast<double>(mod(mod(g.k, twoN) * q, twoN)) / N);
      }
      chirps_.push_back(std::move(ph));
      if (odd) shift << 0.0, 0.5;
    } else {
      chirps_.emplace_back();
    }
    const Mat2 B = generator_matrix(g);
    Eigen::Matrix2d Bd;
    Bd << static_cast<double>(B[0][0]), static_cast<double>(B[0][1]), static_cast<double>(B[1][0]),
        static_cast<double>(B[1][1]);
    const Eigen::Matrix2d Mg = D * Bd.transpose() * D;
    M_ = Mg * M_;
    t_ = Mg * (t_ + shift);
  }
}

QuantizedCatMap::~QuantizedCatMap() = default;
QuantizedCatMap::QuantizedCatMap(QuantizedCatMap&&) noexcept = default;

Eigen::VectorXcd QuantizedCatMap::apply(const Eigen::VectorXcd& psi, long steps) const {
  if (psi.size() != N_) throw Error(ErrorKind::InvalidArgument, "state size must equal N");
  Eigen::VectorXcd v = psi;
  const long count = steps < 0 ? -steps : steps;
  for (long s = 0; s < count; ++s) {
    if (steps > 0) {
      for (std::size_t i = 0; i < gens_.size(); ++i) {
        if (gens_[i].kind == Generator::Fourier) fft_->run(v, false);
        else v.array() *= chirps_[i].array();
      }
    } else {
      for (std::size_t i = gens_.size(); i-- > 0;) {
        if (gens_[i].kind == Generator::Fourier) fft_->run(v, true);
        else v.array() *= chirps_[i].array().conjugate();
      }
    }
  }
  return v;
}

Eigen::MatrixXcd QuantizedCatMap::matrix() const {
  Eigen::MatrixXcd U(N_, N_);
  for (int j = 0; j < N_; ++j) U.col(j) = apply(Eigen::VectorXcd::Unit(N_, j));
  return U;
}

Eigen::Vector2d QuantizedCatMap::fixed_point() const {
  Eigen::Vector2d z = (Eigen::Matrix2d::Identity() - M_).fullPivLu().solve(t_);
  for (int i = 0; i < 2; ++i) {
    z(i) -= std::floor(z(i));
    if (z(i) > 1.0 - 1e-12) z(i) = 0.0;
  }
  return z;
}

// --- periods ---------------------------------------------------------------

std::int64_t classical_period_mod(const CatMap& A, std::int64_t N) {
  if (N < 1) throw Error(ErrorKind::InvalidArgument, "N must be positive");
  if (N == 1) return 1;
  if (N > 3'000'000'000LL) throw Error(ErrorKind::NoPeriod, "modulus too large for 64-bit products");
  const Mat2 base{{{mod(A.a, N), mod(A.b, N)}, {mod(A.c, N), mod(A.d, N)}}};
  Mat2 P = base;
  const std::int64_t cap = 24 * N + 100;
  for (std::int64_t t = 1; t <= cap; ++t) {
    if (P[0][0] == 1 && P[0][1] == 0 && P[1][0] == 0 && P[1][1] == 1) return t;
    Mat2 next{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) next[i][j] = (P[i][0] * base[0][j] + P[i][1] * base[1][j]) % N;
    P = next;
  }
  throw Error(ErrorKind::NoPeriod, "period exceeds search cap");
}

QuantumPeriod quantum_period(const QuantizedCatMap& Q) {
  const int N = Q.N();
  const std::int64_t step = classical_period_mod(Q.map(), N);
  const std::int64_t bound = 4 * classical_period_mod(Q.map(), 2 * static_cast<std::int64_t>(N));
  Rng rng = make_rng(0x9e3779b9ULL + static_cast<std::uint64_t>(N));
  auto random_state = [&] {
    Eigen::VectorXcd v(N);
    for (int i = 0; i < N; ++i) v(i) = complex_gaussian(rng);
    return Eigen::VectorXcd(v.normalized());
  };
  const Eigen::VectorXcd v = random_state();
  const Eigen::VectorXcd v2 = random_state();
  Eigen::VectorXcd w = v;
  // U^t proportional to I forces A^t = I mod N, so only multiples of the
  // classical period are candidates.
  for (std::int64_t t = step; t <= bound; t += step) {
    w = Q.apply(w, static_cast<long>(step));
    const cplx c = v.dot(w);
    if (std::abs(std::abs(c) - 1.0) < 1e-9 && (w - c * v).norm() < 1e-8) {
      const Eigen::VectorXcd w2 = Q.apply(v2, static_cast<long>(t));
      if ((w2 - c * v2).norm() < 1e-8) return {static_cast<long>(t), c / std::abs(c)};
    }
  }
  throw Error(ErrorKind::PeriodNotFound, "no period up to " + std::to_string(bound));
}

double lyapunov(const CatMap& A) {
  if (!A.hyperbolic()) throw Error(ErrorKind::NonHyperbolic, "|trace| must exceed 2");
  const double tr = std::abs(static_cast<double>(A.trace()));
  return std::log(0.5 * (tr + std::sqrt(tr * tr - 4.0)));
}

// --- coherent states and Husimi --------------------------------------------

namespace {

// Sparse periodized Gaussian, unnormalized, merged by position index.
std::vector<std::pair<int, cplx>> coherent_terms(int N, double x0, double xi0, double squeeze) {
  const double dmax = std::sqrt(37.0 * squeeze / (kPi * N));
  std::vector<std::pair<int, cplx>> terms;
  const auto nlo = static_cast<long>(std::floor(x0 - dmax - 1.0));
  const auto nhi = static_cast<long>(std::ceil(x0 + dmax));
  for (long n = nlo; n <= nhi; ++n) {
    // positions j/N with |j/N + n - x0| <= dmax
    const auto jlo = std::max<long>(0, static_cast<long>(std::ceil((x0 - n - dmax) * N)));
    const auto jhi = std::min<long>(N - 1, static_cast<long>(std::floor((x0 - n + dmax) * N)));
    for (long j = jlo; j <= jhi; ++j) {
      const double d = static_cast<double>(j) / N + static_cast<double>(n) - x0;
      terms.emplace_back(static_cast<int>(j), std::exp(-kPi * N * d * d / squeeze) *
                                                  std::polar(1.0, 2.0 * kPi * N * xi0 * d));
    }
  }
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<int, cplx>> merged;
  for (const auto& t : terms) {
    if (!merged.empty() && merged.back().first == t.first) merged.back().second += t.second;
    else merged.push_back(t);
  }
  return merged;
}

}  // namespace

Eigen::VectorXcd coherent_state(int N, double x0, double xi0, double squeeze) {
  if (N < 1) throw Error(ErrorKind::InvalidArgument, "N must be positive");
  if (!(squeeze > 0.0)) throw Error(ErrorKind::InvalidArgument, "squeeze must be positive");
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(N);
  for (const auto& [j, v] : coherent_terms(N, x0, xi0, squeeze)) psi(j) += v;
  const double n = psi.norm();
  if (!(n > 0.0)) throw Error(ErrorKind::InvalidArgument, "coherent state underflowed");
  return psi / n;
}

double torus_distance(double a, double b) {
  double d = std::fmod(std::abs(a - b), 1.0);
  return std::min(d, 1.0 - d);
}

Eigen::MatrixXd husimi(const Eigen::VectorXcd& psi, int G, double squeeze) {
  if (G < 8) throw Error(ErrorKind::InvalidArgument, "grid must be at least 8");
  const int N = static_cast<int>(psi.size());
  Eigen::MatrixXd H(G, G);
  for (int a = 0; a < G; ++a)
    for (int b = 0; b < G; ++b) {
      const auto terms = coherent_terms(N, static_cast<double>(a) / G, static_cast<double>(b) / G, squeeze);
      double norm2 = 0.0;
      cplx overlap{};
      for (const auto& [j, v] : terms) {
        norm2 += std::norm(v);
        overlap += std::conj(v) * psi(j);
      }
      H(a, b) = std::norm(overlap) / norm2;
    }
  const double total = H.sum();
  if (!(total > 0.0)) throw Error(ErrorKind::InvalidArgument, "state has no Husimi mass");
  return H * (static_cast<double>(G) * G / total);
}

double husimi_ball_mass(const Eigen::MatrixXd& H, Eigen::Vector2d center, double radius) {
  const auto G = H.rows();
  double mass = 0.0;
  for (Eigen::Index a = 0; a < G; ++a)
    for (Eigen::Index b = 0; b < G; ++b) {
      const double dx = torus_distance(static_cast<double>(a) / G, center(0));
      const double dp = torus_distance(static_cast<double>(b) / G, center(1));
      if (std::hypot(dx, dp) <= radius) mass += H(a, b);
    }
  return mass / static_cast<double>(G * G);
}

std::string husimi_csv(const Eigen::MatrixXd& H, int N, double squeeze) {
  std::ostringstream out;
  out.precision(10);
  out << "N,G,squeeze\n" << N << ',' << H.rows() << ',' << squeeze << '\n';
  for (Eigen::Index a = 0; a < H.rows(); ++a) {
    for (Eigen::Index b = 0; b < H.cols(); ++b) out << (b ? "," : "") << H(a, b);
    out << '\n';
  }
  return out.str();
}

// --- scarred states --------------------------------------------------------

ScarredState scarred_state(const QuantizedCatMap& Q, double admissibility) {
  const int N = Q.N();
  const double chi = lyapunov(Q.map());
  const QuantumPeriod qp = quantum_period(Q);
  const double limit = admissibility * std::log(static_cast<double>(N)) / chi;
  if (static_cast<double>(qp.period) > limit)
    throw Error(ErrorKind::NotAdmissible, "quantum period " + std::to_string(qp.period) + " exceeds " +
                                              std::to_string(limit));
  const long T = qp.period;
  const Eigen::Vector2d z = Q.fixed_point();
  const Eigen::VectorXcd phi = coherent_state(N, z(0), z(1));
  const double theta = std::arg(qp.phase) / static_cast<double>(T);

  // k runs over [-T/2, T/2); U^{k0} = U^{T + k0} / phase.
  const long k0 = -(T / 2);
  Eigen::VectorXcd w = Q.apply(phi, T + k0) / qp.phase;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(N);
  for (long k = k0; k < k0 + T; ++k) {
    psi += std::polar(1.0, -theta * static_cast<double>(k)) * w;
    w = Q.apply(w);
  }
  const double n = psi.norm();
  if (n < 1e-6) throw Error(ErrorKind::NotAdmissible, "coherent state misses the eigenspace");
  psi /= n;
  const double residual = (Q.apply(psi) - std::polar(1.0, theta) * psi).norm();
  return {psi, T, qp.phase, theta, z, residual};
}

// --- eigensystem -----------------------------------------------------------

std::vector<Eigenpair> eigensystem(const QuantizedCatMap& Q) {
  const int N = Q.N();
  const Eigen::MatrixXcd U = Q.matrix();
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(U);
  if (schur.info() != Eigen::Success) throw Error(ErrorKind::DiagonalizationFailure, "Schur did not converge");
  const Eigen::MatrixXcd& T = schur.matrixT();
  const Eigen::MatrixXcd& Z = schur.matrixU();
  const double off = T.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().cwiseAbs().maxCoeff();
  if (off > 1e-8) throw Error(ErrorKind::DiagonalizationFailure, "Schur form is not diagonal");

  std::vector<int> order(static_cast<std::size_t>(N));
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> phase(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) phase[static_cast<std::size_t>(i)] = std::arg(T(i, i));
  std::sort(order.begin(), order.end(), [&](int a, int b) { return phase[a] < phase[b]; });

  // Clusters of consecutive phases; the last one wraps onto the first when
  // they straddle the branch cut.
  std::vector<std::vector<int>> clusters;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i == 0 || phase[order[i]] - phase[order[i - 1]] >= 1e-8) clusters.emplace_back();
    clusters.back().push_back(order[i]);
  }
  if (clusters.size() > 1 && phase[order.front()] + 2.0 * kPi - phase[order.back()] < 1e-8) {
    auto last = clusters.back();
    clusters.pop_back();
    clusters.front().insert(clusters.front().begin(), last.begin(), last.end());
  }

  Eigen::VectorXd cutoff(N);
  for (int j = 0; j < N; ++j) cutoff(j) = 2 * j < N ? 1.0 : 0.0;

  std::vector<Eigenpair> out;
  out.reserve(static_cast<std::size_t>(N));
  for (const auto& cl : clusters) {
    const auto s = static_cast<Eigen::Index>(cl.size());
    Eigen::MatrixXcd V(N, s);
    for (Eigen::Index i = 0; i < s; ++i) V.col(i) = Z.col(cl[static_cast<std::size_t>(i)]);
    if (s > 1) {
      const Eigen::MatrixXcd C = V.adjoint() * cutoff.asDiagonal() * V;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(0.5 * (C + C.adjoint()));
      if (eig.info() != Eigen::Success) throw Error(ErrorKind::DiagonalizationFailure, "cluster tie-break");
      V = V * eig.eigenvectors();
    }
    for (Eigen::Index i = 0; i < s; ++i) {
      Eigen::VectorXcd v = V.col(i);
      Eigen::Index jmax = 0;
      v.cwiseAbs().maxCoeff(&jmax);
      v *= std::conj(v(jmax)) / std::abs(v(jmax));
      out.push_back({phase[static_cast<std::size_t>(cl[static_cast<std::size_t>(i)])], std::move(v)});
    }
  }
  return out;
}

// --- partition products ----------------------------------------------------

double partition_product_norm(const Eigen::MatrixXcd& U, const std::vector<Eigen::VectorXd>& partition,
                              const std::vector<int>& word) {
  const auto N = U.rows();
  if (partition.empty()) throw Error(ErrorKind::BadPartition, "empty partition");
  Eigen::VectorXd total = Eigen::VectorXd::Zero(N);
  for (const auto& p : partition) {
    if (p.size() != N) throw Error(ErrorKind::BadPartition, "cutoff has wrong length");
    total += p;
  }
  if ((total.array() - 1.0).abs().maxCoeff() > 1e-10)
    throw Error(ErrorKind::BadPartition, "cutoffs do not sum to the identity");
  if (word.empty()) throw Error(ErrorKind::InvalidArgument, "empty word");
  for (int a : word)
    if (a < 0 || a >= static_cast<int>(partition.size())) throw Error(ErrorKind::BadPartition, "word letter out of range");

  Eigen::MatrixXcd W = partition[static_cast<std::size_t>(word[0])].cast<cplx>().asDiagonal();
  for (std::size_t i = 1; i < word.size(); ++i)
    W = partition[static_cast<std::size_t>(word[i])].cast<cplx>().asDiagonal() * (U * W);
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(W);
  return svd.singularValues()(0);
}

double partition_product_norm(const QuantizedCatMap& Q, const std::vector<Eigen::VectorXd>& partition,
                              const std::vector<int>& word) {
  const long period = quantum_period(Q).period;
  if (static_cast<long>(word.size()) > period)
    throw Error(ErrorKind::InvalidArgument, "word longer than the quantum period");
  return partition_product_norm(Q.matrix(), partition, word);
}

}  // namespace qlab::catmap
