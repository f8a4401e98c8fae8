#include "qlab/spectra.hpp"

#include <cmath>
#include <numbers>

#include "qlab/error.hpp"
#include "qlab/lattice.hpp"

namespace qlab::spectra {

double SpectrumModel::volume() const {
  if (kind == Sphere2) return 4.0 * std::numbers::pi;
  return std::pow(2.0 * std::numbers::pi, dimension);
}

std::string SpectrumModel::tag() const {
  return kind == Sphere2 ? "sphere-2" : "torus-" + std::to_string(dimension);
}

std::int64_t counting_function(const SpectrumModel& model, double lam) {
  if (!(lam >= 0.0)) throw Error(ErrorKind::InvalidArgument, "lambda must be non-negative");
  if (model.kind == SpectrumModel::Torus) return lattice::count_in_ball(lam, model.dimension);
  // Largest L with L(L+1) <= lambda^2, compared in integers when lambda^2 is one.
  std::int64_t bound;
  if (auto m = lattice::exact_square(lam)) bound = *m;
  else bound = static_cast<std::int64_t>(std::floor(lam * lam));
  std::int64_t L = static_cast<std::int64_t>(std::sqrt(static_cast<double>(bound)));
  while (L > 0 && L * (L + 1) > bound) --L;
  while ((L + 1) * (L + 2) <= bound) ++L;
  return (L + 1) * (L + 1);
}

double weyl_leading_term(const SpectrumModel& model, double lam) {
  if (!(lam > 0.0)) throw Error(ErrorKind::InvalidArgument, "lambda must be positive");
  const double n = model.dimension;
  const double pi = std::numbers::pi;
  return std::pow(pi, n / 2.0) / (std::pow(2.0 * pi, n) * std::tgamma(n / 2.0 + 1.0)) * model.volume() *
         std::pow(lam, n);
}

std::vector<WeylRow> weyl_table(const SpectrumModel& model, double lam_max, double step) {
  if (!(step > 0.0) || !(lam_max > 0.0)) throw Error(ErrorKind::InvalidArgument, "need positive range and step");
  std::vector<WeylRow> rows;
  const auto count = static_cast<long>(std::floor(lam_max / step + 1e-9));
  for (long i = 1; i <= count; ++i) {
    const double lam = step * static_cast<double>(i);
    const auto c = counting_function(model, lam);
    const double lead = weyl_leading_term(model, lam);
    rows.push_back({lam, c, lead, static_cast<double>(c) - lead});
  }
  return rows;
}

}  // namespace qlab::spectra
