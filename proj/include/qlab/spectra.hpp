#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qlab::spectra {

// Exact Laplace spectra: flat torus R^n / (2 pi Z)^n (lambda^2 = |k|^2) and
// the round S^2 (lambda^2 = l(l+1), multiplicity 2l+1).
struct SpectrumModel {
  enum Kind { Torus, Sphere2 } kind;
  int dimension;

  static SpectrumModel torus(int n) { return {Torus, n}; }
  static SpectrumModel sphere() { return {Sphere2, 2}; }
  double volume() const;
  std::string tag() const;
};

// |{j : lambda_j <= lam}| with multiplicity.
std::int64_t counting_function(const SpectrumModel& model, double lam);

// pi^{n/2} / ((2 pi)^n Gamma(n/2 + 1)) Vol lambda^n
double weyl_leading_term(const SpectrumModel& model, double lam);

struct WeylRow {
  double lambda;
  std::int64_t count;
  double leading;
  double remainder;
};

std::vector<WeylRow> weyl_table(const SpectrumModel& model, double lam_max, double step);

}  // namespace qlab::spectra
