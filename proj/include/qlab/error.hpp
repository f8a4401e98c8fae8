#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qlab {

// Signals raised by the numerical modules. The CLI maps every kind to exit
// status 3 except InvalidArgument, which is a usage error.
enum class ErrorKind {
  InvalidArgument,
  InvalidArc,
  EmptyShell,
  UnsupportedDimension,
  NonOrthonormalBasis,
  EmptyRegion,
  IrrationalDirection,
  KernelNotConstant,
  StepFailure,
  ShapeMismatch,
  QuadratureUnderresolved,
  NonHyperbolic,
  NoPeriod,
  PeriodNotFound,
  NotAdmissible,
  DiagonalizationFailure,
  BadPartition,
  InsufficientSamples,
  NonPeriodic,
  NoSignChange,
  Unsupported,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::InvalidArc: return "invalid-arc";
    case ErrorKind::EmptyShell: return "empty-shell";
    case ErrorKind::UnsupportedDimension: return "unsupported-dimension";
    case ErrorKind::NonOrthonormalBasis: return "non-orthonormal-basis";
    case ErrorKind::EmptyRegion: return "empty-region";
    case ErrorKind::IrrationalDirection: return "irrational-direction";
    case ErrorKind::KernelNotConstant: return "kernel-not-constant";
    case ErrorKind::StepFailure: return "step-failure";
    case ErrorKind::ShapeMismatch: return "shape-mismatch";
    case ErrorKind::QuadratureUnderresolved: return "quadrature-underresolved";
    case ErrorKind::NonHyperbolic: return "non-hyperbolic";
    case ErrorKind::NoPeriod: return "no-period";
    case ErrorKind::PeriodNotFound: return "period-not-found";
    case ErrorKind::NotAdmissible: return "not-admissible";
    case ErrorKind::DiagonalizationFailure: return "diagonalization-failure";
    case ErrorKind::BadPartition: return "bad-partition";
    case ErrorKind::InsufficientSamples: return "insufficient-samples";
    case ErrorKind::NonPeriodic: return "non-periodic";
    case ErrorKind::NoSignChange: return "no-sign-change";
    case ErrorKind::Unsupported: return "unsupported";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qlab
