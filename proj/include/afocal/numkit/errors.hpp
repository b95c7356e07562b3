#pragma once

#include <stdexcept>
#include <string>

namespace afocal {

enum class ErrorKind {
  DimensionMismatch,
  GridTooCoarse,
  NonUniformGrid,
  DivergentODE,
  InflectionPoint,
  NotClosed,
  DegenerateTorsion,
  DegeneratePoint,
  Containment,
  EmptyLocus,
  InsufficientJets,
  DegenerateMetric,
  SingularSystem,
  NonSimpleEigenvalue,
  EmptySection,
  DegenerateTangent,
  ApexOnHyperplane,
  InvalidConfig,
  SpecError,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::NonUniformGrid: return "NonUniformGrid";
    case ErrorKind::DivergentODE: return "DivergentODE";
    case ErrorKind::InflectionPoint: return "InflectionPoint";
    case ErrorKind::NotClosed: return "NotClosed";
    case ErrorKind::DegenerateTorsion: return "DegenerateTorsion";
    case ErrorKind::DegeneratePoint: return "DegeneratePoint";
    case ErrorKind::Containment: return "Containment";
    case ErrorKind::EmptyLocus: return "EmptyLocus";
    case ErrorKind::InsufficientJets: return "InsufficientJets";
    case ErrorKind::DegenerateMetric: return "DegenerateMetric";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::NonSimpleEigenvalue: return "NonSimpleEigenvalue";
    case ErrorKind::EmptySection: return "EmptySection";
    case ErrorKind::DegenerateTangent: return "DegenerateTangent";
    case ErrorKind::ApexOnHyperplane: return "ApexOnHyperplane";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::SpecError: return "SpecError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a kind so callers (and the CLI
/// exit-code mapping) can branch on it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// True for malformed input, false for numerical failures.
  bool is_spec_error() const noexcept {
    return kind_ == ErrorKind::SpecError || kind_ == ErrorKind::InvalidConfig;
  }

 private:
  ErrorKind kind_;
};

/// A point where a pointwise test failed, reported with its parameter.
class PointError : public Error {
 public:
  PointError(ErrorKind kind, double u, const std::string& what)
      : Error(kind, what + " at u=" + std::to_string(u)), u_(u) {}
  double u() const noexcept { return u_; }

 private:
  double u_;
};

}  // namespace afocal
