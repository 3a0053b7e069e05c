#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace skewtower {

enum class ErrorKind {
  DivisionByZero,
  NotAPrime,
  FieldMismatch,
  Overflow,
  TowerMismatch,
  PrecisionMismatch,
  InvalidOperand,
  NotAUnit,
  DegreeLowering,
  NonLocalSigma,
  NonLocalDelta,
  SingularSigmaLinearPart,
  InconsistentSigma,
  InconsistentDelta,
  NotAntisymmetric,
  InvalidScalar,
  BadPrimeCongruence,
  NotStableThroughStage,
  NotPureAutomorphic,
  DegreeOverflow,
  PrecisionTooLow,
  UnsupportedField,
  DefectNonZero,
  SyntaxError,
  UseBeforeDeclaration,
  ValidationError,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::NotAPrime: return "NotAPrime";
    case ErrorKind::FieldMismatch: return "FieldMismatch";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::TowerMismatch: return "TowerMismatch";
    case ErrorKind::PrecisionMismatch: return "PrecisionMismatch";
    case ErrorKind::InvalidOperand: return "InvalidOperand";
    case ErrorKind::NotAUnit: return "NotAUnit";
    case ErrorKind::DegreeLowering: return "DegreeLowering";
    case ErrorKind::NonLocalSigma: return "NonLocalSigma";
    case ErrorKind::NonLocalDelta: return "NonLocalDelta";
    case ErrorKind::SingularSigmaLinearPart: return "SingularSigmaLinearPart";
    case ErrorKind::InconsistentSigma: return "InconsistentSigma";
    case ErrorKind::InconsistentDelta: return "InconsistentDelta";
    case ErrorKind::NotAntisymmetric: return "NotAntisymmetric";
    case ErrorKind::InvalidScalar: return "InvalidScalar";
    case ErrorKind::BadPrimeCongruence: return "BadPrimeCongruence";
    case ErrorKind::NotStableThroughStage: return "NotStableThroughStage";
    case ErrorKind::NotPureAutomorphic: return "NotPureAutomorphic";
    case ErrorKind::DegreeOverflow: return "DegreeOverflow";
    case ErrorKind::PrecisionTooLow: return "PrecisionTooLow";
    case ErrorKind::UnsupportedField: return "UnsupportedField";
    case ErrorKind::DefectNonZero: return "DefectNonZero";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UseBeforeDeclaration: return "UseBeforeDeclaration";
    case ErrorKind::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

struct SourceLocation {
  int line = 0;
  int column = 0;
};

/// Every failure in the library is reported as an Error carrying a kind tag.
/// Parser errors additionally carry a 1-based source location.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<SourceLocation> where = std::nullopt)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind),
        where_(where) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::optional<SourceLocation>& where() const noexcept { return where_; }

 private:
  ErrorKind kind_;
  std::optional<SourceLocation> where_;
};

}  // namespace skewtower
