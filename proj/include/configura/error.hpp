#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace configura {

enum class ErrorCode {
  NotPrime,
  NotPrimePower,
  ZeroElement,
  NotASubfield,
  BadMarks,
  InvalidRuler,
  NotCoprime,
  NotASubset,
  ModulusTooSmall,
  EmptyRange,
  ModulusBelowGolombBound,
  NotADivisor,
  OutOfTable,
  NotPrimitiveRoot,
  BadS,
  EmptyLineSet,
  NotConstant,
  PreconditionFailed,
  DeltaTooBig,
  BadC,
  TOdd,
  BadF,
  NotRegular,
  MatchingFailed,
  ShapeMismatch,
  InvalidAggregate,
  CapacityExceeded,
  ShapeTooSmall,
  WeightsNotBinary,
  NotPopulated,
  ReplayMismatch,
  RegistryConflict,
  ParseError,
  InternalInvariantViolation,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::NotPrimePower: return "NotPrimePower";
    case ErrorCode::ZeroElement: return "ZeroElement";
    case ErrorCode::NotASubfield: return "NotASubfield";
    case ErrorCode::BadMarks: return "BadMarks";
    case ErrorCode::InvalidRuler: return "InvalidRuler";
    case ErrorCode::NotCoprime: return "NotCoprime";
    case ErrorCode::NotASubset: return "NotASubset";
    case ErrorCode::ModulusTooSmall: return "ModulusTooSmall";
    case ErrorCode::EmptyRange: return "EmptyRange";
    case ErrorCode::ModulusBelowGolombBound: return "ModulusBelowGolombBound";
    case ErrorCode::NotADivisor: return "NotADivisor";
    case ErrorCode::OutOfTable: return "OutOfTable";
    case ErrorCode::NotPrimitiveRoot: return "NotPrimitiveRoot";
    case ErrorCode::BadS: return "BadS";
    case ErrorCode::EmptyLineSet: return "EmptyLineSet";
    case ErrorCode::NotConstant: return "NotConstant";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
    case ErrorCode::DeltaTooBig: return "DeltaTooBig";
    case ErrorCode::BadC: return "BadC";
    case ErrorCode::TOdd: return "TOdd";
    case ErrorCode::BadF: return "BadF";
    case ErrorCode::NotRegular: return "NotRegular";
    case ErrorCode::MatchingFailed: return "MatchingFailed";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::InvalidAggregate: return "InvalidAggregate";
    case ErrorCode::CapacityExceeded: return "CapacityExceeded";
    case ErrorCode::ShapeTooSmall: return "ShapeTooSmall";
    case ErrorCode::WeightsNotBinary: return "WeightsNotBinary";
    case ErrorCode::NotPopulated: return "NotPopulated";
    case ErrorCode::ReplayMismatch: return "ReplayMismatch";
    case ErrorCode::RegistryConflict: return "RegistryConflict";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InternalInvariantViolation: return "InternalInvariantViolation";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace configura
