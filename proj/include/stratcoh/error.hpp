#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stratcoh {

enum class ErrorCode {
  CycleDetected,
  UnknownElement,
  DuplicateElement,
  NotComparable,
  NotIncreasing,
  InvalidComplex,
  InvalidChainMap,
  RingMismatch,
  NotADoubleComplex,
  FiltrationNotPreserved,
  NotAField,
  NotCharZero,
  NotValidated,
  TorsionObstruction,
  NotCohenMacaulay,
  ActionInvalid,
  MissingModel,
  InvalidLattice,
  HypothesisViolated,
  InvalidPattern,
  ParseError,
  Cancelled,
  Internal,
};

std::string_view to_string(ErrorCode code);

/// Every failure in the library surfaces as this exception; `code()` names the
/// failure class and `what()` carries the details (offending element, square,
/// degree, ...).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code), detail_(detail) {}

  ErrorCode code() const noexcept { return code_; }
  /// what() without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace stratcoh
