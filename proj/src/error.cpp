#include "stratcoh/error.hpp"

namespace stratcoh {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::UnknownElement: return "UnknownElement";
    case ErrorCode::DuplicateElement: return "DuplicateElement";
    case ErrorCode::NotComparable: return "NotComparable";
    case ErrorCode::NotIncreasing: return "NotIncreasing";
    case ErrorCode::InvalidComplex: return "InvalidComplex";
    case ErrorCode::InvalidChainMap: return "InvalidChainMap";
    case ErrorCode::RingMismatch: return "RingMismatch";
    case ErrorCode::NotADoubleComplex: return "NotADoubleComplex";
    case ErrorCode::FiltrationNotPreserved: return "FiltrationNotPreserved";
    case ErrorCode::NotAField: return "NotAField";
    case ErrorCode::NotCharZero: return "NotCharZero";
    case ErrorCode::NotValidated: return "NotValidated";
    case ErrorCode::TorsionObstruction: return "TorsionObstruction";
    case ErrorCode::NotCohenMacaulay: return "NotCohenMacaulay";
    case ErrorCode::ActionInvalid: return "ActionInvalid";
    case ErrorCode::MissingModel: return "MissingModel";
    case ErrorCode::InvalidLattice: return "InvalidLattice";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::InvalidPattern: return "InvalidPattern";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::Cancelled: return "Cancelled";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace stratcoh
