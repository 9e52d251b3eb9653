#include "pencil/types.hpp"

namespace pencil {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DuplicateIndex: return "DuplicateIndex";
    case ErrorKind::SignConflict: return "SignConflict";
    case ErrorKind::IndexMismatch: return "IndexMismatch";
    case ErrorKind::OrderTooHigh: return "OrderTooHigh";
    case ErrorKind::NonFiniteInput: return "NonFiniteInput";
    case ErrorKind::RootNotConverged: return "RootNotConverged";
    case ErrorKind::RootCountMismatch: return "RootCountMismatch";
    case ErrorKind::WindingAmbiguous: return "WindingAmbiguous";
    case ErrorKind::PoleTooClose: return "PoleTooClose";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::DegenerateEps1: return "DegenerateEps1";
    case ErrorKind::NegativeDelta: return "NegativeDelta";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::ContourTouchesPole: return "ContourTouchesPole";
    case ErrorKind::Omega0Mismatch: return "Omega0Mismatch";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

ErrorClass classify(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::RootNotConverged:
    case ErrorKind::RootCountMismatch:
    case ErrorKind::WindingAmbiguous:
    case ErrorKind::PoleTooClose:
    case ErrorKind::SingularSystem:
    case ErrorKind::DegenerateEps1:
    case ErrorKind::ContourTouchesPole:
      return ErrorClass::Numerical;
    case ErrorKind::Io:
      return ErrorClass::Io;
    default:
      return ErrorClass::Validation;
  }
}

}  // namespace pencil
