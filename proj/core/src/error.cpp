#include "hintelab/error.hpp"

namespace hintelab {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::ScopeViolation: return "ScopeViolation";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::UnboundName: return "UnboundName";
    case ErrorKind::FuelExhausted: return "FuelExhausted";
    case ErrorKind::NotAnInstance: return "NotAnInstance";
    case ErrorKind::AlreadyDeclared: return "AlreadyDeclared";
    case ErrorKind::UnifyFail: return "UnifyFail";
    case ErrorKind::OccursCheck: return "OccursCheck";
    case ErrorKind::DepthExceeded: return "DepthExceeded";
    case ErrorKind::NonlinearPattern: return "NonlinearPattern";
    case ErrorKind::NotAcceptable: return "NotAcceptable";
    case ErrorKind::IllTyped: return "IllTyped";
    case ErrorKind::InvalidArgIndex: return "InvalidArgIndex";
    case ErrorKind::DuplicateCoercion: return "DuplicateCoercion";
    case ErrorKind::NoCoercion: return "NoCoercion";
    case ErrorKind::NoMatch: return "NoMatch";
    case ErrorKind::UnsolvedObligation: return "UnsolvedObligation";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace hintelab
