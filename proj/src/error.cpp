#include "linkguard/error.hpp"

namespace linkguard {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::NotHurwitz: return "NotHurwitz";
    case ErrorCode::SingularSolve: return "SingularSolve";
    case ErrorCode::NotStabilizing: return "NotStabilizing";
    case ErrorCode::RiccatiFailure: return "RiccatiFailure";
    case ErrorCode::LostStabilizability: return "LostStabilizability";
    case ErrorCode::MaxIterations: return "MaxIterations";
    case ErrorCode::LineSearchFailure: return "LineSearchFailure";
    case ErrorCode::PatternNotStabilizable: return "PatternNotStabilizable";
    case ErrorCode::EmptySweep: return "EmptySweep";
    case ErrorCode::InvalidAssumption: return "InvalidAssumption";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InfeasibleOutcome: return "InfeasibleOutcome";
    case ErrorCode::UnknownFormat: return "UnknownFormat";
  }
  return "Unknown";
}

}  // namespace linkguard
