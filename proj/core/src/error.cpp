#include "billiards/error.hpp"

namespace billiards {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonConvex: return "NonConvex";
    case ErrorCode::DegenerateSpec: return "DegenerateSpec";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::MapUndefined: return "MapUndefined";
    case ErrorCode::EscapesDomain: return "EscapesDomain";
    case ErrorCode::RootFindFailure: return "RootFindFailure";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::OrderTooHigh: return "OrderTooHigh";
    case ErrorCode::OrderMismatch: return "OrderMismatch";
    case ErrorCode::ProfileNoise: return "ProfileNoise";
    case ErrorCode::LevelCurveEscape: return "LevelCurveEscape";
    case ErrorCode::OutsideValidity: return "OutsideValidity";
    case ErrorCode::SectorTooLarge: return "SectorTooLarge";
    case ErrorCode::OrbitEscape: return "OrbitEscape";
    case ErrorCode::GradientLoss: return "GradientLoss";
    case ErrorCode::CuspDetected: return "CuspDetected";
    case ErrorCode::ThroughOrigin: return "ThroughOrigin";
    case ErrorCode::NoRealTangency: return "NoRealTangency";
    case ErrorCode::LeavesCross: return "LeavesCross";
    case ErrorCode::Inconclusive: return "Inconclusive";
    case ErrorCode::InconclusiveInput: return "InconclusiveInput";
    case ErrorCode::VerdictNegative: return "VerdictNegative";
    case ErrorCode::Validation: return "Validation";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonConvex:
    case ErrorCode::DegenerateSpec:
    case ErrorCode::OutOfDomain:
    case ErrorCode::OrderTooHigh:
    case ErrorCode::OrderMismatch:
    case ErrorCode::OutsideValidity:
    case ErrorCode::SectorTooLarge:
    case ErrorCode::GradientLoss:
    case ErrorCode::ThroughOrigin:
    case ErrorCode::Validation:
    case ErrorCode::Io:
      return 2;
    case ErrorCode::VerdictNegative:
      return 4;
    default:
      return 3;
  }
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace billiards
