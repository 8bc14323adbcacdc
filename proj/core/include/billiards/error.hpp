#pragma once

#include <stdexcept>
#include <string>

namespace billiards {

enum class ErrorCode {
  NonConvex,
  DegenerateSpec,
  OutOfDomain,
  QuadratureFailure,
  MapUndefined,
  EscapesDomain,
  RootFindFailure,
  IllConditioned,
  OrderTooHigh,
  OrderMismatch,
  ProfileNoise,
  LevelCurveEscape,
  OutsideValidity,
  SectorTooLarge,
  OrbitEscape,
  GradientLoss,
  CuspDetected,
  ThroughOrigin,
  NoRealTangency,
  LeavesCross,
  Inconclusive,
  InconclusiveInput,
  VerdictNegative,
  Validation,
  Io
};

const char* error_name(ErrorCode code);

/// Process exit code for a failure of this kind (2 validation, 3 numerical, 4 negative verdict).
int exit_code_for(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace billiards
