#pragma once

#include <stdexcept>
#include <string>

namespace momentcut {

enum class ErrorCode {
  ZeroVector,
  DimensionMismatch,
  Parse,
  InvalidPolytope,
  NotSimple,
  NotUnimodular,
  NotRegularLevel,
  EmptyResult,
  BlowupTooLarge,
  VertexNotBlowable,
  DegenerateVertex,
  LabeledFaceUnsupported,
  Precondition,
  WallNotSimpleCrossing,
  InterpolationMismatch,
  FixedPointInput,
  StepTooLarge,
  Overflow,
};

const char* error_code_name(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it onto an exit status without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace momentcut
